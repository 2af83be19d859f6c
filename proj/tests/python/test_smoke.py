import math

import pytest

import qcredit as qc


def test_zero_state_and_gates():
    state = qc.new_zero_state(2)
    amps = state.amplitudes
    assert amps[0] == 1.0 + 0.0j
    assert all(a == 0.0 for a in amps[1:])

    qc.apply_gate(state, qc.GateOp.rx(0, math.pi))
    assert abs(state.amplitudes[1] - (-1.0j)) < 1e-12
    assert qc.expectation_z(state, 0) == pytest.approx(-1.0, abs=1e-12)

    with pytest.raises(ValueError):
        qc.new_zero_state(21)


def test_ansatz_forward_and_gradients():
    cfg = qc.AnsatzConfig(n_qubits=3, n_blocks=2)
    params = [0.0] * cfg.param_count()
    expectations = qc.ansatz_forward(cfg, [0.0, 0.0, 0.0], params)
    assert expectations == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)

    single = qc.AnsatzConfig(n_qubits=1)
    d_params, d_input = qc.ansatz_gradients(single, [0.3], [0.0, 0.0, 0.0])
    assert d_input[0][0] == pytest.approx(-math.sin(0.3), abs=1e-10)
    assert len(d_params[0]) == 3


def test_auc_worked_example():
    score = qc.auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    assert score.value == 0.75
    assert (score.n_pos, score.n_neg) == (2, 2)

    curve = qc.roc_curve([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    assert curve.fpr[0] == 0.0 and curve.tpr[0] == 0.0
    assert curve.fpr[-1] == 1.0 and curve.tpr[-1] == 1.0


def test_generator_counts_and_split():
    spec = qc.GeneratorSpec(n_pos=20, n_neg=60, signal_strength=2.0, seed=5)
    dataset = qc.generate(spec)
    assert dataset.rows == 80
    assert dataset.count_label(1.0) == 20

    qc.split(dataset, 0.10, 0.15, 7)
    qc.fit_standardize(dataset)
    assert len(dataset.val_idx) == 8
    assert len(dataset.test_idx) == 12
    assert len(dataset.train_idx) == 60


def test_tiny_training_run_is_deterministic():
    spec = qc.GeneratorSpec(n_pos=16, n_neg=48, signal_strength=2.0, seed=9)
    dataset = qc.generate(spec)
    qc.split(dataset, 0.10, 0.15, 7)
    qc.fit_standardize(dataset)

    cfg = qc.TrainConfig(
        epochs=2,
        seed=3,
        model_kind=qc.ModelKind.FH,
        ansatz=qc.AnsatzConfig(n_qubits=3),
        threads=2,
    )
    a = qc.train(cfg, dataset)
    b = qc.train(cfg, dataset)
    assert qc.report_signature(a.report) == qc.report_signature(b.report)
    assert len(a.report.val_auc) == 2
    assert 0.0 <= a.report.test_auc <= 1.0
