#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcredit/ansatz.hpp"
#include "qcredit/data.hpp"
#include "qcredit/experiments.hpp"
#include "qcredit/metrics.hpp"
#include "qcredit/parallel.hpp"
#include "qcredit/qsim.hpp"
#include "qcredit/training.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace qcredit;

namespace {

AnsatzConfig make_ansatz(int n_qubits, int n_blocks, int layers_per_block, bool ring) {
    AnsatzConfig cfg;
    cfg.n_qubits = n_qubits;
    cfg.n_blocks = n_blocks;
    cfg.layers_per_block = layers_per_block;
    cfg.ring = ring;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hybrid quantum-classical credit classifier core";

    py::class_<Statevector>(m, "Statevector")
        .def_readonly("n_qubits", &Statevector::n_qubits)
        .def_property_readonly("amplitudes",
                               [](const Statevector& s) { return s.amps; })
        .def("__len__", [](const Statevector& s) { return s.size(); });

    py::class_<GateOp>(m, "GateOp")
        .def_static("rx", &GateOp::rx, "target"_a, "theta"_a)
        .def_static("ry", &GateOp::ry, "target"_a, "theta"_a)
        .def_static("rz", &GateOp::rz, "target"_a, "theta"_a)
        .def_static("rot", &GateOp::rot, "target"_a, "phi"_a, "theta"_a, "omega"_a)
        .def_static("cnot", &GateOp::cnot, "control"_a, "target"_a);

    m.def("new_zero_state", &new_zero_state, "n_qubits"_a);
    m.def("apply_gate", &apply_gate, "state"_a, "gate"_a);
    m.def("apply_circuit", &apply_circuit, "state"_a, "gates"_a);
    m.def("expectation_z", &expectation_z, "state"_a, "qubit"_a);
    m.def("expectation_z_all", &expectation_z_all, "state"_a);

    py::class_<AnsatzConfig>(m, "AnsatzConfig")
        .def(py::init(&make_ansatz), "n_qubits"_a, "n_blocks"_a = 1, "layers_per_block"_a = 1,
             "ring"_a = true)
        .def_readonly("n_qubits", &AnsatzConfig::n_qubits)
        .def_readonly("n_blocks", &AnsatzConfig::n_blocks)
        .def_readonly("layers_per_block", &AnsatzConfig::layers_per_block)
        .def_readonly("ring", &AnsatzConfig::ring)
        .def("param_count", &AnsatzConfig::param_count);

    m.def("build_circuit", &build_circuit, "config"_a, "x"_a, "params"_a);
    m.def("ansatz_forward", &ansatz_forward, "config"_a, "x"_a, "params"_a);
    m.def(
        "ansatz_gradients",
        [](const AnsatzConfig& cfg, const QuantumInput& x, const QuantumParams& params) {
            const AnsatzGradients g = ansatz_gradients(cfg, x, params);
            auto to_rows = [](const Matrix& mat) {
                std::vector<std::vector<double>> rows(mat.rows);
                for (std::size_t r = 0; r < mat.rows; ++r) {
                    rows[r].assign(mat.data.begin() + static_cast<std::ptrdiff_t>(r * mat.cols),
                                   mat.data.begin() +
                                       static_cast<std::ptrdiff_t>((r + 1) * mat.cols));
                }
                return rows;
            };
            return py::make_tuple(to_rows(g.d_params), to_rows(g.d_input));
        },
        "config"_a, "x"_a, "params"_a,
        "returns (d_expectations/d_params, d_expectations/d_input) as row lists");

    py::class_<RocCurve>(m, "RocCurve")
        .def_readonly("thresholds", &RocCurve::thresholds)
        .def_readonly("fpr", &RocCurve::fpr)
        .def_readonly("tpr", &RocCurve::tpr);

    py::class_<AucScore>(m, "AucScore")
        .def_readonly("value", &AucScore::value)
        .def_readonly("n_pos", &AucScore::n_pos)
        .def_readonly("n_neg", &AucScore::n_neg);

    m.def("roc_curve", &roc_curve, "scores"_a, "labels"_a);
    m.def("auc", &auc, "scores"_a, "labels"_a);

    py::class_<GeneratorSpec>(m, "GeneratorSpec")
        .def(py::init([](std::size_t n_pos, std::size_t n_neg, double signal_strength,
                         std::uint64_t seed) {
                 GeneratorSpec spec;
                 spec.n_pos = n_pos;
                 spec.n_neg = n_neg;
                 spec.signal_strength = signal_strength;
                 spec.seed = seed;
                 return spec;
             }),
             "n_pos"_a = 246, "n_neg"_a = 2000, "signal_strength"_a = 1.0, "seed"_a = 1)
        .def_readwrite("n_pos", &GeneratorSpec::n_pos)
        .def_readwrite("n_neg", &GeneratorSpec::n_neg)
        .def_readwrite("signal_strength", &GeneratorSpec::signal_strength)
        .def_readwrite("seed", &GeneratorSpec::seed);

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("rows", &Dataset::rows)
        .def_readonly("labels", &Dataset::labels)
        .def_readonly("features", &Dataset::features)
        .def_readonly("train_idx", &Dataset::train_idx)
        .def_readonly("val_idx", &Dataset::val_idx)
        .def_readonly("test_idx", &Dataset::test_idx)
        .def("count_label", &Dataset::count_label, "label"_a);

    m.def("generate", &generate, "spec"_a);
    m.def("load_csv", &load_csv, "path"_a);
    m.def("write_csv", &write_csv, "dataset"_a, "path"_a);
    m.def("split", &split, "dataset"_a, "val_frac"_a = 0.10, "test_frac"_a = 0.15, "seed"_a = 42);
    m.def("fit_standardize", &fit_standardize, "dataset"_a);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("FH", ModelKind::FH)
        .value("CC", ModelKind::CC);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init([](int epochs, std::size_t batch_size, double lr, double dropout,
                         std::uint64_t seed, ModelKind model_kind, const AnsatzConfig& ansatz,
                         int threads) {
                 TrainConfig config;
                 config.epochs = epochs;
                 config.batch_size = batch_size;
                 config.lr = lr;
                 config.dropout = dropout;
                 config.seed = seed;
                 config.model_kind = model_kind;
                 config.ansatz = ansatz;
                 config.threads = threads;
                 return config;
             }),
             "epochs"_a = 350, "batch_size"_a = 16, "lr"_a = 0.001, "dropout"_a = 0.1,
             "seed"_a = 1, "model_kind"_a = ModelKind::FH, "ansatz"_a = make_ansatz(6, 1, 1, true),
             "threads"_a = 1)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("lr", &TrainConfig::lr)
        .def_readwrite("threads", &TrainConfig::threads);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("train_loss", &RunReport::train_loss)
        .def_readonly("val_loss", &RunReport::val_loss)
        .def_readonly("train_auc", &RunReport::train_auc)
        .def_readonly("val_auc", &RunReport::val_auc)
        .def_readonly("best_val_auc", &RunReport::best_val_auc)
        .def_readonly("best_epoch", &RunReport::best_epoch)
        .def_readonly("test_auc", &RunReport::test_auc)
        .def_readonly("test_loss", &RunReport::test_loss);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("report", &TrainResult::report)
        .def_readonly("test_scores", &TrainResult::test_scores)
        .def_readonly("test_labels", &TrainResult::test_labels);

    m.def("train", &train, "config"_a, "dataset"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("report_to_json", &report_to_json, "report"_a);
    m.def("report_signature", &report_signature, "report"_a);

    m.def("default_threads", &default_threads);
}
