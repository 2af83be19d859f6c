#include "qcredit/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "qcredit/data.hpp"

namespace qcredit {

namespace {

void check_finite(const std::vector<double>& values, const char* layer) {
    for (double v : values) {
        if (std::isnan(v)) {
            throw std::runtime_error(std::string("model_forward: NaN output at layer ") + layer);
        }
    }
}

}  // namespace

HybridModel HybridModel::create(ModelKind kind, const AnsatzConfig& ansatz, double dropout_rate,
                                std::uint64_t seed) {
    ansatz.validate();
    const auto n = static_cast<std::size_t>(ansatz.n_qubits);

    HybridModel model;
    model.kind = kind;
    model.ansatz = ansatz;
    model.dropout.rate = dropout_rate;
    model.dropout.validate();

    model.master = DenseLayer(kNumFeatures, kNumFeatures, Activation::RELU);
    model.feeding = DenseLayer(kNumFeatures, n, Activation::RELU);
    model.decision = DenseLayer(n, 1, Activation::SIGMOID);

    Rng rng(derive_seed(seed, 100));
    model.master.init_weights(rng);
    model.feeding.init_weights(rng);
    if (kind == ModelKind::CC) {
        model.surrogate = DenseLayer(n, n, Activation::TANH);
        model.surrogate.init_weights(rng);
    } else {
        // near-identity start: the first expectations are smooth monotone maps
        // of the embedding angles, which keeps early training well-conditioned
        model.quantum_params.resize(ansatz.param_count());
        for (auto& p : model.quantum_params) p = rng.uniform(-0.1, 0.1);
    }
    model.decision.init_weights(rng);
    return model;
}

void HybridModel::for_each_tensor(
    const std::function<void(const std::string&, std::vector<double>&)>& fn) {
    fn("master_w", master.weights);
    fn("master_b", master.biases);
    fn("feeding_w", feeding.weights);
    fn("feeding_b", feeding.biases);
    if (kind == ModelKind::CC) {
        fn("surrogate_w", surrogate.weights);
        fn("surrogate_b", surrogate.biases);
    } else {
        fn("quantum", quantum_params);
    }
    fn("decision_w", decision.weights);
    fn("decision_b", decision.biases);
}

void HybridModel::for_each_tensor(
    const std::function<void(const std::string&, const std::vector<double>&)>& fn) const {
    const_cast<HybridModel*>(this)->for_each_tensor(
        [&](const std::string& name, std::vector<double>& v) { fn(name, v); });
}

void ModelGrads::for_each(
    const std::function<void(const std::string&, std::vector<double>&)>& fn) {
    fn("master_w", master_w);
    fn("master_b", master_b);
    fn("feeding_w", feeding_w);
    fn("feeding_b", feeding_b);
    if (!surrogate_w.empty()) {
        fn("surrogate_w", surrogate_w);
        fn("surrogate_b", surrogate_b);
    }
    if (!quantum.empty()) {
        fn("quantum", quantum);
    }
    fn("decision_w", decision_w);
    fn("decision_b", decision_b);
}

std::vector<double>* ModelGrads::block(const std::string& name) {
    if (name == "master_w") return &master_w;
    if (name == "master_b") return &master_b;
    if (name == "feeding_w") return &feeding_w;
    if (name == "feeding_b") return &feeding_b;
    if (name == "surrogate_w") return &surrogate_w;
    if (name == "surrogate_b") return &surrogate_b;
    if (name == "decision_w") return &decision_w;
    if (name == "decision_b") return &decision_b;
    if (name == "quantum") return &quantum;
    return nullptr;
}

namespace {
void add_into(std::vector<double>& acc, const std::vector<double>& g) {
    if (g.empty()) return;
    if (acc.empty()) acc.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
}
}  // namespace

void ModelGrads::add(const ModelGrads& other) {
    add_into(master_w, other.master_w);
    add_into(master_b, other.master_b);
    add_into(feeding_w, other.feeding_w);
    add_into(feeding_b, other.feeding_b);
    add_into(surrogate_w, other.surrogate_w);
    add_into(surrogate_b, other.surrogate_b);
    add_into(decision_w, other.decision_w);
    add_into(decision_b, other.decision_b);
    add_into(quantum, other.quantum);
}

void ModelGrads::scale(double factor) {
    for_each([&](const std::string&, std::vector<double>& g) {
        for (auto& v : g) v *= factor;
    });
}

ModelCache model_forward(const HybridModel& model, const std::vector<double>& features,
                         DropoutMode mode, Rng& rng) {
    ModelCache cache;
    cache.master = dense_forward(model.master, features);
    check_finite(cache.master.output, "master");
    cache.drop1 = dropout_forward(model.dropout, cache.master.output, mode, rng);
    cache.feeding = dense_forward(model.feeding, cache.drop1.output);
    check_finite(cache.feeding.output, "feeding");
    cache.drop2 = dropout_forward(model.dropout, cache.feeding.output, mode, rng);
    cache.quantum_in = cache.drop2.output;

    if (model.kind == ModelKind::FH) {
        cache.expectations = ansatz_forward(model.ansatz, cache.quantum_in, model.quantum_params);
        check_finite(cache.expectations, "quantum");
    } else {
        cache.surrogate = dense_forward(model.surrogate, cache.quantum_in);
        cache.expectations = cache.surrogate.output;
        check_finite(cache.expectations, "surrogate");
    }

    cache.decision = dense_forward(model.decision, cache.expectations);
    check_finite(cache.decision.output, "decision");
    cache.probability = cache.decision.output[0];
    return cache;
}

ModelGrads model_backward(const HybridModel& model, const ModelCache& cache,
                          double d_probability) {
    if (cache.decision.output.empty()) {
        throw std::invalid_argument("model_backward: missing forward cache");
    }
    ModelGrads grads;

    const DenseGrads decision_grads =
        dense_backward(model.decision, cache.decision, {d_probability});
    grads.decision_w = decision_grads.d_weights;
    grads.decision_b = decision_grads.d_biases;
    const std::vector<double>& d_expectations = decision_grads.d_input;

    std::vector<double> d_quantum_in;
    if (model.kind == ModelKind::FH) {
        const auto n = static_cast<std::size_t>(model.ansatz.n_qubits);
        const AnsatzGradients qgrads =
            ansatz_gradients(model.ansatz, cache.quantum_in, model.quantum_params);
        grads.quantum.assign(model.quantum_params.size(), 0.0);
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t p = 0; p < grads.quantum.size(); ++p) {
                grads.quantum[p] += d_expectations[q] * qgrads.d_params.at(q, p);
            }
        }
        d_quantum_in.assign(n, 0.0);
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t i = 0; i < n; ++i) {
                d_quantum_in[i] += d_expectations[q] * qgrads.d_input.at(q, i);
            }
        }
    } else {
        const DenseGrads surrogate_grads =
            dense_backward(model.surrogate, cache.surrogate, d_expectations);
        grads.surrogate_w = surrogate_grads.d_weights;
        grads.surrogate_b = surrogate_grads.d_biases;
        d_quantum_in = surrogate_grads.d_input;
    }

    const std::vector<double> d_feeding_out = dropout_backward(cache.drop2.mask, d_quantum_in);
    const DenseGrads feeding_grads = dense_backward(model.feeding, cache.feeding, d_feeding_out);
    grads.feeding_w = feeding_grads.d_weights;
    grads.feeding_b = feeding_grads.d_biases;

    const std::vector<double> d_master_out =
        dropout_backward(cache.drop1.mask, feeding_grads.d_input);
    const DenseGrads master_grads = dense_backward(model.master, cache.master, d_master_out);
    grads.master_w = master_grads.d_weights;
    grads.master_b = master_grads.d_biases;
    return grads;
}

ParamCounts param_count(const HybridModel& model) {
    ParamCounts counts;
    model.for_each_tensor([&](const std::string& name, const std::vector<double>& v) {
        const bool quantum = name == "quantum";
        counts.blocks.push_back({name, v.size(), quantum});
        (quantum ? counts.quantum_total : counts.classical_total) += v.size();
    });
    return counts;
}

const char* model_kind_name(ModelKind kind) { return kind == ModelKind::FH ? "fh" : "cc"; }

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "fh") return ModelKind::FH;
    if (name == "cc") return ModelKind::CC;
    throw std::invalid_argument("unknown model kind '" + name + "' (expected fh or cc)");
}

void save_checkpoint(const HybridModel& model, std::uint64_t seed, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = model_kind_name(model.kind);
    j["seed"] = seed;
    j["dropout_rate"] = model.dropout.rate;
    j["ansatz"] = {{"n_qubits", model.ansatz.n_qubits},
                   {"n_blocks", model.ansatz.n_blocks},
                   {"layers_per_block", model.ansatz.layers_per_block},
                   {"ring", model.ansatz.ring}};
    nlohmann::json tensors;
    model.for_each_tensor([&](const std::string& name, const std::vector<double>& v) {
        tensors[name] = v;
    });
    j["tensors"] = tensors;

    std::ofstream file(path);
    if (!file) throw std::runtime_error("save_checkpoint: cannot open " + path);
    file << j.dump(2) << '\n';
    if (!file) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

HybridModel load_checkpoint(const std::string& path, std::uint64_t* seed_out) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("load_checkpoint: cannot open " + path);
    nlohmann::json j;
    file >> j;
    if (j.at("format_version").get<int>() != 1) {
        throw std::runtime_error("load_checkpoint: unsupported format version");
    }

    AnsatzConfig ansatz;
    ansatz.n_qubits = j.at("ansatz").at("n_qubits").get<int>();
    ansatz.n_blocks = j.at("ansatz").at("n_blocks").get<int>();
    ansatz.layers_per_block = j.at("ansatz").at("layers_per_block").get<int>();
    ansatz.ring = j.at("ansatz").at("ring").get<bool>();

    HybridModel model = HybridModel::create(model_kind_from_name(j.at("kind").get<std::string>()),
                                            ansatz, j.at("dropout_rate").get<double>(),
                                            j.at("seed").get<std::uint64_t>());
    model.for_each_tensor([&](const std::string& name, std::vector<double>& v) {
        const auto loaded = j.at("tensors").at(name).get<std::vector<double>>();
        if (loaded.size() != v.size()) {
            throw std::runtime_error("load_checkpoint: tensor " + name + " has size " +
                                     std::to_string(loaded.size()) + ", expected " +
                                     std::to_string(v.size()));
        }
        v = loaded;
    });
    if (seed_out != nullptr) *seed_out = j.at("seed").get<std::uint64_t>();
    return model;
}

}  // namespace qcredit
