#include "pai/models.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "pai/decomposition.hpp"
#include "pai/errors.hpp"
#include "pai/estimate.hpp"
#include "pai/parallel.hpp"
#include "pai/rng.hpp"

namespace pai {

namespace {

struct TermSlot {
    PauliString pauli;
    double coefficient;
};

std::vector<TermSlot> term_slots(const SpinRingModel& model) {
    const int n = model.n_qubits;
    std::vector<TermSlot> out;
    out.reserve(model.term_count());
    for (int k = 0; k < n; ++k) {
        out.push_back({PauliString::on(n, {k}, 'Z'), model.omega[static_cast<std::size_t>(k)]});
    }
    for (int k = 0; k < n; ++k) {
        const int next = (k + 1) % n;
        for (char p : {'X', 'Y', 'Z'}) {
            out.push_back({PauliString::on(n, {k, next}, p), model.coupling});
        }
    }
    return out;
}

// Equal split of the shot budget; at least one shot per slot.
std::size_t share(std::size_t total, std::size_t parts) {
    return std::max<std::size_t>(1, total / std::max<std::size_t>(1, parts));
}

double shot_energy(const Observable& h, const Statevector& state, std::size_t shots_per_term, Rng& rng) {
    double total = 0.0;
    for (const auto& t : h.terms) {
        const double e = pauli_expectation(state, t.pauli);
        long sum = 0;
        for (std::size_t s = 0; s < shots_per_term; ++s) {
            sum += shot_from_expectation(e, rng);
        }
        total += t.coefficient * static_cast<double>(sum) / static_cast<double>(shots_per_term);
    }
    return total;
}

}  // namespace

SpinRingModel spin_ring(int n_qubits, double coupling, std::uint64_t seed) {
    if (n_qubits < 3 || n_qubits > kMaxQubits) {
        throw DomainError("spin_ring: need 3 <= n_qubits <= 24");
    }
    SpinRingModel m{n_qubits, coupling, {}, seed};
    Rng rng(seed, 0);
    m.omega.resize(static_cast<std::size_t>(n_qubits));
    for (auto& w : m.omega) {
        w = 2.0 * rng.uniform() - 1.0;
    }
    return m;
}

Observable hamiltonian(const SpinRingModel& model) {
    Observable h;
    for (auto& slot : term_slots(model)) {
        h.terms.push_back({slot.coefficient, std::move(slot.pauli)});
    }
    return h;
}

double energy(const SpinRingModel& model, const Statevector& state) {
    return expectation(state, hamiltonian(model));
}

double ground_energy(const SpinRingModel& model) {
    const Eigen::MatrixXcd h = dense_matrix(hamiltonian(model), model.n_qubits);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

std::string to_string(InitialState s) {
    return s == InitialState::kNeel ? "neel" : "zero";
}

InitialState initial_state_from_string(const std::string& s) {
    if (s == "zero") {
        return InitialState::kZero;
    }
    if (s == "neel") {
        return InitialState::kNeel;
    }
    throw ConfigError("unknown initial state '" + s + "' (expected zero or neel)");
}

Circuit layered_circuit(const SpinRingModel& model, int n_layers, std::span<const double> angles,
                        InitialState initial) {
    const auto slots = term_slots(model);
    if (n_layers < 0 || angles.size() != static_cast<std::size_t>(n_layers) * slots.size()) {
        throw StructuralError("layered_circuit: expected " + std::to_string(n_layers * slots.size()) +
                              " angles, got " + std::to_string(angles.size()));
    }
    Circuit c;
    c.num_qubits = model.n_qubits;
    if (initial == InitialState::kNeel) {
        for (int q = 1; q < model.n_qubits; q += 2) {
            c.gates.push_back({PauliString::on(model.n_qubits, {q}, 'X'), std::numbers::pi, false});
        }
    }
    std::size_t j = 0;
    for (int layer = 0; layer < n_layers; ++layer) {
        for (const auto& slot : slots) {
            c.gates.push_back({slot.pauli, angles[j++], true});
        }
    }
    return c;
}

std::vector<double> trotter_angles(const SpinRingModel& model, const TrotterSpec& spec) {
    if (spec.n_layers < 1 || !std::isfinite(spec.total_time)) {
        throw DomainError("trotter_angles: need n_layers >= 1 and finite total time");
    }
    const auto slots = term_slots(model);
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(spec.n_layers) * slots.size());
    for (int layer = 0; layer < spec.n_layers; ++layer) {
        for (const auto& slot : slots) {
            angles.push_back(2.0 * slot.coefficient * spec.dt());
        }
    }
    return angles;
}

Circuit trotter_circuit(const SpinRingModel& model, const TrotterSpec& spec, InitialState initial) {
    return layered_circuit(model, spec.n_layers, trotter_angles(model, spec), initial);
}

Circuit hva_circuit(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& params) {
    if (static_cast<std::size_t>(params.size()) != ansatz.parameter_count(model)) {
        throw StructuralError("hva_circuit: expected " + std::to_string(ansatz.parameter_count(model)) +
                              " parameters, got " + std::to_string(params.size()));
    }
    return layered_circuit(model, ansatz.n_layers, std::span<const double>(params.data(), params.size()),
                           ansatz.initial);
}

std::string to_string(GradientMode m) {
    switch (m) {
        case GradientMode::kExact: return "exact";
        case GradientMode::kNearestNotch: return "nearest";
        case GradientMode::kPai: return "pai";
    }
    return "exact";
}

GradientMode gradient_mode_from_string(const std::string& s) {
    if (s == "exact") {
        return GradientMode::kExact;
    }
    if (s == "nearest") {
        return GradientMode::kNearestNotch;
    }
    if (s == "pai") {
        return GradientMode::kPai;
    }
    throw ConfigError("unknown gradient mode '" + s + "' (expected exact, nearest or pai)");
}

double estimate_energy(const SpinRingModel& model, const Circuit& circuit, const EstimatorConfig& config,
                       std::uint64_t stream_id) {
    const Observable h = hamiltonian(model);
    if (config.mode == GradientMode::kExact) {
        return expectation(simulate(circuit), h);
    }
    if (!config.grid) {
        throw ConfigError("estimate_energy: shot-based modes need a notch grid");
    }
    const std::size_t per_term = share(config.shots, h.terms.size());
    if (config.mode == GradientMode::kNearestNotch) {
        Rng rng(config.seed, stream_id);
        return shot_energy(h, simulate(nearest_notch_circuit(*config.grid, circuit)), per_term, rng);
    }

    const CircuitDecomposition dec = decompose_circuit(*config.grid, circuit);
    const std::size_t variants = std::max<std::size_t>(1, config.variants);
    const std::size_t per_variant = share(per_term, variants);
    const VariantKernel kernel(circuit, dec);
    double total = 0.0;
    for (std::size_t v = 0; v < variants; ++v) {
        Rng rng(config.seed, stream_key({stream_id, v}));
        const CircuitVariant variant = sample_variant(dec, rng);
        const Statevector state = kernel.simulate(variant.indices);
        total += dec.norm1_total * variant.sign * shot_energy(h, state, per_variant, rng);
    }
    return total / static_cast<double>(variants);
}

Eigen::VectorXd gradient(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& params,
                         const EstimatorConfig& config, std::uint64_t iteration) {
    const auto n = static_cast<std::size_t>(params.size());
    Eigen::VectorXd grad(params.size());
    parallel_for(n, config.threads, [&](std::size_t j) {
        double shifted[2];
        for (int side = 0; side < 2; ++side) {
            AnsatzParams p = params;
            p(static_cast<Eigen::Index>(j)) += side == 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
            const std::uint64_t stream = stream_key({iteration, j, static_cast<std::uint64_t>(side)});
            shifted[side] = estimate_energy(model, hva_circuit(model, ansatz, p), config, stream);
        }
        grad(static_cast<Eigen::Index>(j)) = 0.5 * (shifted[0] - shifted[1]);
    });
    return grad;
}

AnsatzParams initial_parameters(std::size_t count, std::uint64_t seed) {
    Rng rng(seed, 1);
    AnsatzParams p(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = 0.2 * rng.uniform() - 0.1;
    }
    return p;
}

VqeResult vqe_run(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& init_params,
                  double learning_rate, int n_iters, const EstimatorConfig& config) {
    if (n_iters < 0 || !std::isfinite(learning_rate)) {
        throw DomainError("vqe_run: need n_iters >= 0 and a finite learning rate");
    }
    VqeResult res;
    res.ground_energy = ground_energy(model);
    res.final_params = init_params;
    // Nearest-notch descent realises the rounded circuit; the other modes realise the continuous one.
    auto record = [&](int it) {
        const double e = config.mode == GradientMode::kNearestNotch && config.grid
                             ? rounded_energy(model, ansatz, res.final_params, *config.grid)
                             : energy(model, simulate(hva_circuit(model, ansatz, res.final_params)));
        res.trace.push_back({it, e, e - res.ground_energy});
    };
    record(0);
    for (int it = 1; it <= n_iters; ++it) {
        res.final_params -= learning_rate * gradient(model, ansatz, res.final_params, config,
                                                     static_cast<std::uint64_t>(it - 1));
        record(it);
    }
    return res;
}

double rounded_energy(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& params,
                      const NotchGrid& grid) {
    const Circuit rounded = nearest_notch_circuit(grid, hva_circuit(model, ansatz, params));
    return energy(model, simulate(rounded));
}

}  // namespace pai
