#include "pai/decomposition.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "pai/errors.hpp"

namespace pai {

namespace {

constexpr double kMinRcond = 1e-12;

// Columns hold the channel-identity coefficients (1 + cos a, sin a, 1 - cos a)
// of each setting; R(a) = [(1+cos a) R(0) + sin a (R(pi/2) - R(-pi/2)) + (1-cos a) R(pi)] / 2.
Eigen::Vector3d channel_coordinates(double a) {
    return {1.0 + std::cos(a), std::sin(a), 1.0 - std::cos(a)};
}

Eigen::Matrix3d setting_matrix(const std::array<double, 3>& settings) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        m.col(i) = channel_coordinates(settings[static_cast<std::size_t>(i)]);
    }
    return m;
}

void fill_probabilities(GateQuasiProb& qp) {
    qp.norm1 = qp.gammas.lpNorm<1>();
    qp.probs = qp.gammas.cwiseAbs() / qp.norm1;
    for (int l = 0; l < 3; ++l) {
        qp.setting_signs[static_cast<std::size_t>(l)] = qp.gammas(l) < 0.0 ? -1 : 1;
    }
}

}  // namespace

Eigen::Vector3d gamma_uniform(double theta, double delta) {
    if (!(delta > 0.0) || delta > std::numbers::pi / 2) {
        throw DomainError("gamma_uniform: notch spacing must lie in (0, pi/2], got " + std::to_string(delta));
    }
    if (!(theta >= 0.0) || theta > delta * (1.0 + 1e-12)) {
        throw DomainError("gamma_uniform: overrotation must lie in [0, delta]");
    }
    const double rest = std::sin((delta - theta) / 2.0);
    return {
        std::cos(theta / 2.0) * rest / std::sin(delta / 2.0),
        std::sin(theta) / std::sin(delta),
        -std::sin(theta / 2.0) * rest / std::cos(delta / 2.0),
    };
}

Eigen::Vector3d gamma_general(double target_angle, const std::array<double, 3>& settings) {
    const Eigen::Matrix3d m = setting_matrix(settings);
    const Eigen::PartialPivLU<Eigen::Matrix3d> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond >= kMinRcond)) {
        throw DegenerateSettingsError("gamma_general: settings are degenerate (reciprocal condition " +
                                      std::to_string(rcond) + ")");
    }
    Eigen::Vector3d gammas = lu.solve(channel_coordinates(target_angle));
    if (!gammas.allFinite()) {
        throw DegenerateSettingsError("gamma_general: non-finite solution");
    }
    return gammas;
}

double gamma_residual(double target_angle, const std::array<double, 3>& settings, const Eigen::Vector3d& gammas) {
    return (setting_matrix(settings) * gammas - channel_coordinates(target_angle)).lpNorm<Eigen::Infinity>();
}

GateQuasiProb decompose_gate(const NotchGrid& grid, double target_angle) {
    GateQuasiProb qp;
    qp.target_angle = wrap_angle(target_angle);
    qp.position = locate(grid, qp.target_angle);
    const std::size_t k = qp.position.k;
    const std::size_t k_next = (k + 1) % grid.size();
    const std::size_t k_anti = antipolar_notch(grid, k);
    qp.setting_notches = {k, k_next, k_anti};
    qp.setting_angles = {grid.angle(k), grid.angle(k_next), grid.angle(k_anti)};

    const std::array<double, 3> relative{0.0, qp.position.delta_k,
                                         wrap_angle(grid.angle(k_anti) - grid.angle(k))};
    const double theta = qp.position.theta;
    if (theta == 0.0) {
        qp.gammas = Eigen::Vector3d::UnitX();
    } else if (grid.is_uniform()) {
        qp.gammas = gamma_uniform(theta, qp.position.delta_k);
    } else {
        qp.gammas = gamma_general(theta, relative);
    }
    qp.residual = gamma_residual(theta, relative, qp.gammas);
    fill_probabilities(qp);
    return qp;
}

GateSample sample_gate(const GateQuasiProb& qp, Rng& rng) {
    const double u = rng.uniform();
    int l;
    if (u < qp.probs(0)) {
        l = 0;
    } else if (u < qp.probs(0) + qp.probs(1) || qp.probs(2) == 0.0) {
        l = qp.probs(1) > 0.0 ? 1 : 0;
    } else {
        l = 2;
    }
    return {l, qp.setting_signs[static_cast<std::size_t>(l)]};
}

CircuitDecomposition decompose_circuit(const NotchGrid& grid, const Circuit& circuit) {
    CircuitDecomposition dec;
    dec.delta_max = grid.delta_max();
    dec.per_gate.reserve(circuit.gates.size());
    for (const auto& g : circuit.gates) {
        if (!g.parametrised) {
            continue;
        }
        dec.per_gate.push_back(decompose_gate(grid, g.angle));
        dec.norm1_total *= dec.per_gate.back().norm1;
    }
    return dec;
}

CircuitVariant sample_variant(const CircuitDecomposition& dec, Rng& rng) {
    CircuitVariant v;
    v.indices.resize(dec.size());
    v.weight = dec.norm1_total;
    for (std::size_t j = 0; j < dec.size(); ++j) {
        const GateSample s = sample_gate(dec.per_gate[j], rng);
        v.indices[j] = static_cast<std::uint8_t>(s.setting);
        v.sign *= s.sign;
    }
    return v;
}

std::vector<double> variant_angles(const CircuitDecomposition& dec, const CircuitVariant& variant) {
    if (variant.indices.size() != dec.size()) {
        throw StructuralError("variant_angles: variant length differs from gate count");
    }
    std::vector<double> angles(dec.size());
    for (std::size_t j = 0; j < dec.size(); ++j) {
        angles[j] = dec.per_gate[j].setting_angles[variant.indices[j]];
    }
    return angles;
}

VariantKernel::VariantKernel(const Circuit& circuit, const CircuitDecomposition& dec)
    : num_qubits_{circuit.num_qubits} {
    if (circuit.parametrised_count() != dec.size()) {
        throw StructuralError("VariantKernel: decomposition does not match the circuit");
    }
    std::size_t j = 0;
    for (const auto& g : circuit.gates) {
        if (g.parametrised) {
            steps_.push_back({&g.generator, j++, 0.0, 0.0});
        } else {
            steps_.push_back({&g.generator, std::size_t(-1), std::cos(g.angle / 2), std::sin(g.angle / 2)});
        }
    }
    setting_cs_.resize(dec.size());
    for (std::size_t i = 0; i < dec.size(); ++i) {
        for (std::size_t l = 0; l < 3; ++l) {
            const double a = dec.per_gate[i].setting_angles[l];
            setting_cs_[i][l] = {std::cos(a / 2), std::sin(a / 2)};
        }
    }
}

Statevector VariantKernel::simulate(std::span<const std::uint8_t> indices) const {
    if (indices.size() != setting_cs_.size()) {
        throw StructuralError("VariantKernel: multi-index length differs from gate count");
    }
    Statevector state(num_qubits_);
    for (const auto& step : steps_) {
        if (step.slot == std::size_t(-1)) {
            apply_rotation_cs(state, *step.generator, step.c, step.s);
        } else {
            const auto& cs = setting_cs_[step.slot][indices[step.slot]];
            apply_rotation_cs(state, *step.generator, cs[0], cs[1]);
        }
    }
    return state;
}

double variant_coefficient(const CircuitDecomposition& dec, std::span<const std::uint8_t> indices) {
    if (indices.size() != dec.size()) {
        throw StructuralError("variant_coefficient: multi-index length differs from gate count");
    }
    double g = 1.0;
    for (std::size_t j = 0; j < dec.size(); ++j) {
        g *= dec.per_gate[j].gammas(indices[j]);
    }
    return g;
}

double worst_case_overhead(std::size_t nu, double delta_max) {
    if (nu == 0) {
        return 1.0;
    }
    const double norm = gamma_uniform(delta_max / 2.0, delta_max).lpNorm<1>();
    return std::pow(norm, 2.0 * static_cast<double>(nu));
}

RefinedOverhead refined_overhead(const CircuitDecomposition& dec) {
    if (dec.size() == 0) {
        return {0.0, 1.0};
    }
    double acc = 0.0;
    for (const auto& qp : dec.per_gate) {
        acc += qp.position.lambda * (1.0 - qp.position.lambda);
    }
    const double nu = static_cast<double>(dec.size());
    const double lambda_tilde = 4.0 * acc / nu;
    return {lambda_tilde, std::exp(nu * lambda_tilde * dec.delta_max * dec.delta_max / 4.0)};
}

std::uint64_t max_gates_for_bits(int bits) {
    if (bits < 2 || bits > 32) {
        throw DomainError("max_gates_for_bits: bits must lie in [2, 32]");
    }
    return std::uint64_t{1} << (2 * (bits - 1));
}

}  // namespace pai
