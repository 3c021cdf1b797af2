#pragma once

// Quasiprobability decomposition of a continuous rotation into three
// discrete settings, and the samplers built on it.
//
// A rotation at Theta_k + theta is written as
//     R(Theta_k + theta) = g1 R(Theta_k) + g2 R(Theta_{k+1}) + g3 R(antipolar)
// with real g1 + g2 + g3 = 1. Sampling setting l with probability |g_l|/||g||_1
// and weighting the outcome by ||g||_1 sign(g_l) reproduces the continuous
// channel in expectation.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pai/circuit.hpp"
#include "pai/notch.hpp"
#include "pai/rng.hpp"

namespace pai {

/// Closed-form coefficients for settings (0, delta, pi) relative to the lower
/// notch and overrotation theta in [0, delta]; delta in (0, pi/2].
Eigen::Vector3d gamma_uniform(double theta, double delta);

/// Solves for coefficients expressing R(target) through R(settings[i]).
/// Throws DegenerateSettingsError when the settings do not span the channel family.
Eigen::Vector3d gamma_general(double target_angle, const std::array<double, 3>& settings);

/// Max-norm residual of the three channel identities for given coefficients.
double gamma_residual(double target_angle, const std::array<double, 3>& settings, const Eigen::Vector3d& gammas);

struct GateQuasiProb {
    Eigen::Vector3d gammas = Eigen::Vector3d::UnitX();
    Eigen::Vector3d probs = Eigen::Vector3d::UnitX();
    double norm1 = 1.0;
    std::array<double, 3> setting_angles{};
    std::array<std::size_t, 3> setting_notches{};
    std::array<int, 3> setting_signs{1, 1, 1};
    AnglePosition position;
    double target_angle = 0.0;
    double residual = 0.0;
};

GateQuasiProb decompose_gate(const NotchGrid& grid, double target_angle);

/// Setting index l in {0, 1, 2} (0-based) and its sign.
struct GateSample {
    int setting;
    int sign;
};

GateSample sample_gate(const GateQuasiProb& qp, Rng& rng);

struct CircuitDecomposition {
    std::vector<GateQuasiProb> per_gate;  // parametrised gates in circuit order
    double norm1_total = 1.0;
    double delta_max = 0.0;

    std::size_t size() const noexcept { return per_gate.size(); }
    double overhead() const noexcept { return norm1_total * norm1_total; }
};

CircuitDecomposition decompose_circuit(const NotchGrid& grid, const Circuit& circuit);

/// Multi-index over the parametrised gates, stored 0-based.
struct CircuitVariant {
    std::vector<std::uint8_t> indices;
    int sign = 1;
    double weight = 1.0;
};

CircuitVariant sample_variant(const CircuitDecomposition& dec, Rng& rng);

/// Discrete channel angles that realise a variant.
std::vector<double> variant_angles(const CircuitDecomposition& dec, const CircuitVariant& variant);

/// Simulates circuit variants with the half-angle cosines and sines of every
/// gate setting precomputed once.
class VariantKernel {
  public:
    VariantKernel(const Circuit& circuit, const CircuitDecomposition& dec);

    Statevector simulate(std::span<const std::uint8_t> indices) const;

  private:
    struct Step {
        const PauliString* generator;
        std::size_t slot;  // parametrised-gate index, or npos for fixed gates
        double c;
        double s;
    };
    int num_qubits_;
    std::vector<Step> steps_;
    std::vector<std::array<std::array<double, 2>, 3>> setting_cs_;
};

/// Product of the three-setting coefficients for a given multi-index.
double variant_coefficient(const CircuitDecomposition& dec, std::span<const std::uint8_t> indices);

/// ||gamma(delta_max/2)||_1^(2 nu): overhead when every gate sits halfway between notches.
double worst_case_overhead(std::size_t nu, double delta_max);

struct RefinedOverhead {
    double lambda_tilde;
    double bound;
};

/// lambda~ = 4/nu sum lambda_j (1 - lambda_j) and the bound exp(nu lambda~ delta_max^2 / 4).
RefinedOverhead refined_overhead(const CircuitDecomposition& dec);

/// 2^(2(B-1)): gate count at which the worst-case overhead reaches e^(pi^2/4).
std::uint64_t max_gates_for_bits(int bits);

}  // namespace pai
