#pragma once

// Benchmark problems: the disordered Heisenberg spin ring, its first-order
// Trotter circuit, the Hamiltonian variational ansatz and gradient-descent VQE.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pai/circuit.hpp"
#include "pai/notch.hpp"

namespace pai {

/// H = sum_k omega_k Z_k + J (X_k X_{k+1} + Y_k Y_{k+1} + Z_k Z_{k+1}) on a ring.
struct SpinRingModel {
    int n_qubits = 0;
    double coupling = 0.0;
    std::vector<double> omega;
    std::uint64_t seed = 0;

    std::size_t term_count() const { return 4 * static_cast<std::size_t>(n_qubits); }
};

/// Fields omega_k drawn uniformly from [-1, 1] with stream (seed, 0).
SpinRingModel spin_ring(int n_qubits, double coupling, std::uint64_t seed);

/// Term order: Z_0 .. Z_{N-1}, then for each bond (k, k+1 mod N): XX, YY, ZZ.
Observable hamiltonian(const SpinRingModel& model);

double energy(const SpinRingModel& model, const Statevector& state);

/// Lowest eigenvalue by dense diagonalisation; practical up to ~12 qubits.
double ground_energy(const SpinRingModel& model);

/// Non-parametrised preparation applied before the first layer.
enum class InitialState {
    kZero,  ///< |0...0>
    kNeel,  ///< X(pi) on odd qubits: |0101...>
};

std::string to_string(InitialState s);
InitialState initial_state_from_string(const std::string& s);

struct TrotterSpec {
    double total_time = 1.0;
    int n_layers = 1;

    double dt() const { return total_time / n_layers; }
};

/// One rotation per Hamiltonian term per layer; parameter j of layer l drives
/// term j. `angles` has n_layers * term_count entries.
Circuit layered_circuit(const SpinRingModel& model, int n_layers, std::span<const double> angles,
                        InitialState initial = InitialState::kZero);

/// Channel angles 2 c dt so each gate applies exp(-i c dt G).
std::vector<double> trotter_angles(const SpinRingModel& model, const TrotterSpec& spec);

Circuit trotter_circuit(const SpinRingModel& model, const TrotterSpec& spec,
                        InitialState initial = InitialState::kZero);

using AnsatzParams = Eigen::VectorXd;

struct HvaAnsatz {
    int n_layers = 1;
    InitialState initial = InitialState::kZero;

    std::size_t parameter_count(const SpinRingModel& model) const {
        return static_cast<std::size_t>(n_layers) * model.term_count();
    }
};

Circuit hva_circuit(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& params);

/// How energies inside the optimiser are evaluated.
enum class GradientMode { kExact, kNearestNotch, kPai };

std::string to_string(GradientMode m);
GradientMode gradient_mode_from_string(const std::string& s);

/// Shot-based energies split `shots` equally over the Hamiltonian terms; PAI
/// further splits each term's share equally over `variants` circuit variants.
struct EstimatorConfig {
    GradientMode mode = GradientMode::kExact;
    std::optional<NotchGrid> grid;
    std::size_t shots = 0;
    std::size_t variants = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Energy of the circuit under the configured mode, drawing from stream (config.seed, stream_id).
double estimate_energy(const SpinRingModel& model, const Circuit& circuit, const EstimatorConfig& config,
                       std::uint64_t stream_id);

/// Parameter-shift gradient dE/dphi_j = [E(phi_j + pi/2) - E(phi_j - pi/2)] / 2.
Eigen::VectorXd gradient(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& params,
                         const EstimatorConfig& config, std::uint64_t iteration = 0);

/// Uniform values in [-0.1, 0.1] from stream (seed, 1).
AnsatzParams initial_parameters(std::size_t count, std::uint64_t seed);

struct VqeTraceRow {
    int iteration = 0;
    double energy = 0.0;
    double delta_e = 0.0;
};

struct VqeResult {
    std::vector<VqeTraceRow> trace;
    AnsatzParams final_params;
    double ground_energy = 0.0;
};

/// Plain gradient descent. Trace rows hold the exact energy of the circuit the
/// mode realises: the rounded circuit for nearest-notch, the continuous one
/// otherwise.
VqeResult vqe_run(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& init_params,
                  double learning_rate, int n_iters, const EstimatorConfig& config);

/// Exact energy after rounding every parameter to its nearest notch.
double rounded_energy(const SpinRingModel& model, const HvaAnsatz& ansatz, const AnsatzParams& params,
                      const NotchGrid& grid);

}  // namespace pai
