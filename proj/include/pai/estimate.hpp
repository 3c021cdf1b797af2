#pragma once

// Expectation-value estimators: PAI with sign-weighted shots, the
// infinite-resolution and nearest-notch baselines, the approximate
// two-notch scheme, and a brute-force oracle over all 3^nu variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pai/circuit.hpp"
#include "pai/decomposition.hpp"
#include "pai/notch.hpp"

namespace pai {

/// Single-shot estimate outcome * factor, factor = ||g||_1 sign(g_l).
struct ShotRecord {
    int outcome = 1;
    double factor = 1.0;
    std::uint64_t variant_id = 0;

    double value() const noexcept { return outcome * factor; }
};

struct EstimateResult {
    double mean = 0.0;
    /// Sample standard deviation of single-shot values over sqrt(n_shots).
    double std_error = 0.0;
    /// Standard error from per-variant means; accounts for shots sharing a variant.
    double variant_std_error = 0.0;
    double second_moment = 0.0;
    std::size_t n_shots = 0;
    std::size_t n_variants = 0;
    /// ||g||_1^2
    double overhead_bound = 1.0;
};

/// Aggregates records ordered by variant id.
EstimateResult summarize(std::span<const ShotRecord> records, double overhead_bound);

/// Exact <O> of the circuit at its continuous angles.
double continuous_expectation(const Circuit& circuit, const Observable& observable);

/// PAI shot bank: variant v draws its setting multi-index and its shots from
/// stream (master_seed, v). Records are ordered by variant id.
std::vector<ShotRecord> pai_shots(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                                  std::size_t n_variants, std::size_t shots_per_variant, std::uint64_t master_seed,
                                  unsigned threads = 1);

EstimateResult pai_estimate(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                            std::size_t n_variants, std::size_t shots_per_variant, std::uint64_t master_seed,
                            unsigned threads = 1);

/// sum over all 3^nu multi-indices of g_l <O>_l. Refuses nu > 10.
double exact_pai_expectation(const NotchGrid& grid, const Circuit& circuit, const Observable& observable);

inline constexpr std::size_t kMaxEnumeratedGates = 10;

/// Shots from the circuit at its continuous angles (infinite resolution).
std::vector<ShotRecord> continuous_shots(const Circuit& circuit, const PauliString& observable,
                                         std::size_t n_shots, std::uint64_t seed);

EstimateResult continuous_estimate(const Circuit& circuit, const PauliString& observable, std::size_t n_shots,
                                   std::uint64_t seed);

/// Every parametrised angle rounded to its nearest notch.
Circuit nearest_notch_circuit(const NotchGrid& grid, const Circuit& circuit);

std::vector<ShotRecord> nearest_notch_shots(const NotchGrid& grid, const Circuit& circuit,
                                            const PauliString& observable, std::size_t n_shots, std::uint64_t seed);

EstimateResult nearest_notch_estimate(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                                      std::size_t n_shots, std::uint64_t seed);

struct FidelityEstimate {
    double mean = 1.0;
    double std_error = 0.0;
};

struct FidelityPoint {
    std::size_t nu_prefix = 0;
    double fidelity = 1.0;
    double std_error = 0.0;
};

/// Fidelity against the continuous-angle state when the first nu_prefix
/// parametrised gates pick Theta_k or Theta_{k+1} with probabilities (1 - lambda, lambda).
/// Later gates act identically on both states, so this equals the fidelity of
/// the truncated circuit.
std::vector<FidelityPoint> fidelity_decay(const NotchGrid& grid, const Circuit& circuit,
                                          std::span<const std::size_t> nu_prefixes, std::size_t n_variants,
                                          std::uint64_t master_seed, unsigned threads = 1);

FidelityEstimate approximate_two_notch_state(const NotchGrid& grid, const Circuit& circuit, std::size_t n_variants,
                                             std::uint64_t master_seed, unsigned threads = 1);

struct RmsRow {
    std::size_t n_shots = 0;
    double rms = 0.0;
    double shot_noise_limit = 0.0;
    double worst_case_bound = 0.0;
};

/// RMS deviation of PAI means from the exact continuous value over `repeats`
/// independent runs per shot count (one shot per sampled variant).
std::vector<RmsRow> rms_vs_shots(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                                 std::span<const std::size_t> shot_grid, std::size_t repeats,
                                 std::uint64_t master_seed, unsigned threads = 1);

struct BatchStats {
    double mean = 0.0;
    /// Standard deviation of the batch means.
    double width = 0.0;
    std::size_t batch_size = 0;
    std::size_t n_batches = 0;
};

/// Draws n_batches independent batches of batch_size distinct records from the
/// pool and reports the distribution of batch means.
BatchStats resample_batches(std::span<const ShotRecord> pool, std::size_t batch_size, std::size_t n_batches,
                            std::uint64_t seed);

}  // namespace pai
