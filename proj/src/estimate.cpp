#include "pai/estimate.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pai/errors.hpp"
#include "pai/parallel.hpp"
#include "pai/rng.hpp"

namespace pai {

namespace {

// Stream ids reserved for the single-state estimators; PAI variants use small ids.
const std::uint64_t kContinuousStream = stream_key({0x636f6e74ULL});
const std::uint64_t kNearestStream = stream_key({0x6e656172ULL});

std::vector<ShotRecord> shots_from_state(const Statevector& state, const PauliString& observable,
                                         std::size_t n_shots, Rng& rng) {
    const double e = pauli_expectation(state, observable);
    std::vector<ShotRecord> out(n_shots);
    for (auto& r : out) {
        r.outcome = shot_from_expectation(e, rng);
    }
    return out;
}

}  // namespace

EstimateResult summarize(std::span<const ShotRecord> records, double overhead_bound) {
    EstimateResult res;
    res.overhead_bound = overhead_bound;
    res.n_shots = records.size();
    if (records.empty()) {
        return res;
    }
    const double n = static_cast<double>(records.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : records) {
        sum += r.value();
        sum_sq += r.value() * r.value();
    }
    res.mean = sum / n;
    res.second_moment = sum_sq / n;
    double ss = 0.0;
    for (const auto& r : records) {
        ss += (r.value() - res.mean) * (r.value() - res.mean);
    }
    res.std_error = records.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;

    // Per-variant means; records arrive grouped by variant id.
    std::vector<double> variant_means;
    std::size_t begin = 0;
    while (begin < records.size()) {
        std::size_t end = begin;
        double acc = 0.0;
        while (end < records.size() && records[end].variant_id == records[begin].variant_id) {
            acc += records[end].value();
            ++end;
        }
        variant_means.push_back(acc / static_cast<double>(end - begin));
        begin = end;
    }
    res.n_variants = variant_means.size();
    if (variant_means.size() > 1) {
        const double v = static_cast<double>(variant_means.size());
        const double m = std::accumulate(variant_means.begin(), variant_means.end(), 0.0) / v;
        double vs = 0.0;
        for (double x : variant_means) {
            vs += (x - m) * (x - m);
        }
        res.variant_std_error = std::sqrt(vs / (v - 1.0) / v);
    } else {
        res.variant_std_error = res.std_error;
    }
    return res;
}

double continuous_expectation(const Circuit& circuit, const Observable& observable) {
    return expectation(simulate(circuit), observable);
}

std::vector<ShotRecord> pai_shots(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                                  std::size_t n_variants, std::size_t shots_per_variant, std::uint64_t master_seed,
                                  unsigned threads) {
    if (n_variants == 0 || shots_per_variant == 0) {
        throw DomainError("pai_shots: need at least one variant and one shot per variant");
    }
    const CircuitDecomposition dec = decompose_circuit(grid, circuit);
    const VariantKernel kernel(circuit, dec);
    std::vector<ShotRecord> records(n_variants * shots_per_variant);
    parallel_for(n_variants, threads, [&](std::size_t v) {
        Rng rng(master_seed, v);
        const CircuitVariant variant = sample_variant(dec, rng);
        const Statevector state = kernel.simulate(variant.indices);
        const double e = pauli_expectation(state, observable);
        const double factor = dec.norm1_total * variant.sign;
        for (std::size_t s = 0; s < shots_per_variant; ++s) {
            records[v * shots_per_variant + s] = ShotRecord{shot_from_expectation(e, rng), factor, v};
        }
    });
    return records;
}

EstimateResult pai_estimate(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                            std::size_t n_variants, std::size_t shots_per_variant, std::uint64_t master_seed,
                            unsigned threads) {
    const auto records = pai_shots(grid, circuit, observable, n_variants, shots_per_variant, master_seed, threads);
    const double norm = decompose_circuit(grid, circuit).norm1_total;
    return summarize(records, norm * norm);
}

double exact_pai_expectation(const NotchGrid& grid, const Circuit& circuit, const Observable& observable) {
    const CircuitDecomposition dec = decompose_circuit(grid, circuit);
    const std::size_t nu = dec.size();
    if (nu > kMaxEnumeratedGates) {
        throw RefusalError("exact_pai_expectation: refusing 3^" + std::to_string(nu) + " enumeration (nu > " +
                           std::to_string(kMaxEnumeratedGates) + ")");
    }
    const VariantKernel kernel(circuit, dec);
    std::vector<std::uint8_t> idx(nu, 0);
    double total = 0.0;
    while (true) {
        const double g = variant_coefficient(dec, idx);
        if (g != 0.0) {
            total += g * expectation(kernel.simulate(idx), observable);
        }
        // Odometer increment over {0,1,2}^nu.
        std::size_t j = 0;
        while (j < nu && idx[j] == 2) {
            idx[j++] = 0;
        }
        if (j == nu) {
            break;
        }
        ++idx[j];
    }
    return total;
}

std::vector<ShotRecord> continuous_shots(const Circuit& circuit, const PauliString& observable,
                                         std::size_t n_shots, std::uint64_t seed) {
    Rng rng(seed, kContinuousStream);
    return shots_from_state(simulate(circuit), observable, n_shots, rng);
}

EstimateResult continuous_estimate(const Circuit& circuit, const PauliString& observable, std::size_t n_shots,
                                   std::uint64_t seed) {
    return summarize(continuous_shots(circuit, observable, n_shots, seed), 1.0);
}

Circuit nearest_notch_circuit(const NotchGrid& grid, const Circuit& circuit) {
    Circuit out = circuit;
    for (auto& g : out.gates) {
        if (g.parametrised) {
            g.angle = grid.angle(nearest_notch(grid, g.angle));
        }
    }
    return out;
}

std::vector<ShotRecord> nearest_notch_shots(const NotchGrid& grid, const Circuit& circuit,
                                            const PauliString& observable, std::size_t n_shots, std::uint64_t seed) {
    Rng rng(seed, kNearestStream);
    return shots_from_state(simulate(nearest_notch_circuit(grid, circuit)), observable, n_shots, rng);
}

EstimateResult nearest_notch_estimate(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                                      std::size_t n_shots, std::uint64_t seed) {
    return summarize(nearest_notch_shots(grid, circuit, observable, n_shots, seed), 1.0);
}

std::vector<FidelityPoint> fidelity_decay(const NotchGrid& grid, const Circuit& circuit,
                                          std::span<const std::size_t> nu_prefixes, std::size_t n_variants,
                                          std::uint64_t master_seed, unsigned threads) {
    if (n_variants == 0) {
        throw DomainError("fidelity_decay: need at least one variant");
    }
    const std::size_t nu = circuit.parametrised_count();
    for (std::size_t i = 0; i < nu_prefixes.size(); ++i) {
        if (nu_prefixes[i] > nu || (i > 0 && nu_prefixes[i] < nu_prefixes[i - 1])) {
            throw DomainError("fidelity_decay: prefixes must be non-decreasing and at most nu");
        }
    }
    const std::size_t n_points = nu_prefixes.size();

    // Positions in the gate list right after the requested number of parametrised gates.
    std::vector<std::size_t> stop_after(n_points);
    {
        std::size_t seen = 0;
        std::size_t point = 0;
        for (std::size_t gi = 0; gi <= circuit.gates.size() && point < n_points; ++gi) {
            while (point < n_points && nu_prefixes[point] == seen) {
                stop_after[point++] = gi;
            }
            if (gi < circuit.gates.size() && circuit.gates[gi].parametrised) {
                ++seen;
            }
        }
    }

    std::vector<AnglePosition> positions;
    positions.reserve(nu);
    for (const auto& g : circuit.gates) {
        if (g.parametrised) {
            positions.push_back(locate(grid, g.angle));
        }
    }

    // Ideal states at each checkpoint.
    std::vector<Statevector> ideal;
    ideal.reserve(n_points);
    {
        Statevector state(circuit.num_qubits);
        std::size_t gi = 0;
        for (std::size_t p = 0; p < n_points; ++p) {
            for (; gi < stop_after[p]; ++gi) {
                apply_rotation(state, circuit.gates[gi].generator, circuit.gates[gi].angle);
            }
            ideal.push_back(state);
        }
    }

    std::vector<double> overlaps(n_variants * n_points);
    parallel_for(n_variants, threads, [&](std::size_t v) {
        Rng rng(master_seed, v);
        Statevector state(circuit.num_qubits);
        std::size_t gi = 0;
        std::size_t j = 0;
        for (std::size_t p = 0; p < n_points; ++p) {
            for (; gi < stop_after[p]; ++gi) {
                const auto& g = circuit.gates[gi];
                double angle = g.angle;
                if (g.parametrised) {
                    const AnglePosition& pos = positions[j++];
                    const std::size_t k = rng.uniform() < pos.lambda ? (pos.k + 1) % grid.size() : pos.k;
                    angle = grid.angle(k);
                }
                apply_rotation(state, g.generator, angle);
            }
            overlaps[v * n_points + p] = fidelity(ideal[p], state);
        }
    });

    std::vector<FidelityPoint> out(n_points);
    const double n = static_cast<double>(n_variants);
    for (std::size_t p = 0; p < n_points; ++p) {
        double sum = 0.0;
        for (std::size_t v = 0; v < n_variants; ++v) {
            sum += overlaps[v * n_points + p];
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t v = 0; v < n_variants; ++v) {
            const double d = overlaps[v * n_points + p] - mean;
            ss += d * d;
        }
        out[p] = FidelityPoint{nu_prefixes[p], mean, n_variants > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
    }
    return out;
}

FidelityEstimate approximate_two_notch_state(const NotchGrid& grid, const Circuit& circuit, std::size_t n_variants,
                                             std::uint64_t master_seed, unsigned threads) {
    const std::size_t nu = circuit.parametrised_count();
    const auto points = fidelity_decay(grid, circuit, std::span<const std::size_t>(&nu, 1), n_variants, master_seed,
                                       threads);
    return {points.front().fidelity, points.front().std_error};
}

std::vector<RmsRow> rms_vs_shots(const NotchGrid& grid, const Circuit& circuit, const PauliString& observable,
                                 std::span<const std::size_t> shot_grid, std::size_t repeats,
                                 std::uint64_t master_seed, unsigned threads) {
    if (repeats == 0) {
        throw DomainError("rms_vs_shots: need at least one repeat");
    }
    const double exact = continuous_expectation(circuit, Observable(observable));
    const double norm = decompose_circuit(grid, circuit).norm1_total;
    std::vector<RmsRow> rows;
    rows.reserve(shot_grid.size());
    for (std::size_t i = 0; i < shot_grid.size(); ++i) {
        const std::size_t n_shots = shot_grid[i];
        std::vector<double> deviations(repeats);
        parallel_for(repeats, threads, [&](std::size_t r) {
            const std::uint64_t seed = stream_key({master_seed, i, r});
            const EstimateResult est = pai_estimate(grid, circuit, observable, n_shots, 1, seed, 1);
            deviations[r] = est.mean - exact;
        });
        double ss = 0.0;
        for (double d : deviations) {
            ss += d * d;
        }
        const double ns = static_cast<double>(n_shots);
        rows.push_back(RmsRow{n_shots, std::sqrt(ss / static_cast<double>(repeats)),
                              std::sqrt(std::max(0.0, 1.0 - exact * exact) / ns), norm / std::sqrt(ns)});
    }
    return rows;
}

BatchStats resample_batches(std::span<const ShotRecord> pool, std::size_t batch_size, std::size_t n_batches,
                            std::uint64_t seed) {
    if (pool.empty() || batch_size == 0 || batch_size > pool.size() || n_batches == 0) {
        throw DomainError("resample_batches: need 0 < batch_size <= pool size and n_batches > 0");
    }
    Rng rng(seed, 0);
    std::vector<std::size_t> perm(pool.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<double> means(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        // Partial Fisher-Yates: a fresh uniform subset per batch.
        double acc = 0.0;
        for (std::size_t i = 0; i < batch_size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(perm[i], perm[j]);
            acc += pool[perm[i]].value();
        }
        means[b] = acc / static_cast<double>(batch_size);
    }
    const double n = static_cast<double>(n_batches);
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
    double ss = 0.0;
    for (double m : means) {
        ss += (m - mean) * (m - mean);
    }
    return BatchStats{mean, n_batches > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0, batch_size, n_batches};
}

}  // namespace pai
