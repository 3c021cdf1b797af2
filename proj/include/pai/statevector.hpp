#pragma once

// Dense statevector simulation for circuits of Pauli-string rotations.
//
// Conventions:
//   * qubit 0 is the least-significant bit of the basis index;
//   * a rotation with channel angle phi applies exp(-i phi/2 G), so the
//     channel rho -> U rho U^dagger has period 2 pi in phi.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pai/errors.hpp"
#include "pai/rng.hpp"

namespace pai {

inline constexpr int kMaxQubits = 24;

/// Tensor product of single-qubit Paulis, stored as X and Z bit masks
/// (a Y letter sets both bits). Letter i of the text form acts on qubit i.
class PauliString {
  public:
    PauliString() = default;

    PauliString(int num_qubits, std::uint32_t x_mask, std::uint32_t z_mask)
        : num_qubits_{num_qubits}, x_mask_{x_mask}, z_mask_{z_mask} {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw StructuralError("PauliString: qubit count must be in [1, 24]");
        }
        const std::uint32_t valid = num_qubits == 32 ? ~0u : ((1u << num_qubits) - 1u);
        if ((x_mask | z_mask) & ~valid) {
            throw StructuralError("PauliString: mask addresses qubits beyond num_qubits");
        }
    }

    /// Parses letters from {I, X, Y, Z}; letters[i] acts on qubit i.
    static PauliString parse(std::string_view letters) {
        std::uint32_t x = 0;
        std::uint32_t z = 0;
        for (std::size_t q = 0; q < letters.size(); ++q) {
            const std::uint32_t bit = 1u << q;
            switch (letters[q]) {
                case 'I': break;
                case 'X': x |= bit; break;
                case 'Y': x |= bit; z |= bit; break;
                case 'Z': z |= bit; break;
                default: throw StructuralError("PauliString: invalid letter in '" + std::string(letters) + "'");
            }
        }
        return PauliString(static_cast<int>(letters.size()), x, z);
    }

    /// Letter `p` on each listed qubit, identity elsewhere.
    static PauliString on(int num_qubits, std::initializer_list<int> qubits, char p) {
        std::string letters(static_cast<std::size_t>(num_qubits), 'I');
        for (int q : qubits) {
            if (q < 0 || q >= num_qubits) {
                throw StructuralError("PauliString: qubit index out of range");
            }
            letters[static_cast<std::size_t>(q)] = p;
        }
        return parse(letters);
    }

    int num_qubits() const noexcept { return num_qubits_; }
    std::uint32_t x_mask() const noexcept { return x_mask_; }
    std::uint32_t z_mask() const noexcept { return z_mask_; }
    bool is_identity() const noexcept { return (x_mask_ | z_mask_) == 0; }
    bool is_diagonal() const noexcept { return x_mask_ == 0; }
    int y_count() const noexcept { return std::popcount(x_mask_ & z_mask_); }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(num_qubits_), 'I');
        for (int q = 0; q < num_qubits_; ++q) {
            const bool x = (x_mask_ >> q) & 1u;
            const bool z = (z_mask_ >> q) & 1u;
            s[static_cast<std::size_t>(q)] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        }
        return s;
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;

  private:
    int num_qubits_ = 0;
    std::uint32_t x_mask_ = 0;
    std::uint32_t z_mask_ = 0;
};

namespace detail {

// G|b> = i^{nY} (-1)^{popcount(b & z)} |b ^ x>
template <typename Scalar>
inline std::complex<Scalar> y_phase(int y_count) {
    switch (y_count & 3) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

// Xor-fold parity; stays inline without a hardware popcount instruction.
inline bool odd_parity(std::uint64_t b, std::uint32_t z_mask) noexcept {
    std::uint32_t x = static_cast<std::uint32_t>(b) & z_mask;
    x ^= x >> 16;
    x ^= x >> 8;
    x ^= x >> 4;
    return (0x6996u >> (x & 0xfu)) & 1u;
}

}  // namespace detail

/// Normalised amplitude vector over 2^N basis states, initialised to |0...0>.
template <typename Scalar>
class BasicStatevector {
  public:
    using Complex = std::complex<Scalar>;
    using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    explicit BasicStatevector(int num_qubits) : num_qubits_{num_qubits} {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw StructuralError("Statevector: qubit count must be in [1, 24]");
        }
        amplitudes_ = Amplitudes::Zero(Eigen::Index{1} << num_qubits);
        amplitudes_(0) = Complex(1);
    }

    /// Wraps explicit amplitudes; they must already be normalised.
    BasicStatevector(int num_qubits, Amplitudes amplitudes)
        : num_qubits_{num_qubits}, amplitudes_{std::move(amplitudes)} {
        if (num_qubits < 1 || num_qubits > kMaxQubits || amplitudes_.size() != (Eigen::Index{1} << num_qubits)) {
            throw StructuralError("Statevector: amplitude count must be 2^num_qubits");
        }
    }

    int num_qubits() const noexcept { return num_qubits_; }
    Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
    const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
    Amplitudes& amplitudes() noexcept { return amplitudes_; }
    Scalar squared_norm() const { return amplitudes_.squaredNorm(); }

  private:
    int num_qubits_;
    Amplitudes amplitudes_;
};

using Statevector = BasicStatevector<double>;

/// Real-weighted sum of Pauli strings.
struct Observable {
    struct Term {
        double coefficient;
        PauliString pauli;
    };
    std::vector<Term> terms;

    Observable() = default;
    Observable(std::initializer_list<Term> init) : terms(init) {}
    explicit Observable(PauliString p) : terms{{1.0, std::move(p)}} {}

    int num_qubits() const { return terms.empty() ? 0 : terms.front().pauli.num_qubits(); }
};

template <typename Scalar>
void check_dimensions(const BasicStatevector<Scalar>& state, const PauliString& pauli) {
    if (pauli.num_qubits() != state.num_qubits()) {
        throw StructuralError("Pauli string acts on " + std::to_string(pauli.num_qubits()) +
                              " qubits but the state has " + std::to_string(state.num_qubits()));
    }
}

/// In-place a' = c a - i s (G a) with c = cos(phi/2), s = sin(phi/2) supplied by the caller.
template <typename Scalar>
void apply_rotation_cs(BasicStatevector<Scalar>& state, const PauliString& generator, Scalar c, Scalar s) {
    using Complex = std::complex<Scalar>;
    check_dimensions(state, generator);
    const Complex yph = detail::y_phase<Scalar>(generator.y_count());
    const Complex minus_is_y = Complex(0, -s) * yph;
    const std::uint32_t x = generator.x_mask();
    const std::uint32_t z = generator.z_mask();
    auto& a = state.amplitudes();
    const auto dim = static_cast<std::uint64_t>(a.size());

    if (x == 0) {
        // Diagonal generator: each amplitude picks up cos -/+ i sin.
        const Complex even = Complex(c, 0) + minus_is_y;
        const Complex odd = Complex(c, 0) - minus_is_y;
        for (std::uint64_t b = 0; b < dim; ++b) {
            a(static_cast<Eigen::Index>(b)) *= detail::odd_parity(b, z) ? odd : even;
        }
        return;
    }

    // Visit each pair (b, b ^ x) once, from the member whose top flipped bit is clear.
    const std::uint32_t pivot = std::uint32_t{1} << (31 - std::countl_zero(x));
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & pivot) {
            continue;
        }
        const std::uint64_t f = b ^ x;
        const auto ib = static_cast<Eigen::Index>(b);
        const auto jf = static_cast<Eigen::Index>(f);
        const Complex ab = a(ib);
        const Complex af = a(jf);
        // (G a)[f] = phase(b) a[b], (G a)[b] = phase(f) a[f]
        const Scalar sign_b = detail::odd_parity(b, z) ? Scalar(-1) : Scalar(1);
        const Scalar sign_f = detail::odd_parity(f, z) ? Scalar(-1) : Scalar(1);
        a(ib) = c * ab + minus_is_y * sign_f * af;
        a(jf) = c * af + minus_is_y * sign_b * ab;
    }
}

/// In-place a' = cos(phi/2) a - i sin(phi/2) (G a).
template <typename Scalar>
void apply_rotation(BasicStatevector<Scalar>& state, const PauliString& generator, Scalar channel_angle) {
    apply_rotation_cs(state, generator, static_cast<Scalar>(std::cos(channel_angle / 2)),
                      static_cast<Scalar>(std::sin(channel_angle / 2)));
}

/// <psi|P|psi> for a single Pauli string (real up to rounding).
template <typename Scalar>
Scalar pauli_expectation(const BasicStatevector<Scalar>& state, const PauliString& pauli) {
    using Complex = std::complex<Scalar>;
    check_dimensions(state, pauli);
    const auto& a = state.amplitudes();
    const auto dim = static_cast<std::uint64_t>(a.size());
    const std::uint32_t x = pauli.x_mask();
    const std::uint32_t z = pauli.z_mask();
    Complex acc(0);
    for (std::uint64_t b = 0; b < dim; ++b) {
        const Complex term = std::conj(a(static_cast<Eigen::Index>(b ^ x))) * a(static_cast<Eigen::Index>(b));
        acc += detail::odd_parity(b, z) ? -term : term;
    }
    acc *= detail::y_phase<Scalar>(pauli.y_count());
    return acc.real();
}

template <typename Scalar>
Scalar expectation(const BasicStatevector<Scalar>& state, const Observable& obs) {
    Scalar total = 0;
    for (const auto& t : obs.terms) {
        total += static_cast<Scalar>(t.coefficient) * pauli_expectation(state, t.pauli);
    }
    return total;
}

/// Draws +1 with probability (1 + e)/2 given a precomputed expectation e.
inline int shot_from_expectation(double e, Rng& rng) {
    const double p_plus = std::clamp((1.0 + e) / 2.0, 0.0, 1.0);
    return rng.uniform() < p_plus ? 1 : -1;
}

/// One projective measurement of a +-1-valued Pauli observable.
template <typename Scalar>
int sample_pauli_shot(const BasicStatevector<Scalar>& state, const PauliString& pauli, Rng& rng) {
    return shot_from_expectation(static_cast<double>(pauli_expectation(state, pauli)), rng);
}

/// |<a|b>|^2
template <typename Scalar>
Scalar fidelity(const BasicStatevector<Scalar>& a, const BasicStatevector<Scalar>& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw StructuralError("fidelity: states have different qubit counts");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Dense 2^N x 2^N matrix of an observable; intended for small oracle checks.
inline Eigen::MatrixXcd dense_matrix(const Observable& obs, int num_qubits) {
    const auto dim = Eigen::Index{1} << num_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : obs.terms) {
        if (t.pauli.num_qubits() != num_qubits) {
            throw StructuralError("dense_matrix: term size mismatch");
        }
        const auto yph = detail::y_phase<double>(t.pauli.y_count());
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
            const double sgn = detail::odd_parity(b, t.pauli.z_mask()) ? -1.0 : 1.0;
            m(static_cast<Eigen::Index>(b ^ t.pauli.x_mask()), static_cast<Eigen::Index>(b)) +=
                t.coefficient * sgn * yph;
        }
    }
    return m;
}

}  // namespace pai
