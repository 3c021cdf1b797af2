#pragma once

// Discrete angle grids ("notches") and lookup of continuous targets.

#include <cstddef>
#include <numbers>
#include <vector>

namespace pai {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
double wrap_angle(double angle);

/// Position of a target angle relative to its bracketing notch k:
/// target == angle(k) + theta (mod 2pi), lambda = theta / delta_k.
struct AnglePosition {
    std::size_t k = 0;
    double theta = 0.0;
    double lambda = 0.0;
    double delta_k = 0.0;
};

/// Permitted angle settings of a device: either 2^B equidistant notches or an
/// explicit sorted list in [0, 2pi) with every gap (including the wrap) below pi/2.
class NotchGrid {
  public:
    static NotchGrid uniform(int bits);
    static NotchGrid from_angles(std::vector<double> angles);

    bool is_uniform() const noexcept { return bits_ > 0; }
    /// Bit resolution for uniform grids, 0 otherwise.
    int bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return size_; }
    double angle(std::size_t k) const;
    /// Gap from notch k to notch k+1, wrapping at 2pi.
    double spacing(std::size_t k) const;
    double delta_max() const noexcept { return delta_max_; }
    /// Explicit notch list; empty for uniform grids.
    const std::vector<double>& explicit_angles() const noexcept { return angles_; }

  private:
    NotchGrid() = default;

    int bits_ = 0;
    std::size_t size_ = 0;
    std::vector<double> angles_;
    std::vector<double> spacings_;
    double delta_max_ = 0.0;
};

AnglePosition locate(const NotchGrid& grid, double target_angle);

/// Closest notch; a target exactly halfway rounds up to k+1.
std::size_t nearest_notch(const NotchGrid& grid, double target_angle);

/// Notch at angle(k) + pi (uniform) or nearest to it (explicit).
std::size_t antipolar_notch(const NotchGrid& grid, std::size_t k);

}  // namespace pai
