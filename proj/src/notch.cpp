#include "pai/notch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pai/errors.hpp"

namespace pai {

namespace {

// Overrotations this close to the next notch are treated as landing on it.
constexpr double kSnapTolerance = 1e-12;

AnglePosition snapped(const NotchGrid& grid, std::size_t k, double theta) {
    theta = std::max(theta, 0.0);
    if (grid.spacing(k) - theta <= kSnapTolerance) {
        k = (k + 1) % grid.size();
        theta = 0.0;
    }
    const double delta = grid.spacing(k);
    return AnglePosition{k, theta, theta / delta, delta};
}

}  // namespace

double wrap_angle(double angle) {
    if (!std::isfinite(angle)) {
        throw DomainError("angle must be finite");
    }
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

NotchGrid NotchGrid::uniform(int bits) {
    if (bits < 2 || bits > 30) {
        throw DomainError("uniform grid needs 2 <= bits <= 30, got " + std::to_string(bits));
    }
    NotchGrid g;
    g.bits_ = bits;
    g.size_ = std::size_t{1} << bits;
    g.delta_max_ = kTwoPi / static_cast<double>(g.size_);
    return g;
}

NotchGrid NotchGrid::from_angles(std::vector<double> angles) {
    if (angles.size() < 4) {
        throw DomainError("explicit grid needs at least 4 notches");
    }
    for (double a : angles) {
        if (!std::isfinite(a) || a < 0.0 || a >= kTwoPi) {
            throw DomainError("explicit grid angles must lie in [0, 2pi)");
        }
    }
    if (!std::is_sorted(angles.begin(), angles.end()) ||
        std::adjacent_find(angles.begin(), angles.end()) != angles.end()) {
        throw DomainError("explicit grid angles must be sorted and distinct");
    }
    NotchGrid g;
    const std::size_t n = angles.size();
    g.spacings_.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        g.spacings_[k] = angles[k + 1] - angles[k];
    }
    g.spacings_[n - 1] = angles[0] + kTwoPi - angles[n - 1];
    for (double s : g.spacings_) {
        if (!(s > 0.0) || s >= std::numbers::pi / 2) {
            throw DomainError("explicit grid spacings must lie in (0, pi/2)");
        }
    }
    g.delta_max_ = *std::max_element(g.spacings_.begin(), g.spacings_.end());
    g.size_ = n;
    g.angles_ = std::move(angles);
    return g;
}

double NotchGrid::angle(std::size_t k) const {
    if (k >= size_) {
        throw StructuralError("NotchGrid: notch index out of range");
    }
    return is_uniform() ? static_cast<double>(k) * delta_max_ : angles_[k];
}

double NotchGrid::spacing(std::size_t k) const {
    if (k >= size_) {
        throw StructuralError("NotchGrid: notch index out of range");
    }
    return is_uniform() ? delta_max_ : spacings_[k];
}

AnglePosition locate(const NotchGrid& grid, double target_angle) {
    const double x = wrap_angle(target_angle);
    const std::size_t n = grid.size();
    if (grid.is_uniform()) {
        const double delta = grid.spacing(0);
        auto k = static_cast<std::size_t>(std::floor(x / delta));
        k = std::min(k, n - 1);
        return snapped(grid, k, x - static_cast<double>(k) * delta);
    }
    const auto& a = grid.explicit_angles();
    const auto it = std::upper_bound(a.begin(), a.end(), x);
    if (it == a.begin()) {
        return snapped(grid, n - 1, x + kTwoPi - a[n - 1]);
    }
    const auto k = static_cast<std::size_t>(it - a.begin()) - 1;
    return snapped(grid, k, x - a[k]);
}

std::size_t nearest_notch(const NotchGrid& grid, double target_angle) {
    const AnglePosition pos = locate(grid, target_angle);
    return pos.lambda >= 0.5 ? (pos.k + 1) % grid.size() : pos.k;
}

std::size_t antipolar_notch(const NotchGrid& grid, std::size_t k) {
    if (k >= grid.size()) {
        throw StructuralError("antipolar_notch: notch index out of range");
    }
    if (grid.is_uniform()) {
        return (k + grid.size() / 2) % grid.size();
    }
    return nearest_notch(grid, grid.angle(k) + std::numbers::pi);
}

}  // namespace pai
