#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "pai/errors.hpp"
#include "pai/notch.hpp"
#include "pai/rng.hpp"

using Catch::Approx;
using pai::NotchGrid;

namespace {

const std::vector<double> kExplicit{0.0, 0.5, 1.2, 2.0, 3.0, 4.0, 5.0, 6.0};

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), pai::kTwoPi);
    return std::min(d, pai::kTwoPi - d);
}

}  // namespace

TEST_CASE("wrap_angle reduces into [0, 2pi)") {
    CHECK(pai::wrap_angle(0.0) == 0.0);
    CHECK(pai::wrap_angle(-0.5) == Approx(pai::kTwoPi - 0.5));
    CHECK(pai::wrap_angle(7.0) == Approx(7.0 - pai::kTwoPi));
    CHECK(pai::wrap_angle(pai::kTwoPi) < pai::kTwoPi);
    CHECK_THROWS_AS(pai::wrap_angle(std::nan("")), pai::DomainError);
    CHECK_THROWS_AS(pai::wrap_angle(INFINITY), pai::DomainError);
}

TEST_CASE("uniform grids hold 2^B equidistant notches") {
    const auto g = NotchGrid::uniform(7);
    CHECK(g.is_uniform());
    CHECK(g.size() == 128);
    CHECK(g.delta_max() == Approx(0.0490873852).epsilon(1e-9));
    CHECK(g.angle(3) == Approx(3 * g.delta_max()));
    CHECK(g.spacing(127) == Approx(g.delta_max()));
    CHECK(NotchGrid::uniform(30).size() == (std::size_t{1} << 30));
    CHECK_THROWS_AS(NotchGrid::uniform(1), pai::DomainError);
    CHECK_THROWS_AS(NotchGrid::uniform(31), pai::DomainError);
}

TEST_CASE("explicit grids validate their angle lists") {
    const auto g = NotchGrid::from_angles(kExplicit);
    CHECK_FALSE(g.is_uniform());
    CHECK(g.size() == 8);
    CHECK(g.spacing(7) == Approx(pai::kTwoPi - 6.0));
    CHECK(g.delta_max() == Approx(1.0));
    CHECK_THROWS_AS(NotchGrid::from_angles({0.0, 1.0, 2.0}), pai::DomainError);
    CHECK_THROWS_AS(NotchGrid::from_angles({0.0, 1.0, 1.0, 2.0, 3.0, 4.5, 6.0}), pai::DomainError);
    CHECK_THROWS_AS(NotchGrid::from_angles({0.0, 2.0, 1.0, 3.0, 4.5, 6.0}), pai::DomainError);
    CHECK_THROWS_AS(NotchGrid::from_angles({0.0, 1.0, 2.0, 3.0, 4.0}), pai::DomainError);
    CHECK_THROWS_AS(NotchGrid::from_angles({0.0, 1.0, 2.6, 3.5, 4.5, 5.5}), pai::DomainError);
    CHECK_THROWS_AS(NotchGrid::from_angles({-0.1, 1.0, 2.0, 3.0, 4.0, 5.0}), pai::DomainError);
}

TEST_CASE("locate on a uniform grid") {
    const auto g = NotchGrid::uniform(7);
    const double d = g.delta_max();
    const auto on = pai::locate(g, 3 * d);
    CHECK(on.k == 3);
    CHECK(on.theta == Approx(0.0).margin(1e-15));
    CHECK(on.lambda == Approx(0.0).margin(1e-12));
    const auto half = pai::locate(g, 3.5 * d);
    CHECK(half.k == 3);
    CHECK(half.theta == Approx(d / 2));
    CHECK(half.lambda == Approx(0.5));
    CHECK(half.delta_k == Approx(0.0490874).epsilon(1e-6));
    CHECK(pai::locate(g, -0.25 * d).k == 127);
}

TEST_CASE("locate on an explicit grid") {
    const auto g = NotchGrid::from_angles(kExplicit);
    const auto p = pai::locate(g, 0.9);
    CHECK(p.k == 1);
    CHECK(p.theta == Approx(0.4));
    CHECK(p.lambda == Approx(0.4 / 0.7));
    const auto w = pai::locate(g, 6.2);
    CHECK(w.k == 7);
    CHECK(w.delta_k == Approx(pai::kTwoPi - 6.0));
}

TEST_CASE("locate reconstructs the target angle") {
    pai::Rng rng(3, 0);
    const auto u = NotchGrid::uniform(5);
    const auto e = NotchGrid::from_angles(kExplicit);
    for (int i = 0; i < 2000; ++i) {
        const double target = (rng.uniform() - 0.5) * 40.0;
        for (const NotchGrid* g : {&u, &e}) {
            const auto p = pai::locate(*g, target);
            REQUIRE(p.theta >= 0.0);
            REQUIRE(p.theta < p.delta_k);
            REQUIRE(p.lambda >= 0.0);
            REQUIRE(p.lambda < 1.0);
            REQUIRE(circular_distance(g->angle(p.k) + p.theta, target) < 1e-12);
        }
    }
}

TEST_CASE("nearest notch rounds halfway targets up") {
    const auto g = NotchGrid::uniform(7);
    const double d = g.delta_max();
    CHECK(pai::nearest_notch(g, 3.4 * d) == 3);
    CHECK(pai::nearest_notch(g, 3.6 * d) == 4);
    CHECK(pai::nearest_notch(g, 3.5 * d) == 4);
    CHECK(pai::nearest_notch(g, 127.7 * d) == 0);
}

TEST_CASE("antipolar notches") {
    CHECK(pai::antipolar_notch(NotchGrid::uniform(7), 3) == 67);
    CHECK(pai::antipolar_notch(NotchGrid::uniform(4), 10) == 2);

    const std::vector<double> angles{0.3, 0.9, 1.5, 2.2, 2.9, 3.6, 4.3, 5.0, 5.7};
    const auto g = NotchGrid::from_angles(angles);
    for (std::size_t k = 0; k < angles.size(); ++k) {
        // Linear scan oracle: closest notch to angle + pi on the circle.
        std::size_t best = 0;
        for (std::size_t j = 1; j < angles.size(); ++j) {
            if (circular_distance(angles[j], angles[k] + std::numbers::pi) <
                circular_distance(angles[best], angles[k] + std::numbers::pi)) {
                best = j;
            }
        }
        CHECK(pai::antipolar_notch(g, k) == best);
    }
}
