#include <catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "pai/errors.hpp"
#include "pai/models.hpp"

using Catch::Approx;
using pai::InitialState;
using pai::PauliString;

namespace {

double energy_at(const pai::SpinRingModel& m, const pai::HvaAnsatz& a, const pai::AnsatzParams& p) {
    return pai::energy(m, pai::simulate(pai::hva_circuit(m, a, p)));
}

pai::Statevector neel(int n) {
    pai::Statevector s(n);
    for (int q = 1; q < n; q += 2) {
        pai::apply_rotation(s, PauliString::on(n, {q}, 'X'), std::numbers::pi);
    }
    return s;
}

}  // namespace

TEST_CASE("spin ring construction") {
    const auto m = pai::spin_ring(12, 0.3, 5);
    CHECK(pai::hamiltonian(m).terms.size() == 48);
    CHECK(pai::hamiltonian(pai::spin_ring(3, 0.3, 5)).terms.size() == 12);
    for (double w : m.omega) {
        CHECK(w >= -1.0);
        CHECK(w <= 1.0);
    }
    CHECK(pai::spin_ring(12, 0.3, 5).omega == m.omega);
    CHECK(pai::spin_ring(12, 0.3, 6).omega != m.omega);
    const auto h = pai::hamiltonian(m);
    CHECK(h.terms[11].pauli == PauliString::on(12, {11}, 'Z'));
    CHECK(h.terms[12].pauli == PauliString::on(12, {0, 1}, 'X'));
    CHECK(h.terms.back().pauli == PauliString::on(12, {11, 0}, 'Z'));
    CHECK_THROWS_AS(pai::spin_ring(2, 0.3, 1), pai::DomainError);
}

TEST_CASE("energies on product states and eigenstates") {
    const auto m = pai::spin_ring(5, 0.3, 2);
    double sum_w = 0.0;
    for (double w : m.omega) {
        sum_w += w;
    }
    const pai::HvaAnsatz a{2, InitialState::kZero};
    CHECK(energy_at(m, a, pai::AnsatzParams::Zero(40)) == Approx(sum_w + 0.3 * 5).margin(1e-13));

    const auto m3 = pai::spin_ring(3, 0.7, 4);
    const Eigen::MatrixXcd h = pai::dense_matrix(pai::hamiltonian(m3), 3);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const pai::Statevector ground(3, es.eigenvectors().col(0));
    CHECK(pai::energy(m3, ground) == Approx(es.eigenvalues()(0)).margin(1e-10));
    CHECK(pai::ground_energy(m3) == Approx(es.eigenvalues()(0)).margin(1e-12));
}

TEST_CASE("circuit builders") {
    const auto m = pai::spin_ring(12, 0.3, 1);
    const auto c = pai::trotter_circuit(m, {1.0, 50});
    CHECK(c.parametrised_count() == 2400);
    CHECK(c.gates.size() == 2400);
    const auto cn = pai::trotter_circuit(m, {1.0, 50}, InitialState::kNeel);
    CHECK(cn.gates.size() == 2406);
    CHECK(cn.parametrised_count() == 2400);

    const auto angles = pai::trotter_angles(m, {1.0, 50});
    CHECK(angles[0] == Approx(2 * m.omega[0] / 50));
    const pai::AnsatzParams p = Eigen::Map<const Eigen::VectorXd>(angles.data(), angles.size());
    const auto hva = pai::hva_circuit(m, {50, InitialState::kZero}, p);
    REQUIRE(hva.gates.size() == c.gates.size());
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        REQUIRE(hva.gates[i].generator == c.gates[i].generator);
        REQUIRE(hva.gates[i].angle == c.gates[i].angle);
    }
    CHECK_THROWS_AS(pai::hva_circuit(m, {2, InitialState::kZero}, pai::AnsatzParams::Zero(5)),
                    pai::StructuralError);
    CHECK(pai::initial_state_from_string("neel") == InitialState::kNeel);
    CHECK_THROWS_AS(pai::initial_state_from_string("plus"), pai::ConfigError);
    CHECK_THROWS_AS(pai::gradient_mode_from_string("adam"), pai::ConfigError);
}

TEST_CASE("a single Trotter layer of one term is exact") {
    const auto m = pai::spin_ring(3, 0.4, 3);
    // Only the first parametrised gate (Z_0) is switched on.
    std::vector<double> angles(12, 0.0);
    angles[0] = 2 * m.omega[0] * 0.3;
    pai::Circuit c = pai::layered_circuit(m, 1, angles, InitialState::kZero);
    c.gates.insert(c.gates.begin(), {PauliString::on(3, {0}, 'Y'), std::numbers::pi / 2, false});
    const auto s = pai::simulate(c);
    // |+> evolved under exp(-i w t Z) precesses: <X> = cos(2 w t).
    CHECK(pai::pauli_expectation(s, PauliString::on(3, {0}, 'X')) == Approx(std::cos(2 * m.omega[0] * 0.3)));
}

TEST_CASE("first-order Trotter error shrinks like 1/l") {
    const auto m = pai::spin_ring(4, 0.5, 7);
    const double t = 0.5;
    const Eigen::MatrixXcd h = pai::dense_matrix(pai::hamiltonian(m), 4);
    const Eigen::MatrixXcd u = (std::complex<double>(0, -t) * h).exp();
    const pai::Statevector exact(4, u * neel(4).amplitudes());
    const auto z0 = PauliString::on(4, {0}, 'Z');
    const double target = pai::pauli_expectation(exact, z0);
    std::vector<double> errors;
    for (int l : {4, 8, 16, 32}) {
        const auto c = pai::trotter_circuit(m, {t, l}, InitialState::kNeel);
        errors.push_back(std::abs(pai::pauli_expectation(pai::simulate(c), z0) - target));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        CHECK(ratio >= 1.5);
        CHECK(ratio <= 2.5);
    }
}

TEST_CASE("parameter-shift gradients match finite differences") {
    const auto m = pai::spin_ring(4, 0.6, 9);
    const pai::HvaAnsatz a{2, InitialState::kNeel};
    pai::Rng rng(3, 0);
    pai::AnsatzParams p(static_cast<Eigen::Index>(a.parameter_count(m)));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = (rng.uniform() - 0.5) * 2.0;
    }
    const pai::EstimatorConfig exact{};
    const Eigen::VectorXd g = pai::gradient(m, a, p, exact);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        pai::AnsatzParams up = p;
        pai::AnsatzParams down = p;
        up(i) += h;
        down(i) -= h;
        const double fd = (energy_at(m, a, up) - energy_at(m, a, down)) / (2 * h);
        CHECK(std::abs(fd - g(i)) < 1e-6);
    }
}

TEST_CASE("Z-rotation gradients vanish at zero parameters") {
    const auto m = pai::spin_ring(4, 0.6, 9);
    const pai::HvaAnsatz a{1, InitialState::kZero};
    const Eigen::VectorXd g = pai::gradient(m, a, pai::AnsatzParams::Zero(16), pai::EstimatorConfig{});
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(g(k)) < 1e-14);
    }
}

TEST_CASE("PAI gradients converge to the exact gradient") {
    const auto m = pai::spin_ring(4, 0.6, 10);
    const pai::HvaAnsatz a{1, InitialState::kNeel};
    const auto grid = pai::NotchGrid::uniform(4);
    pai::AnsatzParams p(16);
    pai::Rng rng(5, 0);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = (rng.uniform() - 0.5) * 2.0;
    }
    const Eigen::VectorXd exact = pai::gradient(m, a, p, pai::EstimatorConfig{});
    const int repeats = 30;
    Eigen::MatrixXd samples(16, repeats);
    for (int r = 0; r < repeats; ++r) {
        const pai::EstimatorConfig cfg{pai::GradientMode::kPai, grid, 32000, 50, static_cast<std::uint64_t>(r), 1};
        samples.col(r) = pai::gradient(m, a, p, cfg);
    }
    const Eigen::VectorXd mean = samples.rowwise().mean();
    for (Eigen::Index i = 0; i < 16; ++i) {
        const double sd = std::sqrt((samples.row(i).array() - mean(i)).square().sum() / (repeats - 1));
        CHECK(std::abs(mean(i) - exact(i)) <= 5 * sd / std::sqrt(repeats) + 1e-12);
    }
}

TEST_CASE("nearest-notch gradients use the rounded circuit") {
    const auto m = pai::spin_ring(3, 0.6, 11);
    const pai::HvaAnsatz a{1, InitialState::kNeel};
    const auto grid = pai::NotchGrid::uniform(3);
    pai::AnsatzParams p = pai::AnsatzParams::Constant(12, 0.2);
    const pai::EstimatorConfig cfg{pai::GradientMode::kNearestNotch, grid, 1200000, 1, 3, 1};
    const Eigen::VectorXd g = pai::gradient(m, a, p, cfg);
    // 0.2 +- pi/2 rounds to the same notches as 0 +- pi/2 on a 3-bit grid.
    const Eigen::VectorXd g0 = pai::gradient(m, a, pai::AnsatzParams::Zero(12), pai::EstimatorConfig{});
    for (Eigen::Index i = 0; i < 12; ++i) {
        CHECK(std::abs(g(i) - g0(i)) < 0.03);
    }
}

TEST_CASE("exact-mode descent lowers the energy") {
    const auto m = pai::spin_ring(6, 0.3, 1);
    const pai::HvaAnsatz a{3, InitialState::kZero};
    const auto init = pai::initial_parameters(a.parameter_count(m), 5);
    CHECK(init.cwiseAbs().maxCoeff() <= 0.1);
    const auto res = pai::vqe_run(m, a, init, 0.05, 200, pai::EstimatorConfig{});
    REQUIRE(res.trace.size() == 201);
    CHECK(res.trace.back().delta_e < res.trace.front().delta_e);
    CHECK(res.trace.back().delta_e >= -1e-10);
    int violations = 0;
    for (std::size_t i = 41; i < res.trace.size(); ++i) {
        violations += res.trace[i].energy > res.trace[i - 1].energy + 1e-12;
    }
    CHECK(violations <= 8);

    const auto zero = pai::vqe_run(m, a, init, 0.05, 0, pai::EstimatorConfig{});
    REQUIRE(zero.trace.size() == 1);
    CHECK(zero.trace[0].energy == res.trace[0].energy);
}
