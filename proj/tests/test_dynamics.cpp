// test_dynamics.cpp — Transition probabilities, survival amplitudes, predictions

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "eigencorr/dynamics.hpp"
#include "eigencorr/models.hpp"
#include "oracles.hpp"

using namespace eigencorr;

namespace {

HamiltonianPair two_level(double delta, double v) {
    HamiltonianPair h;
    h.e0 = Eigen::Vector2d(0.0, delta);
    SparseBuilder builder(2);
    builder.add(0, 1, v);
    h.v = builder.finish();
    return h;
}

std::vector<double> linspace(double t_max, int steps) {
    std::vector<double> out;
    for (int k = 0; k <= steps; ++k) out.push_back(t_max * static_cast<double>(k) / steps);
    return out;
}

struct IsingBench {
    Model model;
    SpectralData s;
    CouplingGraph g;
};

IsingBench ising6() {
    DefectIsingSpec spec;
    spec.n_sites = 6;
    IsingBench bench{build_defect_ising(spec), {}, {}};
    bench.s = diagonalize(bench.model.hamiltonian);
    bench.g = build_graph(bench.model.hamiltonian.v);
    return bench;
}

}  // namespace

TEST_CASE("two-level transition matches the closed form") {
    const double delta = 0.8;
    const double v = 0.55;
    const HamiltonianPair h = two_level(delta, v);
    const SpectralData s = diagonalize(h);
    const CouplingGraph g = build_graph(h.v);
    const std::vector<double> times = linspace(25.0, 1000);

    const auto f01 = transition_amplitude(s, 0, 1, times);
    const auto f0 = transition_probability(s, 0, g, times);
    const auto pred = predict_transition(s, 0, h.v, g, compute_stats(h.v, g), times);

    for (std::size_t k = 0; k < times.size(); ++k) {
        const double exact = oracles::rabi_probability(delta, v, times[k]);
        CHECK(std::norm(f01[k]) == Catch::Approx(exact).margin(1e-10).epsilon(0));
        CHECK(f0[k] == Catch::Approx(exact).margin(1e-10).epsilon(0));
        // For a single partner the prediction reduces to the transition
        // probability identically.
        CHECK(pred.local[k] == Catch::Approx(exact).margin(1e-10).epsilon(0));
        CHECK(pred.global[k] == Catch::Approx(pred.local[k]).margin(1e-12).epsilon(0));
    }
}

TEST_CASE("transition probability starts at zero and respects unitarity") {
    const IsingBench bench = ising6();
    const std::vector<double> times = linspace(8.0, 40);

    const auto f0 = transition_probability(bench.s, 20, bench.g, times);
    CHECK(f0.front() == Catch::Approx(0.0).margin(1e-20).epsilon(0));

    const SurvivalSeries surv = survival(bench.s, 20, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        double all = 0.0;
        for (int j = 0; j < 64; ++j) {
            if (j == 20) continue;
            all += std::norm(transition_amplitude(bench.s, 20, j, {&times[k], 1}).front());
        }
        const double stay = std::norm(surv.amplitude[k]);
        CHECK(all + stay == Catch::Approx(1.0).margin(1e-10).epsilon(0));
        CHECK(f0[k] <= all + 1e-12);
        CHECK(f0[k] >= -1e-14);
    }
}

TEST_CASE("transition amplitudes obey time-reversal conjugation") {
    const IsingBench bench = ising6();
    const std::vector<double> forward = {0.3, 1.7, 4.0};
    const std::vector<double> backward = {-0.3, -1.7, -4.0};
    const auto fwd = transition_amplitude(bench.s, 5, 11, forward);
    const auto bwd = transition_amplitude(bench.s, 11, 5, backward);
    for (std::size_t k = 0; k < fwd.size(); ++k)
        CHECK(std::abs(bwd[k] - std::conj(fwd[k])) < 1e-14);
}

TEST_CASE("survival amplitude and its derivative") {
    const IsingBench bench = ising6();
    const std::vector<double> times = linspace(6.0, 120);
    const SurvivalSeries surv = survival(bench.s, 33, times);

    CHECK(surv.amplitude.front().real() == Catch::Approx(1.0).margin(1e-12).epsilon(0));
    CHECK(std::abs(surv.amplitude.front().imag()) < 1e-14);
    // V is strictly off-diagonal, so the first moment of the detuning
    // distribution vanishes and the derivative starts at zero.
    CHECK(std::abs(surv.derivative.front()) < 1e-10);

    for (const auto& a : surv.amplitude) CHECK(std::abs(a) <= 1.0 + 1e-12);

    const double h = 1e-6;
    for (const double t : {0.7, 2.3, 5.1}) {
        const std::vector<double> stencil = {t - h, t, t + h};
        const SurvivalSeries local = survival(bench.s, 33, stencil);
        const std::complex<double> fd = (local.amplitude[2] - local.amplitude[0]) / (2.0 * h);
        CHECK(std::abs(local.derivative[1] - fd) < 1e-6);
    }
}

TEST_CASE("survival is constant without a perturbation") {
    DickeSpec spec;
    spec.n_atoms = 2;
    spec.n_max = 2;
    spec.lambda = 0.0;
    const Model model = build_dicke(spec);
    const SpectralData s = diagonalize(model.hamiltonian);
    const std::vector<double> times = linspace(100.0, 50);
    const SurvivalSeries surv = survival(s, 4, times);
    for (const auto& a : surv.amplitude) CHECK(std::abs(a - 1.0) < 1e-9);
}

TEST_CASE("local prediction uses the initial state's own coupling moments") {
    const IsingBench bench = ising6();
    const std::vector<double> times = linspace(3.0, 30);
    const CouplingStats stats = compute_stats(bench.model.hamiltonian.v, bench.g);

    const int i = 17;
    const auto& partners = bench.g.neighbors[static_cast<std::size_t>(i)];
    REQUIRE(partners.size() == 5);  // interior spin flips on sites 0..n-2
    const auto pred = predict_transition(bench.s, i, bench.model.hamiltonian.v, bench.g, stats, times);
    const SurvivalSeries surv = survival(bench.s, i, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expect_local = std::norm(surv.derivative[k]) / (5.0 * 0.45 * 0.45);
        const double expect_global = std::norm(surv.derivative[k]) / (stats.n_bar * 0.45 * 0.45);
        CHECK(pred.local[k] == Catch::Approx(expect_local).margin(1e-14).epsilon(1e-12));
        CHECK(pred.global[k] == Catch::Approx(expect_global).margin(1e-14).epsilon(1e-12));
    }
}

TEST_CASE("global prediction is NaN for degenerate ensemble statistics") {
    const double delta = 0.8;
    const HamiltonianPair h = two_level(delta, 0.55);
    const SpectralData s = diagonalize(h);
    const CouplingGraph g = build_graph(h.v);
    CouplingStats stats;  // no moments at all
    const auto pred = predict_transition(s, 0, h.v, g, stats, std::vector<double>{0.0, 1.0});
    for (const double p : pred.global) CHECK(std::isnan(p));
    for (const double p : pred.local) CHECK_FALSE(std::isnan(p));
}

TEST_CASE("time grid construction") {
    const TimeGrid grid = make_time_grid(0.25, 1000.0, 4);
    CHECK(grid.tau == Catch::Approx(4e-3).epsilon(1e-15));
    REQUIRE(grid.points.size() == 5);
    CHECK(grid.points.front() == 0.0);
    CHECK(grid.points.back() == Catch::Approx(4.0).epsilon(1e-15));
    CHECK(grid.points[1] == Catch::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(make_time_grid(0.0, 1000.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_time_grid(-1.0, 1000.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_time_grid(0.25, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_time_grid(0.25, 1000.0, 0), std::invalid_argument);
}

TEST_CASE("median initial state selection") {
    SpectralData s;
    s.energies = Eigen::VectorXd::LinSpaced(6, 0.0, 5.0);
    s.e0 = s.energies;
    s.components = Eigen::MatrixXd::Identity(6, 6);

    const EnergyWindow w{1, 4, 1.0};
    CHECK(median_initial_state(s, w) == 2);

    SpectralData off = s;
    off.e0 = Eigen::VectorXd::Constant(6, 50.0);
    CHECK_THROWS_AS(median_initial_state(off, w), std::runtime_error);
}

TEST_CASE("median initial state represents a degenerate level group") {
    SpectralData s;
    s.energies = Eigen::VectorXd::LinSpaced(8, 0.0, 7.0);
    s.e0.resize(8);
    // Candidates inside [1, 6]: one state at 1.5, then five sharing level 3.
    s.e0 << -5.0, 1.5, 3.0, 3.0, 3.0, 3.0, 3.0, 50.0;
    const EnergyWindow w{1, 6, 1.0};

    // Median of the six candidates lands on the 3.0 group; its middle state
    // by index is chosen rather than the first of the group.
    CHECK(median_initial_state(s, w) == 4);
}

TEST_CASE("degenerate initial states are rejected") {
    SparseBuilder builder(3);
    builder.add(0, 1, 1.0);
    HamiltonianPair h;
    h.e0 = Eigen::Vector3d(0.0, 1.0, 2.0);
    h.v = builder.finish();
    const SpectralData s = diagonalize(h);
    const CouplingGraph g = build_graph(h.v);
    const std::vector<double> times = {0.0, 1.0};

    CHECK_THROWS_AS(transition_probability(s, 2, g, times), std::invalid_argument);
    CHECK_THROWS_AS(transition_probability(s, 3, g, times), std::invalid_argument);
    CHECK_THROWS_AS(transition_amplitude(s, 0, 3, times), std::invalid_argument);
    CHECK_THROWS_AS(survival(s, -1, times), std::invalid_argument);
    CHECK_THROWS_AS(predict_transition(s, 2, h.v, g, CouplingStats{}, times), std::invalid_argument);

    SparseBuilder balanced(3);
    balanced.add(0, 1, 1.0);
    balanced.add(0, 2, -1.0);
    HamiltonianPair hb;
    hb.e0 = Eigen::Vector3d(0.0, 1.0, 2.0);
    hb.v = balanced.finish();
    const SpectralData sb = diagonalize(hb);
    const CouplingGraph gb = build_graph(hb.v);
    CHECK_THROWS_AS(predict_transition(sb, 0, hb.v, gb, CouplingStats{}, times), std::runtime_error);
}

TEST_CASE("dynamics driver bundles the pieces consistently") {
    const IsingBench bench = ising6();
    const EnergyWindow w = select_window(bench.s, 32);
    const CouplingStats stats = compute_stats(bench.model.hamiltonian.v, bench.g);
    const int initial = median_initial_state(bench.s, w);
    const TimeGrid grid = make_time_grid(w.d, 200.0, 50);
    const DynamicsResult result =
        run_dynamics(bench.s, initial, bench.model.hamiltonian.v, bench.g, stats, grid);

    CHECK(result.initial_index == initial);
    REQUIRE(result.f_i.size() == 51);
    REQUIRE(result.survival_amplitude.size() == 51);
    REQUIRE(result.predicted.size() == 51);
    REQUIRE(result.predicted_global.size() == 51);

    const auto direct = transition_probability(bench.s, initial, bench.g, result.grid.points);
    for (std::size_t k = 0; k < direct.size(); ++k) CHECK(result.f_i[k] == direct[k]);
    CHECK(std::norm(result.survival_amplitude.front()) == Catch::Approx(1.0).margin(1e-12).epsilon(0));
}
