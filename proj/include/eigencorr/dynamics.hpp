// dynamics.hpp — Spectral time evolution of transition and survival probabilities

#pragma once

#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "eigencorr/coupling.hpp"
#include "eigencorr/spectral.hpp"

namespace eigencorr {

// Sample times in units of tau = 1e-3 / d, the scale set by the mean level
// spacing of the analysis window.
struct TimeGrid {
    double tau = 0.0;
    std::vector<double> points;
};

inline TimeGrid make_time_grid(double d, double t_max_over_tau, int steps) {
    if (!(d > 0.0)) throw std::invalid_argument("time grid: mean level spacing must be positive");
    if (!(t_max_over_tau > 0.0) || steps < 1)
        throw std::invalid_argument("time grid: need a positive horizon and at least one step");
    TimeGrid grid;
    grid.tau = 1e-3 / d;
    grid.points.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k)
        grid.points.push_back(grid.tau * t_max_over_tau * static_cast<double>(k) / steps);
    return grid;
}

// F_ij(t) = sum_alpha e^{-i E_alpha t} C_{alpha j} C_{alpha i}, the amplitude
// for |E_i^0> to evolve into |E_j^0>.
inline std::vector<std::complex<double>> transition_amplitude(const SpectralData& s, int i, int j,
                                                              std::span<const double> times) {
    const auto dim = static_cast<Eigen::Index>(s.dim());
    if (i < 0 || j < 0 || i >= dim || j >= dim)
        throw std::invalid_argument("transition_amplitude: basis index out of range");
    std::vector<std::complex<double>> out;
    out.reserve(times.size());
    for (const double t : times) {
        std::complex<double> sum = 0.0;
        for (Eigen::Index alpha = 0; alpha < dim; ++alpha) {
            const double phase = -s.energies(alpha) * t;
            sum += s.components(alpha, i) * s.components(alpha, j) *
                   std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out.push_back(sum);
    }
    return out;
}

// F_i(t) = sum over directly coupled j of |F_ij(t)|^2, the probability of
// having left |E_i^0> for one of its coupling partners.
inline std::vector<double> transition_probability(const SpectralData& s, int i, const CouplingGraph& g,
                                                  std::span<const double> times) {
    const auto dim = static_cast<Eigen::Index>(s.dim());
    if (i < 0 || i >= dim) throw std::invalid_argument("transition_probability: basis index out of range");
    const auto& partners = g.neighbors[static_cast<std::size_t>(i)];
    if (partners.empty()) throw std::invalid_argument("transition_probability: isolated initial state");

    std::vector<double> out;
    out.reserve(times.size());
    Eigen::VectorXcd weights(dim);
    for (const double t : times) {
        for (Eigen::Index alpha = 0; alpha < dim; ++alpha) {
            const double phase = -s.energies(alpha) * t;
            weights(alpha) = s.components(alpha, i) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        double total = 0.0;
        for (const auto j : partners) {
            std::complex<double> f = 0.0;
            for (Eigen::Index alpha = 0; alpha < dim; ++alpha) f += weights(alpha) * s.components(alpha, j);
            total += std::norm(f);
        }
        out.push_back(total);
    }
    return out;
}

struct SurvivalSeries {
    std::vector<std::complex<double>> amplitude;
    std::vector<std::complex<double>> derivative;
};

// Survival amplitude s_i(t) = sum_alpha |C_{alpha i}|^2 e^{i eps_{alpha i} t}
// and its exact analytic time derivative.
inline SurvivalSeries survival(const SpectralData& s, int i, std::span<const double> times) {
    const auto dim = static_cast<Eigen::Index>(s.dim());
    if (i < 0 || i >= dim) throw std::invalid_argument("survival: basis index out of range");
    SurvivalSeries out;
    out.amplitude.reserve(times.size());
    out.derivative.reserve(times.size());
    for (const double t : times) {
        std::complex<double> amp = 0.0;
        std::complex<double> der = 0.0;
        for (Eigen::Index alpha = 0; alpha < dim; ++alpha) {
            const double p = s.components(alpha, i) * s.components(alpha, i);
            const double eps = s.detuning(alpha, i);
            const auto phase = std::polar(p, eps * t);
            amp += phase;
            der += std::complex<double>(0.0, eps) * phase;
        }
        out.amplitude.push_back(amp);
        out.derivative.push_back(der);
    }
    return out;
}

struct TransitionPrediction {
    std::vector<double> local;
    std::vector<double> global;
};

// F^hat_i(t) = |ds_i/dt|^2 / (N_i V_i^2) with the initial state's own partner
// count and mean coupling. The same expression with the global ensemble
// moments is emitted alongside, as NaN when those are degenerate.
inline TransitionPrediction predict_transition(const SpectralData& s, int i, const SymmetricSparse& v,
                                               const CouplingGraph& g, const CouplingStats& stats,
                                               std::span<const double> times) {
    const auto& partners = g.neighbors[static_cast<std::size_t>(i)];
    if (partners.empty()) throw std::invalid_argument("predict_transition: isolated initial state");
    double v_local = 0.0;
    for (const auto j : partners) v_local += coupling_value(v, static_cast<std::int32_t>(i), j);
    v_local /= static_cast<double>(partners.size());
    if (v_local == 0.0) throw std::runtime_error("predict_transition: vanishing local mean coupling");
    const double local_scale = static_cast<double>(partners.size()) * v_local * v_local;
    const double global_scale =
        stats.v_bar && *stats.v_bar != 0.0 && stats.n_bar > 0.0
            ? stats.n_bar * *stats.v_bar * *stats.v_bar
            : std::numeric_limits<double>::quiet_NaN();

    const SurvivalSeries surv = survival(s, i, times);
    TransitionPrediction out;
    out.local.reserve(times.size());
    out.global.reserve(times.size());
    for (const auto& d : surv.derivative) {
        out.local.push_back(std::norm(d) / local_scale);
        out.global.push_back(std::norm(d) / global_scale);
    }
    return out;
}

// Basis state with the median unperturbed energy among those falling inside
// the window's eigenvalue range. Unperturbed levels are often degenerate or
// near-degenerate; picking the middle index of the median level group keeps
// the choice representative of that group instead of landing on whichever
// extreme state happens to sit at the group boundary.
inline int median_initial_state(const SpectralData& s, const EnergyWindow& w) {
    const double lo = s.energies(w.first);
    const double hi = s.energies(w.last());
    std::vector<std::pair<double, int>> candidates;
    for (Eigen::Index i = 0; i < s.e0.size(); ++i)
        if (s.e0(i) >= lo && s.e0(i) <= hi) candidates.emplace_back(s.e0(i), static_cast<int>(i));
    if (candidates.empty())
        throw std::runtime_error("median_initial_state: no basis state inside the window energy range");
    std::sort(candidates.begin(), candidates.end());
    const double median = candidates[(candidates.size() - 1) / 2].first;
    const double tol = 1e-9 * (1.0 + std::abs(median));
    std::vector<int> group;
    for (const auto& [e0, index] : candidates)
        if (std::abs(e0 - median) <= tol) group.push_back(index);
    return group[(group.size() - 1) / 2];
}

struct DynamicsResult {
    int initial_index = -1;
    TimeGrid grid;
    std::vector<double> f_i;
    std::vector<std::complex<double>> survival_amplitude;
    std::vector<double> predicted;
    std::vector<double> predicted_global;
};

inline DynamicsResult run_dynamics(const SpectralData& s, int initial, const SymmetricSparse& v,
                                   const CouplingGraph& g, const CouplingStats& stats, TimeGrid grid) {
    DynamicsResult out;
    out.initial_index = initial;
    out.grid = std::move(grid);
    out.f_i = transition_probability(s, initial, g, out.grid.points);
    out.survival_amplitude = survival(s, initial, out.grid.points).amplitude;
    auto pred = predict_transition(s, initial, v, g, stats, out.grid.points);
    out.predicted = std::move(pred.local);
    out.predicted_global = std::move(pred.global);
    return out;
}

}  // namespace eigencorr
