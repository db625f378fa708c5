// correlations.hpp — Detuning-resolved eigenfunction correlators and their predictions

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "eigencorr/binning.hpp"
#include "eigencorr/coupling.hpp"
#include "eigencorr/random.hpp"
#include "eigencorr/spectral.hpp"

namespace eigencorr {

// Averaged eigenfunction shape Pi(eps): mean |C_{alpha i}|^2 over the window,
// binned at eps = E_i^0 - E_alpha.
inline BinnedStatistic ef_shape(const SpectralData& s, const EnergyWindow& w, const BinGrid& grid) {
    if (w.count < 1) throw std::invalid_argument("ef_shape: empty window");
    BinAccumulator acc(grid);
    const auto dim = static_cast<Eigen::Index>(s.dim());
    for (int alpha = w.first; alpha <= w.last(); ++alpha)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double c = s.components(alpha, i);
            acc.add(s.detuning(alpha, i), c * c);
        }
    return acc.finish();
}

// Symmetric grid about zero covering the window's eigenfunction support,
// found by trimming a negligible share of the total |C|^2 weight from each
// detuning tail.
inline BinGrid auto_grid(const SpectralData& s, const EnergyWindow& w, int n_bins = 81) {
    if (w.count < 1) throw std::invalid_argument("auto_grid: empty window");
    if (n_bins < 1) throw std::invalid_argument("auto_grid: need at least one bin");
    std::vector<std::pair<double, double>> samples;
    samples.reserve(static_cast<std::size_t>(w.count) * s.dim());
    double total = 0.0;
    const auto dim = static_cast<Eigen::Index>(s.dim());
    for (int alpha = w.first; alpha <= w.last(); ++alpha)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double c = s.components(alpha, i);
            samples.emplace_back(s.detuning(alpha, i), c * c);
            total += c * c;
        }
    std::sort(samples.begin(), samples.end());
    const double tail = 1e-9 * total;
    double acc = 0.0;
    std::size_t lo = 0;
    while (lo + 1 < samples.size() && acc + samples[lo].second <= tail) acc += samples[lo++].second;
    acc = 0.0;
    std::size_t hi = samples.size() - 1;
    while (hi > lo && acc + samples[hi].second <= tail) acc += samples[hi--].second;
    double half = std::max(std::abs(samples[lo].first), std::abs(samples[hi].first));
    if (!(half > 0.0)) half = 1.0;
    return BinGrid{-half, half, n_bins};
}

// First-order correlation C1(eps): mean C_{alpha i} C_{alpha j} over directly
// coupled ordered pairs, binned at eps = E_i^0 - E_alpha and normalized by Pi.
inline BinnedStatistic corr1(const SpectralData& s, const EnergyWindow& w, const CouplingGraph& g,
                             const BinGrid& grid) {
    if (g.s1.empty()) throw std::invalid_argument("corr1: no directly coupled pairs");
    BinAccumulator acc(grid);
    for (int alpha = w.first; alpha <= w.last(); ++alpha)
        for (const auto& [i, j] : g.s1)
            acc.add(s.detuning(alpha, i), s.components(alpha, i) * s.components(alpha, j));
    return divide_bins(acc.finish(), ef_shape(s, w, grid));
}

struct SecondOrderCorrelation {
    BinnedStatistic c2;
    BinnedStatistic pi_d;
    BinnedStatistic eta;
};

// Second-order correlation C2(eps) over two-step pairs, together with the
// conditioned shape Pi_d and the ratio eta = Pi_d / Pi. Every sample of a
// triple (i, k, j) is binned at the intermediate-state detuning
// eps = E_k^0 - E_alpha.
inline SecondOrderCorrelation corr2(const SpectralData& s, const EnergyWindow& w, const CouplingGraph& g,
                                    const BinGrid& grid) {
    if (g.s2_triples.empty()) throw std::invalid_argument("corr2: no second-order pairs");
    BinAccumulator num(grid);
    BinAccumulator pi_d(grid);
    for (int alpha = w.first; alpha <= w.last(); ++alpha)
        for (const auto& t : g.s2_triples) {
            const double eps = s.detuning(alpha, t.k);
            const double ci = s.components(alpha, t.i);
            num.add(eps, ci * s.components(alpha, t.j));
            pi_d.add(eps, ci * ci);
        }
    const BinnedStatistic pi = ef_shape(s, w, grid);
    SecondOrderCorrelation out;
    out.c2 = divide_bins(num.finish(), pi);
    out.pi_d = pi_d.finish();
    out.eta = divide_bins(out.pi_d, pi);
    return out;
}

struct SignResolvedCorrelation {
    BinnedStatistic c1_plus;
    BinnedStatistic c1_minus;
    BinnedStatistic c1_weighted;
};

// Sign-resolved variants of C1 for perturbations with mixed signs: the
// restrictions to positive and negative V_ij, and the sign-weighted average
// sign(V_ij) C_{alpha i} C_{alpha j}, all normalized by Pi.
inline SignResolvedCorrelation corr1_signed(const SpectralData& s, const EnergyWindow& w,
                                            const SymmetricSparse& v, const CouplingGraph& g,
                                            const BinGrid& grid) {
    if (g.s1.empty()) throw std::invalid_argument("corr1_signed: no directly coupled pairs");
    BinAccumulator plus(grid);
    BinAccumulator minus(grid);
    BinAccumulator weighted(grid);
    for (int alpha = w.first; alpha <= w.last(); ++alpha)
        for (const auto& [i, j] : g.s1) {
            const double vij = coupling_value(v, i, j);
            const double eps = s.detuning(alpha, i);
            const double prod = s.components(alpha, i) * s.components(alpha, j);
            if (vij > 0.0) plus.add(eps, prod);
            else minus.add(eps, prod);
            weighted.add(eps, vij > 0.0 ? prod : -prod);
        }
    const BinnedStatistic pi = ef_shape(s, w, grid);
    SignResolvedCorrelation out;
    out.c1_plus = divide_bins(plus.finish(), pi);
    out.c1_minus = divide_bins(minus.finish(), pi);
    out.c1_weighted = divide_bins(weighted.finish(), pi);
    return out;
}

// Sign correlator: mean of sign(C_{alpha i} C_{alpha j}) sign(V_ij) over
// directly coupled pairs, binned at eps = E_i^0 - E_alpha. No Pi division;
// values lie in [-1, 1].
inline BinnedStatistic corr_sign(const SpectralData& s, const EnergyWindow& w, const SymmetricSparse& v,
                                 const CouplingGraph& g, const BinGrid& grid) {
    if (g.s1.empty()) throw std::invalid_argument("corr_sign: no directly coupled pairs");
    const auto sgn = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
    BinAccumulator acc(grid);
    for (int alpha = w.first; alpha <= w.last(); ++alpha)
        for (const auto& [i, j] : g.s1) {
            const double prod = s.components(alpha, i) * s.components(alpha, j);
            acc.add(s.detuning(alpha, i), sgn(prod) * sgn(coupling_value(v, i, j)));
        }
    return acc.finish();
}

// Null correlator over ordered pairs of any coupling order. Up to sample_cap
// pairs are drawn uniformly without replacement by a fixed-seed generator so
// repeated runs bin the identical pair set; a cap at or above dim*(dim-1)
// enumerates every pair.
inline BinnedStatistic corr_all_pairs(const SpectralData& s, const EnergyWindow& w, const BinGrid& grid,
                                      std::size_t sample_cap) {
    const auto dim = s.dim();
    if (dim < 2) throw std::invalid_argument("corr_all_pairs: need at least two basis states");
    const std::size_t total = dim * (dim - 1);
    std::vector<std::uint64_t> codes(total);
    for (std::size_t c = 0; c < total; ++c) codes[c] = c;
    const std::size_t take = std::min(sample_cap, total);
    if (take < total) {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        partial_shuffle(codes, take, rng);
    }
    BinAccumulator acc(grid);
    for (std::size_t c = 0; c < take; ++c) {
        const auto i = static_cast<Eigen::Index>(codes[c] / (dim - 1));
        const auto r = static_cast<Eigen::Index>(codes[c] % (dim - 1));
        const auto j = r + (r >= i ? 1 : 0);
        for (int alpha = w.first; alpha <= w.last(); ++alpha)
            acc.add(s.detuning(alpha, i), s.components(alpha, i) * s.components(alpha, j));
    }
    return divide_bins(acc.finish(), ef_shape(s, w, grid));
}

// Linear prediction C1(eps) = -eps / (v_bar n_bar) evaluated at bin centers.
inline BinnedStatistic predict_c1(const CouplingStats& stats, const BinGrid& grid) {
    if (!stats.v_bar || *stats.v_bar * stats.n_bar == 0.0)
        throw std::runtime_error("predict_c1: degenerate coupling statistics");
    BinnedStatistic out;
    for (int b = 0; b < grid.n_bins; ++b) {
        out.centers.push_back(grid.center(b));
        out.mean.push_back(-grid.center(b) / (*stats.v_bar * stats.n_bar));
        out.count.push_back(0);
    }
    return out;
}

// Sign-weighted prediction C1~(eps) = -eps / (vabs_bar n_bar).
inline BinnedStatistic predict_c1_weighted(const CouplingStats& stats, const BinGrid& grid) {
    if (!stats.vabs_bar || *stats.vabs_bar * stats.n_bar == 0.0)
        throw std::runtime_error("predict_c1_weighted: degenerate coupling statistics");
    BinnedStatistic out;
    for (int b = 0; b < grid.n_bins; ++b) {
        out.centers.push_back(grid.center(b));
        out.mean.push_back(-grid.center(b) / (*stats.vabs_bar * stats.n_bar));
        out.count.push_back(0);
    }
    return out;
}

// Quadratic prediction C2(eps) = (eps^2 - v2_bar n_bar eta(eps)) /
// (w_bar n_bar (n_bar - 1)), defined on the bins where eta is.
inline BinnedStatistic predict_c2(const CouplingStats& stats, const BinnedStatistic& eta,
                                  const BinGrid& grid) {
    if (stats.n_bar <= 1.0 || !stats.w_bar || *stats.w_bar == 0.0 || !stats.v2_bar)
        throw std::runtime_error("predict_c2: degenerate coupling statistics");
    if (eta.size() != static_cast<std::size_t>(grid.n_bins))
        throw std::invalid_argument("predict_c2: eta computed on a different grid");
    BinnedStatistic out;
    const double denom = *stats.w_bar * stats.n_bar * (stats.n_bar - 1.0);
    for (int b = 0; b < grid.n_bins; ++b) {
        const double eps = grid.center(b);
        out.centers.push_back(eps);
        const auto bu = static_cast<std::size_t>(b);
        out.mean.push_back(eta.defined(bu)
                               ? (eps * eps - *stats.v2_bar * stats.n_bar * eta.mean[bu]) / denom
                               : std::numeric_limits<double>::quiet_NaN());
        out.count.push_back(0);
    }
    return out;
}

}  // namespace eigencorr
