// spacings.hpp — Nearest-neighbor spacing statistics against GOE and Poisson references

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigencorr/spectral.hpp"

namespace eigencorr {

// Literature value of the mean consecutive-gap ratio for the GOE ensemble.
inline constexpr double kGoeGapRatio = 0.5307;
// Exact Poisson value 2 ln 2 - 1.
inline constexpr double kPoissonGapRatio = 2.0 * std::numbers::ln2 - 1.0;

inline double wigner_surmise(double s) {
    return std::numbers::pi / 2.0 * s * std::exp(-std::numbers::pi * s * s / 4.0);
}

inline double poisson_spacing(double s) { return std::exp(-s); }

struct GapRatioStat {
    double mean_ratio = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_ratios = 0;
    std::size_t n_skipped = 0;
};

// Mean of r = min(s_k, s_{k+1}) / max(s_k, s_{k+1}) over consecutive spacing
// pairs inside [first, first + count). Pairs with both spacings zero have no
// defined ratio and are skipped but counted.
inline GapRatioStat gap_ratios(std::span<const double> energies, int first, int count) {
    if (first < 0 || count < 3 || static_cast<std::size_t>(first + count) > energies.size())
        throw std::invalid_argument("gap_ratios: window must hold at least three levels");
    GapRatioStat out;
    double sum = 0.0;
    for (int k = first; k + 2 < first + count; ++k) {
        const double s0 = energies[k + 1] - energies[k];
        const double s1 = energies[k + 2] - energies[k + 1];
        if (s0 < 0.0 || s1 < 0.0) throw std::invalid_argument("gap_ratios: energies must be nondecreasing");
        const double hi = std::max(s0, s1);
        if (hi == 0.0) {
            ++out.n_skipped;
            continue;
        }
        sum += std::min(s0, s1) / hi;
        ++out.n_ratios;
    }
    if (out.n_ratios > 0) out.mean_ratio = sum / static_cast<double>(out.n_ratios);
    return out;
}

// Unit-mean spacings of the window's levels after unfolding: the staircase
// N(E_k) = k + 1/2 is fitted by a polynomial in a rescaled energy variable,
// and spacings are taken between mapped energies.
inline std::vector<double> unfolded_spacing_samples(std::span<const double> energies, int first, int count,
                                                    int poly_degree = 6) {
    if (first < 0 || count < 10 || static_cast<std::size_t>(first + count) > energies.size())
        throw std::invalid_argument("unfolded_spacings: window must hold at least ten levels");
    if (poly_degree < 1 || poly_degree + 2 > count)
        throw std::invalid_argument("unfolded_spacings: polynomial degree out of range for window");

    const double lo = energies[first];
    const double hi = energies[first + count - 1];
    if (!(hi > lo)) throw std::runtime_error("unfolded_spacings: window has zero energy extent");
    const double mid = (lo + hi) / 2.0;
    const double half = (hi - lo) / 2.0;

    Eigen::MatrixXd vand(count, poly_degree + 1);
    Eigen::VectorXd target(count);
    for (int k = 0; k < count; ++k) {
        const double x = (energies[first + k] - mid) / half;
        double p = 1.0;
        for (int c = 0; c <= poly_degree; ++c) {
            vand(k, c) = p;
            p *= x;
        }
        target(k) = k + 0.5;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vand);
    if (qr.rank() < poly_degree + 1)
        throw std::runtime_error("unfolded_spacings: ill-conditioned staircase fit (rank " +
                                 std::to_string(qr.rank()) + " of " + std::to_string(poly_degree + 1) + ")");
    const Eigen::VectorXd coeff = qr.solve(target);

    std::vector<double> mapped(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double x = (energies[first + k] - mid) / half;
        double value = 0.0;
        double p = 1.0;
        for (int c = 0; c <= poly_degree; ++c) {
            value += coeff(c) * p;
            p *= x;
        }
        mapped[static_cast<std::size_t>(k)] = value;
    }

    std::vector<double> spacings(mapped.size() - 1);
    double mean = 0.0;
    for (std::size_t k = 0; k + 1 < mapped.size(); ++k) {
        spacings[k] = mapped[k + 1] - mapped[k];
        if (spacings[k] < 0.0)
            throw std::runtime_error("unfolded_spacings: non-monotone unfolding map; reduce poly_degree");
        mean += spacings[k];
    }
    mean /= static_cast<double>(spacings.size());
    if (!(mean > 0.0)) throw std::runtime_error("unfolded_spacings: degenerate window");
    for (auto& s : spacings) s /= mean;
    return spacings;
}

struct SpacingHistogram {
    std::vector<double> s_centers;
    std::vector<double> density;
    std::vector<double> wigner;
    std::vector<double> poisson;
    double mean_spacing = 0.0;
};

// Normalized density of unit-mean spacings with the two reference curves
// sampled at bin centers. The upper edge stretches past 4 when needed so the
// density always integrates to one.
inline SpacingHistogram histogram_spacings(std::span<const double> spacings, int n_bins = 40) {
    if (spacings.empty()) throw std::invalid_argument("histogram_spacings: no spacings");
    if (n_bins < 1) throw std::invalid_argument("histogram_spacings: need at least one bin");
    double s_hi = 4.0;
    double mean = 0.0;
    for (const double s : spacings) {
        s_hi = std::max(s_hi, s);
        mean += s;
    }
    mean /= static_cast<double>(spacings.size());
    const double width = s_hi / n_bins;

    SpacingHistogram out;
    out.mean_spacing = mean;
    out.s_centers.resize(static_cast<std::size_t>(n_bins));
    out.density.assign(static_cast<std::size_t>(n_bins), 0.0);
    out.wigner.resize(static_cast<std::size_t>(n_bins));
    out.poisson.resize(static_cast<std::size_t>(n_bins));
    for (const double s : spacings) {
        const auto b = std::min<std::size_t>(static_cast<std::size_t>(s / width), n_bins - 1);
        out.density[b] += 1.0;
    }
    for (std::size_t b = 0; b < static_cast<std::size_t>(n_bins); ++b) {
        out.s_centers[b] = (b + 0.5) * width;
        out.density[b] /= static_cast<double>(spacings.size()) * width;
        out.wigner[b] = wigner_surmise(out.s_centers[b]);
        out.poisson[b] = poisson_spacing(out.s_centers[b]);
    }
    return out;
}

struct SpacingReport {
    GapRatioStat ratio;
    SpacingHistogram histogram;
    double goe_ratio_ref = kGoeGapRatio;
    double poisson_ratio_ref = kPoissonGapRatio;
};

inline SpacingReport spacing_report(std::span<const double> energies, int first, int count,
                                    int poly_degree = 6) {
    SpacingReport out;
    out.ratio = gap_ratios(energies, first, count);
    out.histogram = histogram_spacings(unfolded_spacing_samples(energies, first, count, poly_degree));
    return out;
}

// Pooled report over independent symmetry sectors: each sector contributes
// the middle `middle_fraction` of its own spectrum, ratios are averaged with
// their sample counts as weights, and unfolded spacings are merged before
// histogramming.
inline SpacingReport sector_spacing_report(const std::vector<std::vector<double>>& sectors,
                                           double middle_fraction = 0.5, int poly_degree = 6) {
    if (sectors.empty()) throw std::invalid_argument("sector_spacing_report: no sectors");
    if (!(middle_fraction > 0.0 && middle_fraction <= 1.0))
        throw std::invalid_argument("sector_spacing_report: fraction must lie in (0, 1]");
    SpacingReport out;
    double ratio_sum = 0.0;
    std::vector<double> pooled;
    for (const auto& energies : sectors) {
        const auto n = static_cast<int>(energies.size());
        const int count = std::max(static_cast<int>(std::llround(n * middle_fraction)), std::min(n, 10));
        const int first = n / 2 - count / 2;
        const auto ratio = gap_ratios(energies, first, count);
        if (ratio.n_ratios > 0) ratio_sum += ratio.mean_ratio * static_cast<double>(ratio.n_ratios);
        out.ratio.n_ratios += ratio.n_ratios;
        out.ratio.n_skipped += ratio.n_skipped;
        const auto samples = unfolded_spacing_samples(energies, first, count, poly_degree);
        pooled.insert(pooled.end(), samples.begin(), samples.end());
    }
    if (out.ratio.n_ratios > 0) out.ratio.mean_ratio = ratio_sum / static_cast<double>(out.ratio.n_ratios);
    out.histogram = histogram_spacings(pooled);
    return out;
}

// Assigns each eigenstate to the sector carrying most of its weight. With a
// sector-preserving coupling the assignment is exact up to degeneracies.
inline std::vector<int> eigenstate_sectors(const SpectralData& s, std::span<const int> basis_sector,
                                           int n_sectors) {
    if (basis_sector.size() != s.dim())
        throw std::invalid_argument("eigenstate_sectors: label count does not match dimension");
    if (n_sectors < 1) throw std::invalid_argument("eigenstate_sectors: need at least one sector");
    std::vector<int> out(s.dim());
    std::vector<double> weight(static_cast<std::size_t>(n_sectors));
    const auto dim = static_cast<Eigen::Index>(s.dim());
    for (Eigen::Index alpha = 0; alpha < dim; ++alpha) {
        std::fill(weight.begin(), weight.end(), 0.0);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double c = s.components(alpha, i);
            weight[static_cast<std::size_t>(basis_sector[static_cast<std::size_t>(i)])] += c * c;
        }
        int best = 0;
        for (int q = 1; q < n_sectors; ++q)
            if (weight[static_cast<std::size_t>(q)] > weight[static_cast<std::size_t>(best)]) best = q;
        out[static_cast<std::size_t>(alpha)] = best;
    }
    return out;
}

}  // namespace eigencorr
