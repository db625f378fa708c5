// binning.hpp — Uniform detuning grids and per-bin averages

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace eigencorr {

// Uniform grid of n_bins bins covering [eps_min, eps_max]. Values outside the
// range are dropped by the accumulator; the right edge belongs to the last bin.
struct BinGrid {
    double eps_min = 0.0;
    double eps_max = 0.0;
    int n_bins = 1;

    double width() const { return (eps_max - eps_min) / n_bins; }
    double center(int b) const { return eps_min + (b + 0.5) * width(); }

    std::optional<int> bin_index(double eps) const {
        if (!(eps >= eps_min && eps <= eps_max)) return std::nullopt;
        const int b = static_cast<int>((eps - eps_min) / width());
        return std::min(b, n_bins - 1);
    }
};

inline void validate(const BinGrid& grid) {
    if (!(grid.eps_min < grid.eps_max) || grid.n_bins < 1)
        throw std::invalid_argument("bin grid: require eps_min < eps_max and at least one bin");
}

// Per-bin sample mean keyed by bin center. `count` is the number of samples
// that landed in each bin; bins with no samples, or whose value is undefined
// for the statistic at hand, carry NaN.
struct BinnedStatistic {
    std::vector<double> centers;
    std::vector<double> mean;
    std::vector<std::size_t> count;

    std::size_t size() const { return centers.size(); }
    bool defined(std::size_t b) const { return !std::isnan(mean[b]); }
};

class BinAccumulator {
public:
    explicit BinAccumulator(const BinGrid& grid) : grid_(grid) {
        validate(grid);
        sum_.assign(static_cast<std::size_t>(grid.n_bins), 0.0);
        n_.assign(static_cast<std::size_t>(grid.n_bins), 0);
    }

    void add(double eps, double value) {
        const auto b = grid_.bin_index(eps);
        if (!b) return;
        sum_[static_cast<std::size_t>(*b)] += value;
        ++n_[static_cast<std::size_t>(*b)];
    }

    BinnedStatistic finish() const {
        BinnedStatistic out;
        const auto nb = static_cast<std::size_t>(grid_.n_bins);
        out.centers.resize(nb);
        out.mean.resize(nb);
        out.count = n_;
        for (std::size_t b = 0; b < nb; ++b) {
            out.centers[b] = grid_.center(static_cast<int>(b));
            out.mean[b] = n_[b] > 0 ? sum_[b] / static_cast<double>(n_[b])
                                    : std::numeric_limits<double>::quiet_NaN();
        }
        return out;
    }

private:
    BinGrid grid_;
    std::vector<double> sum_;
    std::vector<std::size_t> n_;
};

// Bin-wise quotient num/den, defined only where both inputs are defined and
// the denominator is strictly positive. Counts are taken from the numerator.
inline BinnedStatistic divide_bins(const BinnedStatistic& num, const BinnedStatistic& den) {
    if (num.size() != den.size())
        throw std::invalid_argument("divide_bins: mismatched grids");
    BinnedStatistic out = num;
    for (std::size_t b = 0; b < out.size(); ++b) {
        if (num.defined(b) && den.defined(b) && den.mean[b] > 0.0)
            out.mean[b] = num.mean[b] / den.mean[b];
        else
            out.mean[b] = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

// Indices of bins where `pi` is defined and at least rel_threshold of its
// peak, the region where the normalization is statistically trustworthy.
inline std::vector<std::size_t> central_bins(const BinnedStatistic& pi, double rel_threshold = 1e-2) {
    double peak = 0.0;
    for (std::size_t b = 0; b < pi.size(); ++b)
        if (pi.defined(b)) peak = std::max(peak, pi.mean[b]);
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < pi.size(); ++b)
        if (pi.defined(b) && pi.mean[b] >= rel_threshold * peak) out.push_back(b);
    return out;
}

}  // namespace eigencorr
