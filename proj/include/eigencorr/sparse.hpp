// sparse.hpp — Symmetric sparse storage for off-diagonal perturbations

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "eigencorr/random.hpp"

namespace eigencorr {

// One stored matrix element V_ij = V_ji with i < j. Diagonals are carried by
// the unperturbed energies, never here.
struct SparseEntry {
    std::int32_t i = 0;
    std::int32_t j = 0;
    double value = 0.0;
};

// Upper-triangle coordinate storage of a real symmetric matrix with zero
// diagonal. Entries are sorted by (i, j), hold only nonzero values, and list
// each unordered pair exactly once.
struct SymmetricSparse {
    std::size_t dim = 0;
    std::vector<SparseEntry> entries;

    std::size_t nnz_upper() const { return entries.size(); }
};

inline void validate(const SymmetricSparse& m) {
    const auto n = static_cast<std::int32_t>(m.dim);
    const SparseEntry* prev = nullptr;
    for (const auto& e : m.entries) {
        if (e.i < 0 || e.j <= e.i || e.j >= n)
            throw std::invalid_argument("symmetric sparse: index out of upper triangle");
        if (e.value == 0.0 || !std::isfinite(e.value))
            throw std::invalid_argument("symmetric sparse: entry value must be finite and nonzero");
        if (prev && !(prev->i < e.i || (prev->i == e.i && prev->j < e.j)))
            throw std::invalid_argument("symmetric sparse: entries not sorted by (i, j)");
        prev = &e;
    }
}

// Accumulates raw (i, j, value) contributions in any order, then emits
// canonical storage: indices folded into the upper triangle, duplicates
// summed, entries sorted, and magnitudes below `drop_rel * max|value|`
// removed so roundoff dust never creates phantom couplings.
class SparseBuilder {
public:
    explicit SparseBuilder(std::size_t dim, double drop_rel = 1e-14)
        : dim_(dim), drop_rel_(drop_rel) {
        if (dim == 0) throw std::invalid_argument("sparse builder: dimension must be positive");
    }

    void add(std::int64_t i, std::int64_t j, double value) {
        if (i < 0 || j < 0 || i >= static_cast<std::int64_t>(dim_) || j >= static_cast<std::int64_t>(dim_))
            throw std::invalid_argument("sparse builder: index out of range");
        if (i == j) throw std::invalid_argument("sparse builder: diagonal contribution not allowed");
        if (!std::isfinite(value)) throw std::invalid_argument("sparse builder: value must be finite");
        if (value == 0.0) return;
        auto a = static_cast<std::int32_t>(std::min(i, j));
        auto b = static_cast<std::int32_t>(std::max(i, j));
        raw_.push_back({a, b, value});
    }

    SymmetricSparse finish() {
        std::sort(raw_.begin(), raw_.end(), [](const SparseEntry& x, const SparseEntry& y) {
            return x.i < y.i || (x.i == y.i && x.j < y.j);
        });
        SymmetricSparse out;
        out.dim = dim_;
        for (std::size_t k = 0; k < raw_.size();) {
            SparseEntry merged = raw_[k];
            for (++k; k < raw_.size() && raw_[k].i == merged.i && raw_[k].j == merged.j; ++k)
                merged.value += raw_[k].value;
            if (merged.value != 0.0) out.entries.push_back(merged);
        }
        double max_abs = 0.0;
        for (const auto& e : out.entries) max_abs = std::max(max_abs, std::abs(e.value));
        const double cutoff = drop_rel_ * max_abs;
        std::erase_if(out.entries, [cutoff](const SparseEntry& e) { return std::abs(e.value) < cutoff; });
        raw_.clear();
        return out;
    }

private:
    std::size_t dim_ = 0;
    double drop_rel_ = 0.0;
    std::vector<SparseEntry> raw_;
};

inline Eigen::MatrixXd to_dense(const SymmetricSparse& m) {
    const auto n = static_cast<Eigen::Index>(m.dim);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : m.entries) {
        out(e.i, e.j) = e.value;
        out(e.j, e.i) = e.value;
    }
    return out;
}

// Flips the sign of exactly round(fraction * nnz_upper) distinct stored
// entries, chosen uniformly by the seeded generator. Magnitudes, sparsity
// pattern, and entry order are untouched.
inline SymmetricSparse randomize_signs(const SymmetricSparse& v, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("randomize_signs: fraction must lie in [0, 1]");
    SymmetricSparse out = v;
    const auto nnz = out.entries.size();
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(nnz)));
    if (k == 0) return out;
    std::vector<std::size_t> order(nnz);
    for (std::size_t t = 0; t < nnz; ++t) order[t] = t;
    std::mt19937_64 rng(seed);
    partial_shuffle(order, k, rng);
    for (std::size_t t = 0; t < k; ++t) out.entries[order[t]].value = -out.entries[order[t]].value;
    return out;
}

// Unperturbed diagonal plus symmetric off-diagonal perturbation, sharing one
// basis ordering.
struct HamiltonianPair {
    Eigen::VectorXd e0;
    SymmetricSparse v;

    std::size_t dim() const { return static_cast<std::size_t>(e0.size()); }
};

inline Eigen::MatrixXd dense_hamiltonian(const HamiltonianPair& h) {
    if (h.v.dim != h.dim())
        throw std::invalid_argument("hamiltonian pair: diagonal and perturbation dimensions differ");
    Eigen::MatrixXd out = to_dense(h.v);
    out.diagonal() = h.e0;
    return out;
}

}  // namespace eigencorr
