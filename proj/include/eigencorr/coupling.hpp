// coupling.hpp — Connectivity sets and moment statistics of the perturbation

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eigencorr/sparse.hpp"

namespace eigencorr {

// Structural view of V: per-state neighbor lists, the directly coupled
// ordered pairs s1, and the ordered second-order triples s2 reaching states
// two hops away through an intermediate k with no direct coupling.
struct CouplingGraph {
    struct Triple {
        std::int32_t i = 0;
        std::int32_t k = 0;
        std::int32_t j = 0;
    };

    std::vector<std::vector<std::int32_t>> neighbors;
    std::vector<std::pair<std::int32_t, std::int32_t>> s1;
    std::vector<Triple> s2_triples;

    bool adjacent(std::int32_t i, std::int32_t j) const {
        const auto& g = neighbors[static_cast<std::size_t>(i)];
        return std::binary_search(g.begin(), g.end(), j);
    }
};

inline CouplingGraph build_graph(const SymmetricSparse& v) {
    CouplingGraph g;
    g.neighbors.resize(v.dim);
    for (const auto& e : v.entries) {
        g.neighbors[static_cast<std::size_t>(e.i)].push_back(e.j);
        g.neighbors[static_cast<std::size_t>(e.j)].push_back(e.i);
    }
    for (auto& list : g.neighbors) std::sort(list.begin(), list.end());

    g.s1.reserve(2 * v.entries.size());
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(v.dim); ++i)
        for (const auto j : g.neighbors[static_cast<std::size_t>(i)]) g.s1.emplace_back(i, j);

    for (std::int32_t k = 0; k < static_cast<std::int32_t>(v.dim); ++k) {
        const auto& gk = g.neighbors[static_cast<std::size_t>(k)];
        for (const auto i : gk)
            for (const auto j : gk) {
                if (i == j || g.adjacent(i, j)) continue;
                g.s2_triples.push_back({i, k, j});
            }
    }
    return g;
}

// Binary search over the canonical entry ordering; returns 0 for pairs
// outside the sparsity pattern.
inline double coupling_value(const SymmetricSparse& v, std::int32_t a, std::int32_t b) {
    if (a == b) return 0.0;
    const SparseEntry key{std::min(a, b), std::max(a, b), 0.0};
    const auto it = std::lower_bound(v.entries.begin(), v.entries.end(), key,
                                     [](const SparseEntry& x, const SparseEntry& y) {
                                         return x.i < y.i || (x.i == y.i && x.j < y.j);
                                     });
    if (it == v.entries.end() || it->i != key.i || it->j != key.j) return 0.0;
    return it->value;
}

// Ensemble moments of V over the stored couplings. Optional fields are
// absent when their defining set is empty (no positive entries, no negative
// entries, or no second-order triples).
struct CouplingStats {
    double n_bar = 0.0;
    double n_plus = 0.0;
    double n_minus = 0.0;
    std::optional<double> v_bar;
    std::optional<double> v2_bar;
    std::optional<double> vabs_bar;
    std::optional<double> v_plus;
    std::optional<double> v_minus;
    std::optional<double> w_bar;
};

inline CouplingStats compute_stats(const SymmetricSparse& v, const CouplingGraph& g) {
    if (g.neighbors.size() != v.dim)
        throw std::invalid_argument("compute_stats: graph and matrix dimensions differ");
    CouplingStats st;
    const auto dim = static_cast<double>(v.dim);
    if (v.dim == 0) throw std::invalid_argument("compute_stats: empty matrix");

    std::size_t plus = 0;
    double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0, sum_plus = 0.0, sum_minus = 0.0;
    for (const auto& e : v.entries) {
        sum += e.value;
        sum_sq += e.value * e.value;
        sum_abs += std::abs(e.value);
        if (e.value > 0.0) {
            ++plus;
            sum_plus += e.value;
        } else {
            sum_minus += e.value;
        }
    }
    const std::size_t nnz = v.entries.size();
    const std::size_t minus = nnz - plus;
    st.n_bar = 2.0 * static_cast<double>(nnz) / dim;
    st.n_plus = 2.0 * static_cast<double>(plus) / dim;
    st.n_minus = 2.0 * static_cast<double>(minus) / dim;
    if (nnz > 0) {
        st.v_bar = sum / static_cast<double>(nnz);
        st.v2_bar = sum_sq / static_cast<double>(nnz);
        st.vabs_bar = sum_abs / static_cast<double>(nnz);
    }
    if (plus > 0) st.v_plus = sum_plus / static_cast<double>(plus);
    if (minus > 0) st.v_minus = sum_minus / static_cast<double>(minus);

    if (!g.s2_triples.empty()) {
        double sum_w = 0.0;
        for (const auto& t : g.s2_triples) sum_w += coupling_value(v, t.k, t.i) * coupling_value(v, t.k, t.j);
        st.w_bar = sum_w / static_cast<double>(g.s2_triples.size());
    }
    return st;
}

}  // namespace eigencorr
