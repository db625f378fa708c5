// models.hpp — Unperturbed diagonals and sparse perturbations for the four model families

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "eigencorr/basis.hpp"
#include "eigencorr/sparse.hpp"

namespace eigencorr {

// Three-level Lipkin model in the bosonic realization: Omega particles shared
// by modes 0, 1, 2, with four two-particle scattering channels.
struct LmgSpec {
    int omega = 40;
    double eps1 = 1.10;
    double eps2 = 1.61;
    double mu1 = 0.031;
    double mu2 = 0.035;
    double mu3 = 0.038;
    double mu4 = 0.033;
};

// Single bosonic mode coupled to a pseudospin j = n_atoms/2, with the photon
// ladder truncated at n_max quanta.
struct DickeSpec {
    int n_atoms = 40;
    double omega0 = 1.0;
    double omega = 1.0;
    double lambda = 1.0;
    int n_max = 40;
};

// Open XXZ chain with magnetic defects on sites 1 and 4, restricted to one
// magnetization sector. The flip-flop exchange is the perturbation.
struct DefectXxzSpec {
    int n_sites = 12;
    double j_flip = 1.4;
    double mu_zz = 0.5;
    double mu1 = 1.11;
    double mu4 = 1.11;
    double sz_sector = -2.0;
};

enum class Boundary { open, periodic };

// Ising chain with defects on sites 1 and 4; the transverse field on sites
// 1..N-1 is the perturbation. `boundary` applies to the zz sum only.
struct DefectIsingSpec {
    int n_sites = 10;
    double jz = 1.0;
    double lambda_x = 0.45;
    double mu1 = 1.11;
    double mu4 = 1.11;
    Boundary boundary = Boundary::periodic;
};

using ModelSpec = std::variant<LmgSpec, DickeSpec, DefectXxzSpec, DefectIsingSpec>;

struct Model {
    BasisCatalog basis;
    HamiltonianPair hamiltonian;
};

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("model spec: ") + what + " must be finite");
}

inline double spin_z(std::uint32_t mask, int site) {
    return (mask >> site & 1u) ? 1.0 : -1.0;
}

}  // namespace detail

inline Model build_lmg(const LmgSpec& spec) {
    if (spec.omega < 1) throw std::invalid_argument("model spec: omega must be at least 1");
    detail::require_finite(spec.eps1, "eps1");
    detail::require_finite(spec.eps2, "eps2");
    detail::require_finite(spec.mu1, "mu1");
    detail::require_finite(spec.mu2, "mu2");
    detail::require_finite(spec.mu3, "mu3");
    detail::require_finite(spec.mu4, "mu4");

    const int omega = spec.omega;
    const auto dim = static_cast<std::size_t>((omega + 1) * (omega + 2) / 2);
    // Lexicographic position of (n0, n1) with n2 implied by the constraint.
    const auto index_of = [omega](std::int64_t n0, std::int64_t n1) {
        return n0 * (omega + 1) - n0 * (n0 - 1) / 2 + n1;
    };

    Model model;
    model.basis.dim = dim;
    model.basis.fields = {"n0", "n1", "n2"};
    model.basis.labels.reserve(dim);
    Eigen::VectorXd e0(static_cast<Eigen::Index>(dim));
    for (std::int64_t n0 = 0; n0 <= omega; ++n0) {
        for (std::int64_t n1 = 0; n1 + n0 <= omega; ++n1) {
            const std::int64_t n2 = omega - n0 - n1;
            model.basis.labels.push_back({n0, n1, n2});
            e0(index_of(n0, n1)) = spec.eps1 * static_cast<double>(n1) + spec.eps2 * static_cast<double>(n2);
        }
    }

    SparseBuilder builder(dim);
    for (std::int64_t n0 = 0; n0 <= omega; ++n0) {
        for (std::int64_t n1 = 0; n1 + n0 <= omega; ++n1) {
            const std::int64_t n2 = omega - n0 - n1;
            const auto src = index_of(n0, n1);
            const auto n0d = static_cast<double>(n0);
            const auto n1d = static_cast<double>(n1);
            const auto n2d = static_cast<double>(n2);
            // Each channel is applied in its mode-0-lowering direction only;
            // the conjugate direction is implied by the symmetric storage.
            const double amp1 = spec.mu1 * std::sqrt(n0d * (n1d + 1.0)) * std::sqrt((n0d - 1.0) * (n1d + 2.0));
            if (n0 >= 2 && amp1 != 0.0) builder.add(src, index_of(n0 - 2, n1 + 2), amp1);
            const double amp2 = spec.mu2 * std::sqrt(n0d * (n2d + 1.0)) * std::sqrt((n0d - 1.0) * (n2d + 2.0));
            if (n0 >= 2 && amp2 != 0.0) builder.add(src, index_of(n0 - 2, n1), amp2);
            const double amp3 = spec.mu3 * std::sqrt(n0d * (n2d + 1.0)) * std::sqrt(n1d * (n2d + 2.0));
            if (n0 >= 1 && n1 >= 1 && amp3 != 0.0) builder.add(src, index_of(n0 - 1, n1 - 1), amp3);
            const double amp4 = spec.mu4 * std::sqrt(n0d * (n1d + 1.0)) * std::sqrt(n2d * (n1d + 2.0));
            if (n0 >= 1 && n2 >= 1 && amp4 != 0.0) builder.add(src, index_of(n0 - 1, n1 + 2), amp4);
        }
    }
    model.hamiltonian.e0 = std::move(e0);
    model.hamiltonian.v = builder.finish();
    return model;
}

inline Model build_dicke(const DickeSpec& spec) {
    if (spec.n_atoms < 1) throw std::invalid_argument("model spec: n_atoms must be at least 1");
    if (spec.n_max < 1) throw std::invalid_argument("model spec: n_max must be at least 1");
    detail::require_finite(spec.omega0, "omega0");
    detail::require_finite(spec.omega, "omega");
    detail::require_finite(spec.lambda, "lambda");

    const int n_atoms = spec.n_atoms;
    const int n_max = spec.n_max;
    const int m_states = n_atoms + 1;
    const auto dim = static_cast<std::size_t>((n_max + 1) * m_states);
    const double j = n_atoms / 2.0;
    const double jjp1 = j * (j + 1.0);
    const double g = spec.lambda / std::sqrt(static_cast<double>(n_atoms));
    const auto index_of = [&](std::int64_t n, std::int64_t twice_m) {
        return n * m_states + (twice_m + n_atoms) / 2;
    };

    Model model;
    model.basis.dim = dim;
    model.basis.fields = {"n", "twice_m", ""};
    model.basis.labels.reserve(dim);
    Eigen::VectorXd e0(static_cast<Eigen::Index>(dim));
    SparseBuilder builder(dim);
    for (std::int64_t n = 0; n <= n_max; ++n) {
        for (std::int64_t twice_m = -n_atoms; twice_m <= n_atoms; twice_m += 2) {
            model.basis.labels.push_back({n, twice_m, 0});
            const double m = twice_m / 2.0;
            const auto src = index_of(n, twice_m);
            e0(src) = spec.omega * static_cast<double>(n) + spec.omega0 * m;
            if (n + 1 > n_max) continue;
            // Photon-raising halves of (a^dag + a)(J+ + J-); the photon-
            // lowering halves follow from symmetry.
            const double up = jjp1 - m * (m + 1.0);
            if (up > 0.0) builder.add(src, index_of(n + 1, twice_m + 2), g * std::sqrt(n + 1.0) * std::sqrt(up));
            const double down = jjp1 - m * (m - 1.0);
            if (down > 0.0) builder.add(src, index_of(n + 1, twice_m - 2), g * std::sqrt(n + 1.0) * std::sqrt(down));
        }
    }
    model.hamiltonian.e0 = std::move(e0);
    model.hamiltonian.v = builder.finish();
    return model;
}

// Parity (n + m + j) mod 2 of each Dicke basis state; the coupling conserves
// it, so eigenstates split into two independent sectors.
inline std::vector<int> dicke_basis_parity(const BasisCatalog& basis, int n_atoms) {
    std::vector<int> parity(basis.dim);
    for (std::size_t k = 0; k < basis.dim; ++k) {
        const std::int64_t n = basis.labels[k][0];
        const std::int64_t m_plus_j = (basis.labels[k][1] + n_atoms) / 2;
        parity[k] = static_cast<int>((n + m_plus_j) & 1);
    }
    return parity;
}

namespace detail {

inline int sector_fill(int n_sites, double sz_sector) {
    const double n_up_real = n_sites / 2.0 + sz_sector;
    const auto n_up = static_cast<int>(std::llround(n_up_real));
    if (std::abs(n_up_real - n_up) > 1e-9 || n_up < 0 || n_up > n_sites)
        throw std::invalid_argument("model spec: empty symmetry sector for the requested sz_sector");
    return n_up;
}

}  // namespace detail

inline Model build_defect_xxz(const DefectXxzSpec& spec) {
    if (spec.n_sites < 4 || spec.n_sites > 24)
        throw std::invalid_argument("model spec: n_sites must lie in [4, 24] so the site-4 defect exists");
    detail::require_finite(spec.j_flip, "j_flip");
    detail::require_finite(spec.mu_zz, "mu_zz");
    detail::require_finite(spec.mu1, "mu1");
    detail::require_finite(spec.mu4, "mu4");
    const int n_sites = spec.n_sites;
    const int n_up = detail::sector_fill(n_sites, spec.sz_sector);

    Model model;
    model.basis.fields = {"spin_bits", "", ""};
    std::vector<std::uint32_t> masks;
    std::vector<std::int32_t> index_of(std::size_t{1} << n_sites, -1);
    for (std::uint32_t mask = 0; mask < (1u << n_sites); ++mask) {
        if (std::popcount(mask) != n_up) continue;
        index_of[mask] = static_cast<std::int32_t>(masks.size());
        masks.push_back(mask);
        model.basis.labels.push_back({mask, 0, 0});
    }
    model.basis.dim = masks.size();

    Eigen::VectorXd e0(static_cast<Eigen::Index>(masks.size()));
    SparseBuilder builder(masks.size());
    for (std::size_t idx = 0; idx < masks.size(); ++idx) {
        const std::uint32_t mask = masks[idx];
        double diag = spec.mu1 * detail::spin_z(mask, 0) + spec.mu4 * detail::spin_z(mask, 3);
        for (int site = 0; site + 1 < n_sites; ++site) {
            diag += spec.mu_zz * detail::spin_z(mask, site) * detail::spin_z(mask, site + 1);
            if (((mask >> site) & 3u) == 1u || ((mask >> site) & 3u) == 2u) {
                const std::uint32_t partner = mask ^ (3u << site);
                if (mask < partner) builder.add(idx, index_of[partner], 2.0 * spec.j_flip);
            }
        }
        e0(static_cast<Eigen::Index>(idx)) = diag;
    }
    model.hamiltonian.e0 = std::move(e0);
    model.hamiltonian.v = builder.finish();
    return model;
}

inline Model build_defect_ising(const DefectIsingSpec& spec) {
    if (spec.n_sites < 4 || spec.n_sites > 20)
        throw std::invalid_argument("model spec: n_sites must lie in [4, 20] so the site-4 defect exists");
    detail::require_finite(spec.jz, "jz");
    detail::require_finite(spec.lambda_x, "lambda_x");
    detail::require_finite(spec.mu1, "mu1");
    detail::require_finite(spec.mu4, "mu4");
    const int n_sites = spec.n_sites;
    const auto dim = std::size_t{1} << n_sites;

    Model model;
    model.basis.dim = dim;
    model.basis.fields = {"spin_bits", "", ""};
    model.basis.labels.reserve(dim);
    Eigen::VectorXd e0(static_cast<Eigen::Index>(dim));
    SparseBuilder builder(dim);
    for (std::uint32_t mask = 0; mask < dim; ++mask) {
        model.basis.labels.push_back({mask, 0, 0});
        double diag = spec.mu1 * detail::spin_z(mask, 0) + spec.mu4 * detail::spin_z(mask, 3);
        for (int site = 0; site + 1 < n_sites; ++site)
            diag += spec.jz * detail::spin_z(mask, site) * detail::spin_z(mask, site + 1);
        if (spec.boundary == Boundary::periodic)
            diag += spec.jz * detail::spin_z(mask, n_sites - 1) * detail::spin_z(mask, 0);
        e0(static_cast<Eigen::Index>(mask)) = diag;
        // The last site carries no transverse field, so every state couples
        // to exactly n_sites - 1 partners.
        for (int site = 0; site + 1 < n_sites; ++site)
            if (!(mask >> site & 1u)) builder.add(mask, mask | (1u << site), spec.lambda_x);
    }
    model.hamiltonian.e0 = std::move(e0);
    model.hamiltonian.v = builder.finish();
    return model;
}

inline Model build_model(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> Model {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LmgSpec>) return build_lmg(s);
            else if constexpr (std::is_same_v<T, DickeSpec>) return build_dicke(s);
            else if constexpr (std::is_same_v<T, DefectXxzSpec>) return build_defect_xxz(s);
            else return build_defect_ising(s);
        },
        spec);
}

inline std::string model_name(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LmgSpec>) return "lmg";
            else if constexpr (std::is_same_v<T, DickeSpec>) return "dicke";
            else if constexpr (std::is_same_v<T, DefectXxzSpec>) return "defect_xxz";
            else return "defect_ising";
        },
        spec);
}

}  // namespace eigencorr
