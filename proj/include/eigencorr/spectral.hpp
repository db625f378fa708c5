// spectral.hpp — Dense symmetric diagonalization and mid-spectrum window selection

#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "eigencorr/sparse.hpp"

namespace eigencorr {

// Full eigendecomposition of H = diag(e0) + V. Row alpha of `components`
// holds the expansion C_{alpha i} of eigenstate alpha over the unperturbed
// basis, with the sign fixed so the largest-magnitude component is positive.
struct SpectralData {
    Eigen::VectorXd energies;
    Eigen::MatrixXd components;
    Eigen::VectorXd e0;

    std::size_t dim() const { return static_cast<std::size_t>(energies.size()); }

    double component(Eigen::Index alpha, Eigen::Index i) const { return components(alpha, i); }
    double detuning(Eigen::Index alpha, Eigen::Index i) const { return e0(i) - energies(alpha); }
};

inline SpectralData diagonalize(const HamiltonianPair& h) {
    if (h.dim() == 0) throw std::invalid_argument("diagonalize: empty Hamiltonian");
    const Eigen::MatrixXd dense = dense_hamiltonian(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed to converge");

    SpectralData out;
    out.energies = solver.eigenvalues();
    out.components = solver.eigenvectors().transpose();
    out.e0 = h.e0;
    const auto n = out.components.rows();
    for (Eigen::Index alpha = 0; alpha < n; ++alpha) {
        Eigen::Index best = 0;
        double best_abs = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(out.components(alpha, i));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (out.components(alpha, best) < 0.0) out.components.row(alpha) = -out.components.row(alpha);
    }
    return out;
}

// Contiguous run of eigenstate indices centered on the middle of the
// spectrum, with the mean level spacing d measured inside the run.
struct EnergyWindow {
    int first = 0;
    int count = 0;
    double d = 0.0;

    int last() const { return first + count - 1; }
    bool contains(int alpha) const { return alpha >= first && alpha < first + count; }
};

inline EnergyWindow select_window(const SpectralData& s, int count) {
    const auto dim = static_cast<int>(s.dim());
    if (count < 2 || count > dim)
        throw std::invalid_argument("select_window: count must lie in [2, dim]");
    EnergyWindow w;
    w.first = dim / 2 - count / 2;
    w.count = count;
    w.d = (s.energies(w.last()) - s.energies(w.first)) / static_cast<double>(count - 1);
    return w;
}

}  // namespace eigencorr
