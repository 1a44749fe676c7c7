// Copyright (c) 2026 The dampopt developers
// SPDX-License-Identifier: Apache-2.0

#ifndef DAMPOPT_KERNELS_HPP
#define DAMPOPT_KERNELS_HPP

#include <utility>

#include <Eigen/Core>

#include "dampopt/types.hpp"

namespace dampopt::kernels
{

/// Full spectrum of a real square matrix with right (and optionally left)
/// eigenvectors. Left vectors are the rows of V^{-1} transposed, so
/// w_i^T v_i = 1 holds by construction.
struct EigenPairs
{
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right;
    Eigen::MatrixXcd left; // empty unless requested
    bool ill_conditioned = false;
};

/// Real Schur form A = U T U^T with the eigenvalues read off the
/// quasi-triangular T.
struct SchurForm
{
    Eigen::MatrixXd T;
    Eigen::MatrixXd U;
    Eigen::VectorXcd eigenvalues;
};

/// Symmetric eigendecomposition A = U diag(w) U^T, eigenvalues ascending.
/// Throws ValidationError if A deviates from symmetry by more than
/// 1e-12 * ||A||_F.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> sym_eig(const Eigen::Ref<const Eigen::MatrixXd>& A);

/// Dense nonsymmetric eigendecomposition. Intended for reduced dimensions
/// (up to a few hundred). `ill_conditioned` flags a nearly defective
/// eigenvector basis; results are still returned.
EigenPairs gen_eig(const Eigen::Ref<const Eigen::MatrixXd>& A, bool want_left = false);

/// Orthonormal basis for the numerical range of `cols`: SVD-based, keeping
/// singular directions with sigma_i > tol * sigma_max. A zero matrix yields
/// zero columns.
Eigen::MatrixXd orth(const Eigen::Ref<const Eigen::MatrixXd>& cols, double tol = 1e-10);

SchurForm real_schur(const Eigen::Ref<const Eigen::MatrixXd>& A);

/// All eigenvalue real parts below -1e-12 * ||A||_F. Borderline spectra are
/// classified unstable.
bool is_hurwitz(const SchurForm& schur, double norm_A);

/// Solve A^T X + X A = -Q for symmetric Q via Bartels-Stewart on the real
/// Schur form. Throws StabilityError if A is not Hurwitz.
Eigen::MatrixXd lyap_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                           const Eigen::Ref<const Eigen::MatrixXd>& Q);

/// Bartels-Stewart backsolve given a precomputed Schur form of A:
/// returns Y with T^T Y + Y T = -U^T Q U, so X = U Y U^T.
/// Callers that only need trace forms can stay in the Schur basis.
Eigen::MatrixXd lyap_solve_schur_basis(const SchurForm& schur,
                                       const Eigen::Ref<const Eigen::MatrixXd>& Q_schur);

} // namespace dampopt::kernels

#endif // DAMPOPT_KERNELS_HPP
