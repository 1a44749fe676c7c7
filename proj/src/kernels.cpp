// Copyright (c) 2026 The dampopt developers
// SPDX-License-Identifier: Apache-2.0

#include "dampopt/kernels.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#ifdef DAMPOPT_USE_LAPACKE
// Eigen's native RealSchur is an order of magnitude slower than dgees at the
// dimensions the full-order oracle reaches, so the Schur/Sylvester pair is
// delegated to LAPACK here. Everything else stays on Eigen.
#include <lapacke.h>
#endif

namespace dampopt::kernels
{

namespace
{

constexpr double kStabilityTol = 1e-12;

Eigen::VectorXcd eigenvalues_of_quasi_triangular(const Eigen::MatrixXd& T)
{
    const Eigen::Index n = T.rows();
    Eigen::VectorXcd ev(n);
    Eigen::Index i = 0;
    while (i < n)
    {
        if (i + 1 < n && T(i + 1, i) != 0.0)
        {
            const double a = T(i, i), b = T(i, i + 1);
            const double c = T(i + 1, i), d = T(i + 1, i + 1);
            const double re = 0.5 * (a + d);
            const double disc = 0.25 * (a - d) * (a - d) + b * c;
            const double im = std::sqrt(std::max(0.0, -disc));
            ev(i) = Complex(re, im);
            ev(i + 1) = Complex(re, -im);
            i += 2;
        }
        else
        {
            ev(i) = Complex(T(i, i), 0.0);
            i += 1;
        }
    }
    return ev;
}

#ifndef DAMPOPT_USE_LAPACKE
// Block substitution for T^T Y + Y T = C with T quasi-upper-triangular.
// Overwrites C with Y.
void quasi_triangular_lyap(const Eigen::MatrixXd& T, Eigen::MatrixXd& C)
{
    const Eigen::Index n = T.rows();
    std::vector<Eigen::Index> starts;
    for (Eigen::Index i = 0; i < n;)
    {
        starts.push_back(i);
        i += (i + 1 < n && T(i + 1, i) != 0.0) ? 2 : 1;
    }
    const auto width = [&](std::size_t b) {
        const Eigen::Index s = starts[b];
        return (b + 1 < starts.size() ? starts[b + 1] : n) - s;
    };

    for (std::size_t bj = 0; bj < starts.size(); ++bj)
    {
        const Eigen::Index j0 = starts[bj], nj = width(bj);
        for (std::size_t bi = 0; bi < starts.size(); ++bi)
        {
            const Eigen::Index i0 = starts[bi], ni = width(bi);
            // Solve T_II^T Z + Z T_JJ = C(I,J) via the <=4x4 Kronecker system.
            Eigen::MatrixXd S = Eigen::MatrixXd::Zero(ni * nj, ni * nj);
            for (Eigen::Index q = 0; q < nj; ++q)
                S.block(q * ni, q * ni, ni, ni) = T.block(i0, i0, ni, ni).transpose();
            for (Eigen::Index q = 0; q < nj; ++q)
                for (Eigen::Index r = 0; r < nj; ++r)
                    S.block(q * ni, r * ni, ni, ni).diagonal().array() += T(j0 + r, j0 + q);
            Eigen::VectorXd rhs(ni * nj);
            for (Eigen::Index q = 0; q < nj; ++q)
                rhs.segment(q * ni, ni) = C.block(i0, j0 + q, ni, 1);
            Eigen::VectorXd z = S.partialPivLu().solve(rhs);
            for (Eigen::Index q = 0; q < nj; ++q)
                C.block(i0, j0 + q, ni, 1) = z.segment(q * ni, ni);
            // Push the T^T coupling down the remaining row blocks.
            if (i0 + ni < n)
                C.block(i0 + ni, j0, n - i0 - ni, nj).noalias() -=
                    T.block(i0, i0 + ni, ni, n - i0 - ni).transpose() * C.block(i0, j0, ni, nj);
        }
        // Push the Y T coupling into the remaining columns.
        if (j0 + nj < n)
            C.rightCols(n - j0 - nj).noalias() -= C.middleCols(j0, nj) * T.block(j0, j0 + nj, nj, n - j0 - nj);
    }
}
#endif

} // namespace

std::pair<Eigen::VectorXd, Eigen::MatrixXd> sym_eig(const Eigen::Ref<const Eigen::MatrixXd>& A)
{
    if (A.rows() != A.cols())
        throw ValidationError("sym_eig: matrix must be square");
    const double asym = (A - A.transpose()).norm();
    if (asym > 1e-12 * std::max(A.norm(), 1e-300))
        throw ValidationError("sym_eig: input is not symmetric to working precision");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
    if (es.info() != Eigen::Success)
        throw FactorizationError("sym_eig: eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

EigenPairs gen_eig(const Eigen::Ref<const Eigen::MatrixXd>& A, bool want_left)
{
    if (A.rows() != A.cols())
        throw ValidationError("gen_eig: matrix must be square");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, true);
    if (es.info() != Eigen::Success)
        throw FactorizationError("gen_eig: QR iteration failed to converge");

    EigenPairs out;
    out.values = es.eigenvalues();
    out.right = es.eigenvectors();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.right);
    const Eigen::VectorXcd d = lu.matrixLU().diagonal();
    const double dmax = d.cwiseAbs().maxCoeff();
    const double dmin = d.cwiseAbs().minCoeff();
    out.ill_conditioned = !(dmin > 1e-12 * dmax);
    if (want_left)
    {
        // Rows of V^{-1} are left eigenvectors normalized to w^T v = 1.
        out.left = lu.inverse().transpose();
    }
    return out;
}

Eigen::MatrixXd orth(const Eigen::Ref<const Eigen::MatrixXd>& cols, double tol)
{
    if (cols.size() == 0)
        return Eigen::MatrixXd(cols.rows(), 0);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return Eigen::MatrixXd(cols.rows(), 0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > tol * sv(0))
        ++rank;
    return svd.matrixU().leftCols(rank);
}

SchurForm real_schur(const Eigen::Ref<const Eigen::MatrixXd>& A)
{
    if (A.rows() != A.cols())
        throw ValidationError("real_schur: matrix must be square");
    SchurForm out;
#ifdef DAMPOPT_USE_LAPACKE
    const lapack_int n = static_cast<lapack_int>(A.rows());
    out.T = A;
    out.U.resize(n, n);
    Eigen::VectorXd wr(n), wi(n);
    lapack_int sdim = 0;
    const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n,
                                          out.T.data(), n, &sdim, wr.data(), wi.data(),
                                          out.U.data(), n);
    if (info != 0)
        throw FactorizationError("real_schur: dgees failed, info=" + std::to_string(info));
    out.eigenvalues.resize(n);
    for (lapack_int i = 0; i < n; ++i)
        out.eigenvalues(i) = Complex(wr(i), wi(i));
#else
    Eigen::RealSchur<Eigen::MatrixXd> schur(A, true);
    if (schur.info() != Eigen::Success)
        throw FactorizationError("real_schur: QR iteration failed to converge");
    out.T = schur.matrixT();
    out.U = schur.matrixU();
    out.eigenvalues = eigenvalues_of_quasi_triangular(out.T);
#endif
    return out;
}

bool is_hurwitz(const SchurForm& schur, double norm_A)
{
    const double thresh = -kStabilityTol * norm_A;
    for (Eigen::Index i = 0; i < schur.eigenvalues.size(); ++i)
        if (!(schur.eigenvalues(i).real() < thresh))
            return false;
    return true;
}

Eigen::MatrixXd lyap_solve_schur_basis(const SchurForm& schur,
                                       const Eigen::Ref<const Eigen::MatrixXd>& Q_schur)
{
    Eigen::MatrixXd C = -Q_schur;
#ifdef DAMPOPT_USE_LAPACKE
    const lapack_int n = static_cast<lapack_int>(schur.T.rows());
    double scale = 1.0;
    const lapack_int info = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'T', 'N', 1, n, n,
                                           schur.T.data(), n, schur.T.data(), n,
                                           C.data(), n, &scale);
    if (info < 0)
        throw FactorizationError("lyap_solve: dtrsyl failed, info=" + std::to_string(info));
    C /= scale;
#else
    quasi_triangular_lyap(schur.T, C);
#endif
    return 0.5 * (C + C.transpose());
}

Eigen::MatrixXd lyap_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                           const Eigen::Ref<const Eigen::MatrixXd>& Q)
{
    if (A.rows() != A.cols() || Q.rows() != Q.cols() || A.rows() != Q.rows())
        throw ValidationError("lyap_solve: dimension mismatch");
    const SchurForm schur = real_schur(A);
    if (!is_hurwitz(schur, A.norm()))
        throw StabilityError("lyap_solve: coefficient matrix is not Hurwitz");
    const Eigen::MatrixXd Q_schur = schur.U.transpose() * Q * schur.U;
    const Eigen::MatrixXd Y = lyap_solve_schur_basis(schur, Q_schur);
    Eigen::MatrixXd X = schur.U * Y * schur.U.transpose();
    return 0.5 * (X + X.transpose());
}

} // namespace dampopt::kernels
