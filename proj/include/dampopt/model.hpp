// Copyright (c) 2026 The dampopt developers
// SPDX-License-Identifier: Apache-2.0

#ifndef DAMPOPT_MODEL_HPP
#define DAMPOPT_MODEL_HPP

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "dampopt/types.hpp"

namespace dampopt
{

/// Second-order vibrational system  M q'' + (C_int + B G(g) B^T) q' + K q = E w,
/// z = H q,  with diagonal M, SPD K and internal damping a fixed fraction
/// alpha_c of critical damping. Immutable after construction.
struct SecondOrderSystem
{
    Index n = 0;       // states
    Index p = 0;       // damper columns of B
    Index n_gains = 0; // independent gains (Example 1 ties pairs of dampers)

    Eigen::VectorXd mass;                    // diagonal of M, strictly positive
    Eigen::SparseMatrix<double> stiffness;   // K, symmetric positive definite
    double alpha_c = 0.0;                    // fraction of critical damping, in (0,1)
    Eigen::MatrixXd damper_geometry;         // B, n x p incidence columns
    std::vector<int> gain_map;               // damper column -> gain index
    std::vector<GainBounds> gain_bounds;     // per independent gain
    Eigen::MatrixXd input_map;               // E, n x m_in
    Eigen::MatrixXd output_map;              // H, m_out x n

    Index m_in() const { return input_map.cols(); }
    Index m_out() const { return output_map.rows(); }
};

/// Expand an n_gains vector to the p damper-column gains via the tie map.
Eigen::VectorXd damper_gains(const SecondOrderSystem& sys, const GainVector& g);
Eigen::VectorXd damper_gains(const std::vector<int>& gain_map, const GainVector& g);

/// Sequential spring-mass chain (paper scale n=1900) with a 10-column tapered
/// excitation block, 18 uniformly spaced displacement outputs and two pairs of
/// adjacent grounded dampers at j/j+1 and k/k+1 sharing one gain per pair.
/// Site indices and the piecewise mass law rescale proportionally with n.
SecondOrderSystem build_example1(Index n, double alpha_c, Index j, Index k);

/// Double-row oscillator with 2d+1 masses and 2d+3 springs (paper scale
/// d=1000): two tridiagonal rows coupled through a single end mass, three
/// tapered disturbance blocks, 42 displacements around the row centers and
/// four independent two-point dampers.
SecondOrderSystem build_example2(Index d, double alpha_c, Index j, Index k);

/// Damping configuration grids the two examples are swept over, rescaled from
/// the paper's index sets.
std::vector<std::pair<Index, Index>> example1_grid(Index n);
std::vector<std::pair<Index, Index>> example2_grid(Index d);

/// Dense C(g) = 2 alpha_c M^{1/2}(M^{-1/2} K M^{-1/2})^{1/2} M^{1/2} + B G(g) B^T.
/// Requires a full symmetric eigendecomposition; oracle-scale use only.
Eigen::MatrixXd damping_matrix(const SecondOrderSystem& sys, const GainVector& g);

/// Plain-text model serialization: coordinate triples for sparse matrices,
/// value lists for diagonals, 17 significant digits throughout so that a
/// save/load round trip is bit exact.
void save_system(const SecondOrderSystem& sys, const std::string& dir);
SecondOrderSystem load_system(const std::string& dir);

} // namespace dampopt

#endif // DAMPOPT_MODEL_HPP
