// Copyright (c) 2026 The dampopt developers
// SPDX-License-Identifier: Apache-2.0

#ifndef DAMPOPT_TYPES_HPP
#define DAMPOPT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dampopt
{

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Gain configuration: one entry per independent damper gain (viscosity).
using GainVector = Eigen::VectorXd;

/// Feasible interval [lo, hi] for one gain; hi may be +inf.
struct GainBounds
{
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Bad dimensions, out-of-range indices, malformed configuration. CLI exit code 2.
struct ValidationError : Error
{
    using Error::Error;
};

/// Numerical factorization failed its contract (non-SPD, non-symmetric input).
struct FactorizationError : Error
{
    using Error::Error;
};

/// A matrix required to be Hurwitz is not.
struct StabilityError : Error
{
    using Error::Error;
};

/// Shifted inner system singular beyond retry.
struct ShiftDegeneracyError : Error
{
    using Error::Error;
};

/// Shift coincides with an internal-damping pole.
struct PoleCollisionError : Error
{
    using Error::Error;
};

/// Full-order oracle requested above the configured size cap. CLI exit code 4.
struct OracleCapError : Error
{
    using Error::Error;
};

/// Iteration failed to converge within its budget. CLI exit code 3.
struct NonConvergenceError : Error
{
    using Error::Error;
};

} // namespace dampopt

#endif // DAMPOPT_TYPES_HPP
