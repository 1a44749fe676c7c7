// Copyright (c) 2026 The dampopt developers
// SPDX-License-Identifier: Apache-2.0

#include "dampopt/model.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "dampopt/kernels.hpp"

namespace dampopt
{

namespace
{

Index scaled_site(Index paper_index, Index size, Index paper_size)
{
    return static_cast<Index>(std::llround(static_cast<double>(paper_index) * static_cast<double>(size) /
                                           static_cast<double>(paper_size)));
}

void check_gains(const SecondOrderSystem& sys, const GainVector& g)
{
    if (g.size() != sys.n_gains)
        throw ValidationError("gain vector has wrong length");
    for (Index i = 0; i < g.size(); ++i)
        if (!(g(i) >= sys.gain_bounds[i].lo) || !(g(i) <= sys.gain_bounds[i].hi))
            throw ValidationError("gain outside feasible bounds");
}

std::string format17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_dense_as_triples(std::ofstream& os, const Eigen::MatrixXd& A)
{
    Index nnz = 0;
    for (Index j = 0; j < A.cols(); ++j)
        for (Index i = 0; i < A.rows(); ++i)
            if (A(i, j) != 0.0)
                ++nnz;
    os << A.rows() << " " << A.cols() << " " << nnz << "\n";
    for (Index j = 0; j < A.cols(); ++j)
        for (Index i = 0; i < A.rows(); ++i)
            if (A(i, j) != 0.0)
                os << (i + 1) << " " << (j + 1) << " " << format17(A(i, j)) << "\n";
}

Eigen::MatrixXd read_dense_from_triples(std::ifstream& is, const std::string& what)
{
    Index rows, cols, nnz;
    if (!(is >> rows >> cols >> nnz))
        throw ValidationError("malformed header in " + what);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    for (Index k = 0; k < nnz; ++k)
    {
        Index i, j;
        double v;
        if (!(is >> i >> j >> v))
            throw ValidationError("truncated triples in " + what);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ValidationError("triple index out of range in " + what);
        A(i - 1, j - 1) = v;
    }
    return A;
}

} // namespace

Eigen::VectorXd damper_gains(const std::vector<int>& gain_map, const GainVector& g)
{
    Eigen::VectorXd out(static_cast<Index>(gain_map.size()));
    for (std::size_t i = 0; i < gain_map.size(); ++i)
        out(static_cast<Index>(i)) = g(gain_map[i]);
    return out;
}

Eigen::VectorXd damper_gains(const SecondOrderSystem& sys, const GainVector& g)
{
    check_gains(sys, g);
    return damper_gains(sys.gain_map, g);
}

SecondOrderSystem build_example1(Index n, double alpha_c, Index j, Index k)
{
    constexpr Index paper_n = 1900;
    if (n < 20)
        throw ValidationError("example1: n must be at least 20");
    if (!(alpha_c > 0.0 && alpha_c < 1.0))
        throw ValidationError("example1: alpha_c must lie in (0,1)");
    if (j < 1 || k < 1 || j > n - 1 || k > n - 1 || j + 1 >= k)
        throw ValidationError("example1: damper indices must satisfy 1 <= j, j+1 < k <= n-1");

    SecondOrderSystem sys;
    sys.n = n;
    sys.p = 4;
    sys.n_gains = 2;
    sys.alpha_c = alpha_c;
    sys.gain_map = {0, 0, 1, 1};
    sys.gain_bounds.assign(2, GainBounds{});

    // Piecewise mass profile evaluated at the proportionally mapped paper index,
    // so the near-continuous breakpoint at 475/476 is preserved at any size.
    sys.mass.resize(n);
    for (Index i = 1; i <= n; ++i)
    {
        const double t = static_cast<double>(i) * static_cast<double>(paper_n) / static_cast<double>(n);
        sys.mass(i - 1) = (std::llround(t) <= 475) ? 144.0 - 0.15 * t : t / 10.0 + 25.0;
    }

    // Pentadiagonal stiffness, all k_i = 500:
    // K(i,i) = 2k_i + 2k_{i+1}, K(i,i+1) = -k_{i+1}, K(i,i+2) = -k_{i+2}.
    const double ks = 500.0;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5 * n));
    for (Index i = 0; i < n; ++i)
    {
        trip.emplace_back(i, i, 4.0 * ks);
        if (i + 1 < n)
        {
            trip.emplace_back(i, i + 1, -ks);
            trip.emplace_back(i + 1, i, -ks);
        }
        if (i + 2 < n)
        {
            trip.emplace_back(i, i + 2, -ks);
            trip.emplace_back(i + 2, i, -ks);
        }
    }
    sys.stiffness.resize(n, n);
    sys.stiffness.setFromTriplets(trip.begin(), trip.end());

    // Ten-column tapered excitation block, paper rows 471:480.
    const Index e_start = scaled_site(471, n, paper_n);
    if (e_start < 1 || e_start + 9 > n)
        throw ValidationError("example1: n too small to host the excitation stencil");
    const double taper[10] = {10, 20, 30, 40, 50, 50, 40, 30, 20, 10};
    sys.input_map = Eigen::MatrixXd::Zero(n, 10);
    for (Index q = 0; q < 10; ++q)
        sys.input_map(e_start - 1 + q, q) = taper[q];

    // Eighteen displacement taps, paper positions 100:100:1800.
    sys.output_map = Eigen::MatrixXd::Zero(18, n);
    std::set<Index> taps;
    for (Index q = 1; q <= 18; ++q)
    {
        const Index site = scaled_site(100 * q, n, paper_n);
        if (site < 1 || site > n || !taps.insert(site).second)
            throw ValidationError("example1: n too small to host distinct output taps");
        sys.output_map(q - 1, site - 1) = 1.0;
    }

    sys.damper_geometry = Eigen::MatrixXd::Zero(n, 4);
    sys.damper_geometry(j - 1, 0) = 1.0;
    sys.damper_geometry(j, 1) = 1.0;
    sys.damper_geometry(k - 1, 2) = 1.0;
    sys.damper_geometry(k, 3) = 1.0;
    return sys;
}

SecondOrderSystem build_example2(Index d, double alpha_c, Index j, Index k)
{
    constexpr Index paper_d = 1000;
    if (d < 30)
        throw ValidationError("example2: d must be at least 30");
    if (!(alpha_c > 0.0 && alpha_c < 1.0))
        throw ValidationError("example2: alpha_c must lie in (0,1)");
    const Index n = 2 * d + 1;
    if (j < 1 || j + 25 > d)
        throw ValidationError("example2: first-row damper stencil out of range");
    if (k <= d || k + 25 > 2 * d)
        throw ValidationError("example2: second-row damper stencil out of range");

    SecondOrderSystem sys;
    sys.n = n;
    sys.p = 4;
    sys.n_gains = 4;
    sys.alpha_c = alpha_c;
    sys.gain_map = {0, 1, 2, 3};
    sys.gain_bounds.assign(4, GainBounds{});

    sys.mass.resize(n);
    for (Index i = 1; i <= d; ++i)
    {
        const double t = static_cast<double>(i) * static_cast<double>(paper_d) / static_cast<double>(d);
        // m_500 falls in the gap of the printed ranges; it takes the second branch.
        sys.mass(i - 1) = (std::llround(t) <= 499) ? 100.0 - t / 10.0 : t / 30.0 + 33.0;
    }
    for (Index i = 1; i <= d; ++i)
    {
        const double u = static_cast<double>(i) * static_cast<double>(paper_d) / static_cast<double>(d);
        sys.mass(d + i - 1) = 100.0 - (u + 1.0) * 0.25 + (u + 1.0) * (u + 1.0) / 5000.0;
    }
    sys.mass(n - 1) = 100.0;

    const double k1 = 400.0, k2 = 100.0, k3 = 300.0;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(6 * n));
    auto add_row = [&](Index offset, double kv) {
        for (Index i = 0; i < d; ++i)
        {
            trip.emplace_back(offset + i, offset + i, 2.0 * kv);
            if (i + 1 < d)
            {
                trip.emplace_back(offset + i, offset + i + 1, -kv);
                trip.emplace_back(offset + i + 1, offset + i, -kv);
            }
        }
        trip.emplace_back(offset + d - 1, n - 1, -kv);
        trip.emplace_back(n - 1, offset + d - 1, -kv);
    };
    add_row(0, k1);
    add_row(d, k2);
    trip.emplace_back(n - 1, n - 1, k1 + k2 + k3);
    sys.stiffness.resize(n, n);
    sys.stiffness.setFromTriplets(trip.begin(), trip.end());

    // Disturbances on the ten boundary-nearest masses of each row plus the
    // coupling mass; the edge anchor does not move when d changes.
    sys.input_map = Eigen::MatrixXd::Zero(n, 21);
    for (Index q = 0; q < 10; ++q)
    {
        sys.input_map(q, q) = 1000.0 - 100.0 * static_cast<double>(q);
        sys.input_map(d + q, 10 + q) = 1000.0 - 100.0 * static_cast<double>(q);
    }
    sys.input_map(n - 1, 20) = 2000.0;

    // 21 displacements around each row center.
    const Index c = scaled_site(500, d, paper_d);
    if (c - 10 < 1 || c + 10 > d)
        throw ValidationError("example2: d too small to host the output stencils");
    sys.output_map = Eigen::MatrixXd::Zero(42, n);
    for (Index q = 0; q < 21; ++q)
    {
        sys.output_map(q, c - 11 + q) = 1.0;
        sys.output_map(21 + q, d + c - 11 + q) = 1.0;
    }

    sys.damper_geometry = Eigen::MatrixXd::Zero(n, 4);
    auto two_point = [&](Index col, Index a, Index b) {
        sys.damper_geometry(a - 1, col) = 1.0;
        sys.damper_geometry(b - 1, col) = -1.0;
    };
    two_point(0, j, j + 5);
    two_point(1, j + 20, j + 25);
    two_point(2, k, k + 5);
    two_point(3, k + 20, k + 25);
    return sys;
}

std::vector<std::pair<Index, Index>> example1_grid(Index n)
{
    std::vector<std::pair<Index, Index>> grid;
    for (Index pj : {50, 150, 250, 350})
        for (Index pk = 850; pk <= 1850; pk += 100)
            grid.emplace_back(scaled_site(pj, n, 1900), scaled_site(pk, n, 1900));
    return grid;
}

std::vector<std::pair<Index, Index>> example2_grid(Index d)
{
    std::vector<std::pair<Index, Index>> grid;
    for (Index pj : {250, 450, 650, 850})
        for (Index pk = 1150; pk <= 1750; pk += 100)
            grid.emplace_back(scaled_site(pj, d, 1000), d + scaled_site(pk - 1000, d, 1000));
    return grid;
}

Eigen::MatrixXd damping_matrix(const SecondOrderSystem& sys, const GainVector& g)
{
    check_gains(sys, g);
    const Eigen::VectorXd sqrt_m = sys.mass.cwiseSqrt();
    const Eigen::VectorXd inv_sqrt_m = sqrt_m.cwiseInverse();
    Eigen::MatrixXd Kn = Eigen::MatrixXd(sys.stiffness);
    Kn = inv_sqrt_m.asDiagonal() * Kn * inv_sqrt_m.asDiagonal();
    auto [lambda, U] = kernels::sym_eig(Kn);
    if (!(lambda.minCoeff() > 0.0))
        throw FactorizationError("damping_matrix: stiffness is not positive definite");
    const Eigen::MatrixXd sqrtKn = U * lambda.cwiseSqrt().asDiagonal() * U.transpose();
    Eigen::MatrixXd C = 2.0 * sys.alpha_c * (sqrt_m.asDiagonal() * sqrtKn * sqrt_m.asDiagonal());
    const Eigen::VectorXd gd = damper_gains(sys.gain_map, g);
    C.noalias() += sys.damper_geometry * gd.asDiagonal() * sys.damper_geometry.transpose();
    return 0.5 * (C + C.transpose());
}

void save_system(const SecondOrderSystem& sys, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream os(fs::path(dir) / "meta.txt");
        os << "format dampopt-model 1\n";
        os << "n " << sys.n << "\n";
        os << "p " << sys.p << "\n";
        os << "n_gains " << sys.n_gains << "\n";
        os << "alpha_c " << format17(sys.alpha_c) << "\n";
        os << "gain_map";
        for (int m : sys.gain_map)
            os << " " << m;
        os << "\ngain_bounds";
        for (const auto& b : sys.gain_bounds)
            os << " " << format17(b.lo) << " " << format17(b.hi);
        os << "\n";
    }
    {
        std::ofstream os(fs::path(dir) / "mass.txt");
        os << sys.n << "\n";
        for (Index i = 0; i < sys.n; ++i)
            os << format17(sys.mass(i)) << "\n";
    }
    {
        std::ofstream os(fs::path(dir) / "stiffness.txt");
        os << sys.n << " " << sys.n << " " << sys.stiffness.nonZeros() << "\n";
        for (Index c = 0; c < sys.stiffness.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, c); it; ++it)
                os << (it.row() + 1) << " " << (it.col() + 1) << " " << format17(it.value()) << "\n";
    }
    std::ofstream ob(fs::path(dir) / "damper.txt");
    write_dense_as_triples(ob, sys.damper_geometry);
    std::ofstream oe(fs::path(dir) / "input.txt");
    write_dense_as_triples(oe, sys.input_map);
    std::ofstream oh(fs::path(dir) / "output.txt");
    write_dense_as_triples(oh, sys.output_map);
}

SecondOrderSystem load_system(const std::string& dir)
{
    namespace fs = std::filesystem;
    SecondOrderSystem sys;
    {
        std::ifstream is(fs::path(dir) / "meta.txt");
        if (!is)
            throw ValidationError("cannot open " + dir + "/meta.txt");
        std::string word, fmt;
        int version = 0;
        is >> word >> fmt >> version;
        if (word != "format" || fmt != "dampopt-model" || version != 1)
            throw ValidationError("unrecognized model format in " + dir);
        std::string key;
        while (is >> key)
        {
            if (key == "n")
                is >> sys.n;
            else if (key == "p")
                is >> sys.p;
            else if (key == "n_gains")
                is >> sys.n_gains;
            else if (key == "alpha_c")
                is >> sys.alpha_c;
            else if (key == "gain_map")
            {
                sys.gain_map.resize(static_cast<std::size_t>(sys.p));
                for (auto& m : sys.gain_map)
                    is >> m;
            }
            else if (key == "gain_bounds")
            {
                sys.gain_bounds.resize(static_cast<std::size_t>(sys.n_gains));
                for (auto& b : sys.gain_bounds)
                    is >> b.lo >> b.hi;
            }
            else
                throw ValidationError("unknown key '" + key + "' in " + dir + "/meta.txt");
        }
    }
    if (sys.n <= 0 || sys.p <= 0 || sys.n_gains <= 0)
        throw ValidationError("bad dimensions in " + dir + "/meta.txt");
    {
        std::ifstream is(fs::path(dir) / "mass.txt");
        Index n = 0;
        if (!(is >> n) || n != sys.n)
            throw ValidationError("mass.txt size mismatch");
        sys.mass.resize(n);
        for (Index i = 0; i < n; ++i)
            if (!(is >> sys.mass(i)))
                throw ValidationError("truncated mass.txt");
    }
    {
        std::ifstream is(fs::path(dir) / "stiffness.txt");
        Index rows, cols, nnz;
        if (!(is >> rows >> cols >> nnz) || rows != sys.n || cols != sys.n)
            throw ValidationError("stiffness.txt size mismatch");
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(nnz));
        for (Index q = 0; q < nnz; ++q)
        {
            Index i, j;
            double v;
            if (!(is >> i >> j >> v))
                throw ValidationError("truncated stiffness.txt");
            trip.emplace_back(i - 1, j - 1, v);
        }
        sys.stiffness.resize(rows, cols);
        sys.stiffness.setFromTriplets(trip.begin(), trip.end());
    }
    std::ifstream ib(fs::path(dir) / "damper.txt");
    sys.damper_geometry = read_dense_from_triples(ib, "damper.txt");
    std::ifstream ie(fs::path(dir) / "input.txt");
    sys.input_map = read_dense_from_triples(ie, "input.txt");
    std::ifstream ih(fs::path(dir) / "output.txt");
    sys.output_map = read_dense_from_triples(ih, "output.txt");
    if (sys.damper_geometry.rows() != sys.n || sys.damper_geometry.cols() != sys.p ||
        sys.input_map.rows() != sys.n || sys.output_map.cols() != sys.n)
        throw ValidationError("model matrices in " + dir + " have inconsistent shapes");
    return sys;
}

} // namespace dampopt
