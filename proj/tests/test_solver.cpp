#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ia/channel.hpp"
#include "ia/errors.hpp"
#include "ia/rng.hpp"
#include "ia/solver.hpp"
#include "ia/types.hpp"

using ia::ChannelSet;
using ia::CMatrix;
using ia::draw_channels;
using ia::IASolution;
using ia::NetworkDims;
using ia::SolverOptions;

namespace {

CMatrix random_columns(int rows, int cols, ia::Rng& rng) {
    CMatrix g(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g(r, c) = rng.complex_gaussian();
    Eigen::HouseholderQR<CMatrix> qr(g);
    return qr.householderQ() * CMatrix::Identity(rows, cols);
}

IASolution random_solution(const NetworkDims& dims, std::uint64_t seed) {
    ia::Rng rng(seed);
    IASolution sol;
    for (int k = 0; k < dims.K; ++k) {
        sol.V.push_back(random_columns(dims.M[k], dims.d[k], rng));
        sol.U.push_back(random_columns(dims.N[k], dims.dprime[k], rng));
    }
    return sol;
}

double unitarity_defect(const CMatrix& m) {
    return (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).norm();
}

} // namespace

TEST_CASE("small proper system converges for nearly all seeds") {
    const NetworkDims dims = NetworkDims::symmetric(3, 2, 2, 1, 1);
    int converged = 0;
    for (int s = 0; s < 100; ++s) {
        const ChannelSet cs = draw_channels(dims, 100 + s);
        SolverOptions opts;
        opts.seed = s;
        opts.max_iters = 5000;
        const IASolution sol = ia::solve_alternating(cs, opts);
        if (sol.converged && sol.residual_leakage < 1e-8) ++converged;
    }
    CHECK(converged >= 95);
}

TEST_CASE("converged solutions verify and expose solver metadata") {
    const NetworkDims dims = NetworkDims::symmetric(3, 2, 2, 1, 1);
    const ChannelSet cs = draw_channels(dims, 7);
    SolverOptions opts;
    opts.seed = 2;
    const IASolution sol = ia::solve_alternating(cs, opts);
    REQUIRE(sol.converged);
    CHECK(sol.residual_leakage < 1e-8);
    CHECK(sol.iterations >= 1);

    const ia::AlignmentReport report = ia::verify_alignment(cs, sol);
    CHECK(report.aligned);
    CHECK(report.ranks_ok);

    for (int k = 0; k < 3; ++k) {
        CHECK(unitarity_defect(sol.V[k]) < 1e-10);
        CHECK(unitarity_defect(sol.U[k]) < 1e-10);
    }
}

TEST_CASE("solver is deterministic for a fixed seed") {
    const NetworkDims dims = NetworkDims::symmetric(3, 3, 3, 1, 2);
    const ChannelSet cs = draw_channels(dims, 12);
    SolverOptions opts;
    opts.seed = 5;
    opts.max_iters = 3000;
    const IASolution a = ia::solve_alternating(cs, opts);
    const IASolution b = ia::solve_alternating(cs, opts);
    CHECK(a.residual_leakage == b.residual_leakage);
    CHECK(a.iterations == b.iterations);
    for (int k = 0; k < 3; ++k) CHECK(a.V[k] == b.V[k]);
}

TEST_CASE("per-half-iteration leakage never increases") {
    const NetworkDims dims = NetworkDims::symmetric(3, 3, 3, 1, 2);
    for (int s = 0; s < 10; ++s) {
        const ChannelSet cs = draw_channels(dims, 40 + s);
        SolverOptions opts;
        opts.seed = s;
        opts.record_trace = true;
        opts.restarts = 1;
        const IASolution sol = ia::solve_alternating(cs, opts);
        REQUIRE(sol.leakage_trace.size() >= 2);
        for (std::size_t t = 1; t < sol.leakage_trace.size(); ++t)
            CHECK(sol.leakage_trace[t] <= sol.leakage_trace[t - 1] + 1e-12);
    }
}

TEST_CASE("improper system stalls at high leakage") {
    // K=4 with 2x2 nodes and d=d'=1: margin 1 + 1 - 3 = -1.
    const NetworkDims dims = NetworkDims::symmetric(4, 2, 2, 1, 1);
    int stalled = 0;
    for (int s = 0; s < 20; ++s) {
        const ChannelSet cs = draw_channels(dims, 800 + s);
        SolverOptions opts;
        opts.seed = s;
        opts.max_iters = 2000;
        opts.restarts = 1;
        const IASolution sol = ia::solve_alternating(cs, opts);
        if (!sol.converged && sol.residual_leakage > 1e-4) ++stalled;
    }
    CHECK(stalled >= 18);
}

TEST_CASE("leakage of an exactly aligned construction is zero") {
    // K=2 allows a direct construction: U_0 spans the orthogonal complement
    // of H_01 V_1, and vice versa, so every cross term vanishes.
    const NetworkDims dims = NetworkDims::symmetric(2, 2, 3, 1, 2);
    const ChannelSet cs = draw_channels(dims, 9);
    ia::Rng rng(31);
    IASolution sol;
    sol.V.resize(2);
    sol.U.resize(2);
    for (int k = 0; k < 2; ++k) sol.V[k] = random_columns(2, 1, rng);
    for (int i = 0; i < 2; ++i) {
        const CMatrix hv = cs.H(i, 1 - i) * sol.V[1 - i];  // 3x1
        Eigen::JacobiSVD<CMatrix> svd(hv, Eigen::ComputeFullU);
        sol.U[i] = svd.matrixU().rightCols(2);  // null space of hv^H
    }
    CHECK(ia::leakage(cs, sol) < 1e-20);

    const ia::AlignmentReport report = ia::verify_alignment(cs, sol);
    CHECK(report.aligned);
}

TEST_CASE("normalized leakage is scale invariant") {
    const NetworkDims dims = NetworkDims::symmetric(3, 2, 2, 1, 1);
    const ChannelSet base = draw_channels(dims, 55);
    const IASolution sol = random_solution(dims, 3);

    std::vector<CMatrix> scaled(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            scaled[static_cast<std::size_t>(i) * 3 + j] = 3.0 * base.H(i, j);
    const ChannelSet tripled(dims, std::move(scaled), base.seed());

    CHECK(ia::leakage(base, sol)
          == doctest::Approx(ia::leakage(tripled, sol)).epsilon(1e-14));
}

TEST_CASE("random solutions leak on every seed") {
    const NetworkDims dims = NetworkDims::symmetric(3, 2, 2, 1, 1);
    for (int s = 0; s < 100; ++s) {
        const ChannelSet cs = draw_channels(dims, 300 + s);
        const IASolution sol = random_solution(dims, static_cast<std::uint64_t>(s));
        CHECK(ia::leakage(cs, sol) > 1e-3);
    }
}

TEST_CASE("leakage is invariant under per-user unitary rotation") {
    const NetworkDims dims = NetworkDims::symmetric(3, 3, 3, 2, 2);
    const ChannelSet cs = draw_channels(dims, 77);
    const IASolution sol = random_solution(dims, 8);
    const double base = ia::leakage(cs, sol);

    ia::Rng rng(123);
    IASolution rotated = sol;
    for (int k = 0; k < 3; ++k) {
        rotated.V[k] = sol.V[k] * random_columns(2, 2, rng);
        rotated.U[k] = sol.U[k] * random_columns(2, 2, rng);
    }
    CHECK(ia::leakage(cs, rotated) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("verify_alignment rejects misaligned solutions") {
    const NetworkDims dims = NetworkDims::symmetric(3, 2, 2, 1, 1);
    const ChannelSet cs = draw_channels(dims, 13);
    const IASolution sol = random_solution(dims, 2);
    CHECK_FALSE(ia::verify_alignment(cs, sol).aligned);

    // U square unitary keeps the whole receive space, so interference
    // from nonzero cross channels cannot be nulled.
    const NetworkDims full = NetworkDims::symmetric(2, 2, 2, 1, 2);
    const ChannelSet cs2 = draw_channels(full, 14);
    const IASolution sol2 = random_solution(full, 5);
    CHECK_FALSE(ia::verify_alignment(cs2, sol2).aligned);
}

TEST_CASE("shape mismatch raises a dimension error") {
    const NetworkDims dims = NetworkDims::symmetric(2, 2, 2, 1, 1);
    const ChannelSet cs = draw_channels(dims, 1);
    IASolution sol = random_solution(dims, 1);
    sol.U[1] = CMatrix::Zero(4, 1);
    CHECK_THROWS_AS(ia::leakage(cs, sol), ia::DimensionError);
}
