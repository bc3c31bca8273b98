#pragma once

#include <cstdint>
#include <vector>

#include "ia/types.hpp"

namespace ia {

struct SolverOptions {
    int max_iters = 10000;
    double tol = 1e-8;        // stop when normalized leakage drops below this
    int restarts = 3;         // independent random initializations
    std::uint64_t seed = 0;   // restart r uses substream derive_stream(seed, r)
    bool record_trace = false;
    // Rank check threshold is relative: sigma_min > tol_rank_rel * sigma_max
    // of each direct-link effective matrix U_k^H H_kk V_k.
    double tol_rank_rel = 1e-6;
    // Per-user covariance weights P_j / d_j. Empty means unit powers; with
    // equal powers the weights are a common rescaling and do not move the
    // fixed points.
    std::vector<double> powers;

    bool operator==(const SolverOptions&) const = default;
};

// Total cross-link leakage sum_{i != j} ||U_i^H H_ij V_j||_F^2, normalized by
// sum_{i != j} ||H_ij||_F^2 d_j d'_i / (N_i M_j) so that the value is
// invariant to channel scaling and comparable across network sizes. Zero
// exactly when all interference is aligned. Returns 0 if the normalizer is 0
// (no cross links).
double leakage(const ChannelSet& channels, const IASolution& solution);

// Alternating leakage minimization, generalized to d' != d. Forward step:
// U_i spans the d'_i smallest eigenvectors of the interference covariance
// Q_i = sum_{j != i} (P_j/d_j) H_ij V_j V_j^H H_ij^H. Reverse step: the same
// update in the reciprocal network (channels conjugate-transposed, U and V
// swapping roles). Follows Gomadam, Cadambe & Jafar's distributed IA
// algorithm. Leakage is non-increasing across every half-iteration; the best
// restart is kept, preferring converged runs, then lower leakage, then lower
// restart index.
IASolution solve_alternating(const ChannelSet& channels, const SolverOptions& opts = {});

struct AlignmentReport {
    bool aligned = false;
    bool ranks_ok = false;
    // Residuals ||U_i^H H_ij V_j||_F / ||H_ij||_F in row-major [i * K + j]
    // order, with zeros on the diagonal.
    std::vector<double> per_link_residuals;
};

// Checks the two IA conditions on a given solution: all normalized cross-link
// residuals below tol_align, and every direct link U_k^H H_kk V_k of full
// column rank (sigma_min > tol_rank_rel * sigma_max).
AlignmentReport verify_alignment(const ChannelSet& channels, const IASolution& solution,
                                 double tol_align = 1e-3, double tol_rank_rel = 1e-6);

} // namespace ia
