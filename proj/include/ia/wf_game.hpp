#pragma once

#include <vector>

#include "ia/types.hpp"

namespace ia {

struct WfGameOptions {
    int max_iters = 500;  // best-response sweeps
    double tol = 1e-6;    // convergence: max_k ||dQ_k||_F / P_k below this

    bool operator==(const WfGameOptions&) const = default;
};

struct WfGameOutcome {
    std::vector<CMatrix> Q;  // transmit covariance per user, M_k x M_k
    bool converged = false;
    int iterations = 0;      // sweeps performed
};

// Single-user waterfilling against a fixed interference-plus-noise
// covariance: maximizes log det(I + H Q H^H R^{-1}) subject to Q >= 0,
// tr(Q) <= P. Whitens R, eigendecomposes H^H R^{-1} H and pours power by
// bisection on the water level.
CMatrix waterfill_best_response(const CMatrix& H, const CMatrix& R_interf_plus_noise,
                                double P);

// Sequential (Gauss-Seidel) best-response dynamics: each sweep updates users
// in index order against the freshest covariances. Starts from the
// interference-free waterfilling solution, so decoupled games converge in one
// sweep. Nonconvergence is a reported outcome, not an error; the game is
// known to cycle for some channel draws.
WfGameOutcome run_wf_game(const ChannelSet& channels, const PowerProfile& powers,
                          const WfGameOptions& opts = {});

// Per-user rates log2 det(sigma^2 I + sum_i H_ki Q_i H_ki^H) -
// log2 det(sigma^2 I + sum_{i!=k} H_ki Q_i H_ki^H), interference treated as
// colored Gaussian noise.
std::vector<double> wf_user_rates(const ChannelSet& channels,
                                  const std::vector<CMatrix>& Q, double sigma2);

} // namespace ia
