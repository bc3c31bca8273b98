#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ia/solver.hpp"
#include "ia/types.hpp"
#include "ia/wf_game.hpp"

namespace ia {

enum class Method {
    IaOptimum,
    IaProjection,
    IaBoundThm2,
    IaProjectionAnalytic,
    WfGame,
};

// Wire names used in CSV output and config files.
std::string_view method_token(Method m);
std::optional<Method> method_from_token(std::string_view token);
bool method_is_analytic(Method m);

struct McOptions {
    // Solver settings for IA trials. Restarts default to 1 here (the library
    // default is 3): per-draw restarts mostly rescue rare bad initializations,
    // and the Monte-Carlo discard-and-replace policy already handles those at
    // a fraction of the cost. The solver always runs with unit powers so its
    // output is independent of the SNR point.
    SolverOptions solver = [] {
        SolverOptions s;
        s.restarts = 1;
        return s;
    }();
    WfGameOptions game;
    int threads = 1;  // never affects results, only wall time
};

struct EstimateSet {
    std::vector<Estimate> per_user;
    Estimate sum;
};

// Ergodic-rate estimation over `trials` accepted channel draws. Draw t uses
// the RNG substream derive_stream(seed, t); draws whose solver or game fails
// to converge are discarded and replaced by the next index, deterministically
// and independently of thread count. Throws NonconvergenceError if fewer than
// `trials` draws converge within a 10x draw budget.
EstimateSet estimate_ergodic(Method method, const NetworkDims& dims,
                             const PowerProfile& powers, long trials, std::uint64_t seed,
                             const McOptions& opts = {});

// Multi-SNR variants used by the sweep command. IA solutions do not depend on
// the power profile, so one solver run per draw serves every profile; results
// are identical to calling estimate_ergodic per profile, just cheaper. The
// waterfilling game does depend on powers, so it is re-run per profile.
struct IaSweepEstimates {
    std::vector<EstimateSet> optimum;    // one entry per profile
    std::vector<EstimateSet> projection;
};
IaSweepEstimates estimate_ia_ergodic_multi(const NetworkDims& dims,
                                           const std::vector<PowerProfile>& profiles,
                                           long trials, std::uint64_t seed,
                                           const McOptions& opts = {});
std::vector<EstimateSet> estimate_wf_ergodic_multi(const NetworkDims& dims,
                                                   const std::vector<PowerProfile>& profiles,
                                                   long trials, std::uint64_t seed,
                                                   const McOptions& opts = {});

} // namespace ia
