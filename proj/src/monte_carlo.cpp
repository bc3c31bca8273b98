#include "ia/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "ia/channel.hpp"
#include "ia/errors.hpp"
#include "ia/rng.hpp"

namespace ia {

std::string_view method_token(Method m) {
    switch (m) {
        case Method::IaOptimum: return "ia_optimum";
        case Method::IaProjection: return "ia_projection";
        case Method::IaBoundThm2: return "ia_bound_thm2";
        case Method::IaProjectionAnalytic: return "ia_projection_analytic";
        case Method::WfGame: return "wf_game";
    }
    return "unknown";
}

std::optional<Method> method_from_token(std::string_view token) {
    for (Method m : {Method::IaOptimum, Method::IaProjection, Method::IaBoundThm2,
                     Method::IaProjectionAnalytic, Method::WfGame})
        if (method_token(m) == token) return m;
    return std::nullopt;
}

bool method_is_analytic(Method m) {
    return m == Method::IaBoundThm2 || m == Method::IaProjectionAnalytic;
}

namespace {

struct TrialResult {
    bool ok = false;
    std::vector<double> rates;  // layout defined by the evaluator
};

// Running mean/variance accumulators, updated in acceptance order so the
// result is independent of how trials were scheduled.
struct Accumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    long n = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }

    Estimate finish(long discarded, std::uint64_t seed) const {
        Estimate e;
        e.mean = n > 0 ? sum / n : 0.0;
        if (n > 1) {
            const double var = std::max(0.0, (sumsq - n * e.mean * e.mean) / (n - 1));
            e.ci_halfwidth = 1.96 * std::sqrt(var / n);
        }
        e.trials_used = n;
        e.trials_discarded = discarded;
        e.seed = seed;
        return e;
    }
};

// Scans draw indices 0, 1, 2, ... in order, accepting converged trials until
// `trials` of them are in. Indices are evaluated in waves sized independently
// of the thread count, and acceptance is a sequential scan of the wave, so
// the outcome is bit-identical for any `threads`.
template <class Eval, class Accept>
std::pair<long, long> run_waves(long trials, int threads, const char* what, Eval&& eval,
                                Accept&& accept) {
    if (trials < 1) throw DomainError("estimate_ergodic: trials must be >= 1");
    const long budget = 10 * trials;
    long accepted = 0, discarded = 0, next = 0;
    std::vector<TrialResult> wave;

    while (accepted < trials && next < budget) {
        const long count = std::min(trials - accepted, budget - next);
        wave.assign(static_cast<std::size_t>(count), TrialResult{});
        const int workers = std::max(1, static_cast<int>(std::min<long>(threads, count)));
        if (workers == 1) {
            for (long o = 0; o < count; ++o) wave[o] = eval(next + o);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(workers);
            for (int w = 0; w < workers; ++w) {
                const long begin = count * w / workers;
                const long end = count * (w + 1) / workers;
                pool.emplace_back([&, w, begin, end] {
                    try {
                        for (long o = begin; o < end; ++o) wave[o] = eval(next + o);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
            for (auto& err : errors)
                if (err) std::rethrow_exception(err);
        }
        for (long o = 0; o < count && accepted < trials; ++o) {
            ++next;
            if (wave[o].ok) {
                accept(wave[o].rates);
                ++accepted;
            } else {
                ++discarded;
            }
        }
    }
    if (accepted < trials)
        throw NonconvergenceError(std::string(what)
                                  + ": fewer than the requested trials converged within a "
                                    "10x draw budget (discard rate above 90%)");
    return {accepted, discarded};
}

std::vector<PowerProfile> validate_profiles(const NetworkDims& dims,
                                            const std::vector<PowerProfile>& profiles) {
    dims.validate();
    if (profiles.empty()) throw DomainError("estimate_ergodic: need at least one profile");
    for (const PowerProfile& p : profiles) p.validate(dims.K);
    return profiles;
}

} // namespace

IaSweepEstimates estimate_ia_ergodic_multi(const NetworkDims& dims,
                                           const std::vector<PowerProfile>& profiles,
                                           long trials, std::uint64_t seed,
                                           const McOptions& opts) {
    validate_profiles(dims, profiles);
    const int K = dims.K;
    const std::size_t n_prof = profiles.size();

    SolverOptions sopts = opts.solver;
    sopts.record_trace = false;
    sopts.powers.clear();  // keep solver output independent of the SNR point

    // rates layout: [profile][user] for the optimum receiver, then the same
    // block for the projection receiver.
    auto eval = [&](long t) {
        const std::uint64_t base = derive_stream(seed, static_cast<std::uint64_t>(t));
        const ChannelSet ch = draw_channels(dims, derive_stream(base, 0));
        SolverOptions so = sopts;
        so.seed = derive_stream(base, 1);
        const IASolution sol = solve_alternating(ch, so);
        TrialResult r;
        r.ok = sol.converged;
        if (!r.ok) return r;
        r.rates.reserve(2 * n_prof * K);
        for (const PowerProfile& p : profiles)
            for (int k = 0; k < K; ++k) r.rates.push_back(mi_optimum(ch, sol, p, k));
        for (const PowerProfile& p : profiles)
            for (int k = 0; k < K; ++k) r.rates.push_back(mi_projection(ch, sol, p, k));
        return r;
    };

    std::vector<Accumulator> acc_opt(n_prof * K), acc_proj(n_prof * K);
    std::vector<Accumulator> sum_opt(n_prof), sum_proj(n_prof);
    auto accept = [&](const std::vector<double>& rates) {
        std::size_t idx = 0;
        for (std::size_t p = 0; p < n_prof; ++p) {
            double total = 0.0;
            for (int k = 0; k < K; ++k, ++idx) {
                acc_opt[p * K + k].add(rates[idx]);
                total += rates[idx];
            }
            sum_opt[p].add(total);
        }
        for (std::size_t p = 0; p < n_prof; ++p) {
            double total = 0.0;
            for (int k = 0; k < K; ++k, ++idx) {
                acc_proj[p * K + k].add(rates[idx]);
                total += rates[idx];
            }
            sum_proj[p].add(total);
        }
    };

    const auto [used, discarded] =
        run_waves(trials, opts.threads, "ia_optimum/ia_projection", eval, accept);
    (void)used;

    IaSweepEstimates out;
    out.optimum.resize(n_prof);
    out.projection.resize(n_prof);
    for (std::size_t p = 0; p < n_prof; ++p) {
        for (int k = 0; k < K; ++k) {
            out.optimum[p].per_user.push_back(acc_opt[p * K + k].finish(discarded, seed));
            out.projection[p].per_user.push_back(acc_proj[p * K + k].finish(discarded, seed));
        }
        out.optimum[p].sum = sum_opt[p].finish(discarded, seed);
        out.projection[p].sum = sum_proj[p].finish(discarded, seed);
    }
    return out;
}

std::vector<EstimateSet> estimate_wf_ergodic_multi(const NetworkDims& dims,
                                                   const std::vector<PowerProfile>& profiles,
                                                   long trials, std::uint64_t seed,
                                                   const McOptions& opts) {
    validate_profiles(dims, profiles);
    const int K = dims.K;

    std::vector<EstimateSet> out;
    // The game's equilibria (and its convergence set) depend on the powers, so
    // each profile is an independent run over the same substream sequence.
    for (const PowerProfile& powers : profiles) {
        auto eval = [&](long t) {
            const std::uint64_t base = derive_stream(seed, static_cast<std::uint64_t>(t));
            const ChannelSet ch = draw_channels(dims, derive_stream(base, 0));
            const WfGameOutcome game = run_wf_game(ch, powers, opts.game);
            TrialResult r;
            r.ok = game.converged;
            if (r.ok) r.rates = wf_user_rates(ch, game.Q, powers.sigma2);
            return r;
        };

        std::vector<Accumulator> acc(K);
        Accumulator acc_sum;
        auto accept = [&](const std::vector<double>& rates) {
            double total = 0.0;
            for (int k = 0; k < K; ++k) {
                acc[k].add(rates[k]);
                total += rates[k];
            }
            acc_sum.add(total);
        };

        const auto [used, discarded] =
            run_waves(trials, opts.threads, "wf_game", eval, accept);
        (void)used;

        EstimateSet set;
        for (int k = 0; k < K; ++k) set.per_user.push_back(acc[k].finish(discarded, seed));
        set.sum = acc_sum.finish(discarded, seed);
        out.push_back(std::move(set));
    }
    return out;
}

EstimateSet estimate_ergodic(Method method, const NetworkDims& dims,
                             const PowerProfile& powers, long trials, std::uint64_t seed,
                             const McOptions& opts) {
    switch (method) {
        case Method::IaOptimum:
            return estimate_ia_ergodic_multi(dims, {powers}, trials, seed, opts)
                .optimum.front();
        case Method::IaProjection:
            return estimate_ia_ergodic_multi(dims, {powers}, trials, seed, opts)
                .projection.front();
        case Method::WfGame:
            return estimate_wf_ergodic_multi(dims, {powers}, trials, seed, opts).front();
        case Method::IaBoundThm2:
        case Method::IaProjectionAnalytic:
            throw DomainError("estimate_ergodic: analytic methods have no Monte-Carlo "
                              "estimator; evaluate them directly");
    }
    throw DomainError("estimate_ergodic: unknown method");
}

} // namespace ia
