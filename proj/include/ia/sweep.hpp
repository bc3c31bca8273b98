#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ia/monte_carlo.hpp"
#include "ia/types.hpp"

namespace ia {

// Everything a sweep run needs, minus runtime-only knobs (thread count,
// output path). Serializable to a flat key=value config; see serialize_config.
struct SweepSpec {
    NetworkDims dims;
    std::vector<double> snr_db;   // SNR = P_k / sigma^2, equal across users
    std::vector<Method> methods;
    long trials = 2000;
    std::uint64_t seed = 1;
    SolverOptions solver = [] {
        SolverOptions s;
        s.restarts = 1;  // Monte-Carlo context: discard-and-replace handles bad inits
        return s;
    }();
    WfGameOptions game;

    void validate() const;
    bool operator==(const SweepSpec&) const = default;
};

// The default sweep grid: 0 to 30 dB in 2.5 dB steps.
std::vector<double> default_snr_grid();

// Flat key=value config, one pair per line, lists comma-separated, '#'
// comments ignored. parse_config(serialize_config(s)) == s.
std::string serialize_config(const SweepSpec& spec);
SweepSpec parse_config(std::string_view text);

struct SweepRow {
    double snr_db = 0.0;
    Method method = Method::IaOptimum;
    int user = 0;          // 1-based; 0 means the sum-rate row
    double rate_bits = 0.0;
    double ci_halfwidth = 0.0;
    long trials_used = 0;
    long trials_discarded = 0;
    bool has_trials = false;  // false for analytic rows (empty CSV cells)
};

// Runs every (snr, method) cell. Monte-Carlo IA methods share one solver run
// per channel draw across all SNR points (solutions are power-independent),
// which is exactly equivalent to independent per-point estimation with the
// same seed. Throws DomainError for improper dims with IA methods unless
// `force`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1, bool force = false);

// CSV with '#' metadata lines followed by a header and one line per row.
// Layout: snr_db,method,user,rate_bits,ci_halfwidth,trials_used,
// trials_discarded. The timestamp line is omitted when with_timestamp is
// false so that reruns are byte-identical.
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                      bool with_timestamp);

// Shortest round-trip decimal formatting used for every number in the CSV.
std::string format_double(double value);

} // namespace ia
