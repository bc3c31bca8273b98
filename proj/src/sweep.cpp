#include "ia/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>

#include "ia/errors.hpp"
#include "ia/feasibility.hpp"
#include "ia/rates.hpp"

namespace ia {

void SweepSpec::validate() const {
    dims.validate();
    if (snr_db.empty()) throw DomainError("sweep: snr_db grid must be nonempty");
    if (methods.empty()) throw DomainError("sweep: method list must be nonempty");
    if (trials < 1) throw DomainError("sweep: trials must be >= 1");
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i] == methods[j]) throw DomainError("sweep: duplicate method");
}

std::vector<double> default_snr_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(2.5 * i);
    return grid;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

long parse_long(std::string_view s, const char* key) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DomainError(std::string("config: bad integer for ") + key);
    return v;
}

double parse_double(std::string_view s, const char* key) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DomainError(std::string("config: bad number for ") + key);
    return v;
}

std::vector<int> parse_int_list(std::string_view s, const char* key) {
    std::vector<int> out;
    for (const std::string& p : split(s, ','))
        out.push_back(static_cast<int>(parse_long(trim(p), key)));
    return out;
}

std::vector<double> parse_double_list(std::string_view s, const char* key) {
    std::vector<double> out;
    for (const std::string& p : split(s, ','))
        out.push_back(parse_double(trim(p), key));
    return out;
}

} // namespace

std::string serialize_config(const SweepSpec& spec) {
    std::string out;
    out += "K=" + std::to_string(spec.dims.K) + "\n";
    out += "M=" + join_ints(spec.dims.M) + "\n";
    out += "N=" + join_ints(spec.dims.N) + "\n";
    out += "d=" + join_ints(spec.dims.d) + "\n";
    out += "dprime=" + join_ints(spec.dims.dprime) + "\n";
    out += "snr_db=" + join_doubles(spec.snr_db) + "\n";
    out += "methods=";
    for (std::size_t i = 0; i < spec.methods.size(); ++i) {
        if (i) out += ',';
        out += method_token(spec.methods[i]);
    }
    out += "\n";
    out += "trials=" + std::to_string(spec.trials) + "\n";
    out += "seed=" + std::to_string(spec.seed) + "\n";
    out += "solver_max_iters=" + std::to_string(spec.solver.max_iters) + "\n";
    out += "solver_tol=" + format_double(spec.solver.tol) + "\n";
    out += "solver_restarts=" + std::to_string(spec.solver.restarts) + "\n";
    out += "game_max_iters=" + std::to_string(spec.game.max_iters) + "\n";
    out += "game_tol=" + format_double(spec.game.tol) + "\n";
    return out;
}

SweepSpec parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    for (const std::string& raw : split(text, '\n')) {
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw DomainError("config: expected key=value, got '" + std::string(line) + "'");
        const std::string key{trim(line.substr(0, eq))};
        if (kv.count(key)) throw DomainError("config: duplicate key " + key);
        kv[key] = std::string(trim(line.substr(eq + 1)));
    }

    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw DomainError(std::string("config: missing key ") + key);
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_or = [&](const char* key, std::string fallback) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    SweepSpec spec;
    const int K = static_cast<int>(parse_long(take("K"), "K"));
    spec.dims = NetworkDims(K, parse_int_list(take("M"), "M"), parse_int_list(take("N"), "N"),
                            parse_int_list(take("d"), "d"),
                            parse_int_list(take("dprime"), "dprime"));
    spec.snr_db = parse_double_list(take("snr_db"), "snr_db");
    for (const std::string& tok : split(take("methods"), ',')) {
        const auto m = method_from_token(trim(tok));
        if (!m) throw DomainError("config: unknown method '" + tok + "'");
        spec.methods.push_back(*m);
    }
    spec.trials = parse_long(take("trials"), "trials");
    spec.seed = static_cast<std::uint64_t>(parse_long(take("seed"), "seed"));
    spec.solver.max_iters =
        static_cast<int>(parse_long(take_or("solver_max_iters", "10000"), "solver_max_iters"));
    spec.solver.tol = parse_double(take_or("solver_tol", "1e-08"), "solver_tol");
    spec.solver.restarts =
        static_cast<int>(parse_long(take_or("solver_restarts", "1"), "solver_restarts"));
    spec.game.max_iters =
        static_cast<int>(parse_long(take_or("game_max_iters", "500"), "game_max_iters"));
    spec.game.tol = parse_double(take_or("game_tol", "1e-06"), "game_tol");

    if (!kv.empty()) throw DomainError("config: unknown key " + kv.begin()->first);
    spec.validate();
    return spec;
}

namespace {

void append_estimates(std::vector<SweepRow>& rows, double snr, Method method,
                      const EstimateSet& set) {
    for (std::size_t k = 0; k < set.per_user.size(); ++k) {
        SweepRow row;
        row.snr_db = snr;
        row.method = method;
        row.user = static_cast<int>(k) + 1;
        row.rate_bits = set.per_user[k].mean;
        row.ci_halfwidth = set.per_user[k].ci_halfwidth;
        row.trials_used = set.per_user[k].trials_used;
        row.trials_discarded = set.per_user[k].trials_discarded;
        row.has_trials = true;
        rows.push_back(row);
    }
    SweepRow sum;
    sum.snr_db = snr;
    sum.method = method;
    sum.user = 0;
    sum.rate_bits = set.sum.mean;
    sum.ci_halfwidth = set.sum.ci_halfwidth;
    sum.trials_used = set.sum.trials_used;
    sum.trials_discarded = set.sum.trials_discarded;
    sum.has_trials = true;
    rows.push_back(sum);
}

void append_analytic(std::vector<SweepRow>& rows, double snr, Method method,
                     const std::vector<double>& per_user) {
    double total = 0.0;
    for (std::size_t k = 0; k < per_user.size(); ++k) {
        SweepRow row;
        row.snr_db = snr;
        row.method = method;
        row.user = static_cast<int>(k) + 1;
        row.rate_bits = per_user[k];
        rows.push_back(row);
        total += per_user[k];
    }
    SweepRow sum;
    sum.snr_db = snr;
    sum.method = method;
    sum.user = 0;
    sum.rate_bits = total;
    rows.push_back(sum);
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads, bool force) {
    spec.validate();

    const bool any_ia = std::any_of(spec.methods.begin(), spec.methods.end(),
                                    [](Method m) { return m != Method::WfGame; });
    if (any_ia && !force) {
        const ProperReport report = is_proper_general(spec.dims);
        if (!report.proper)
            throw DomainError("sweep: network is improper for IA methods (margin "
                              + std::to_string(report.margin)
                              + "); use force to run anyway");
    }

    std::vector<PowerProfile> profiles;
    for (double snr : spec.snr_db) profiles.push_back(PowerProfile::from_snr_db(spec.dims.K, snr));

    McOptions mc;
    mc.solver = spec.solver;
    mc.game = spec.game;
    mc.threads = threads;

    const bool want_opt = std::count(spec.methods.begin(), spec.methods.end(),
                                     Method::IaOptimum) > 0;
    const bool want_proj = std::count(spec.methods.begin(), spec.methods.end(),
                                      Method::IaProjection) > 0;
    const bool want_wf = std::count(spec.methods.begin(), spec.methods.end(),
                                    Method::WfGame) > 0;

    IaSweepEstimates ia_est;
    if (want_opt || want_proj)
        ia_est = estimate_ia_ergodic_multi(spec.dims, profiles, spec.trials, spec.seed, mc);
    std::vector<EstimateSet> wf_est;
    if (want_wf)
        wf_est = estimate_wf_ergodic_multi(spec.dims, profiles, spec.trials, spec.seed, mc);

    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        const double snr = spec.snr_db[p];
        for (Method method : spec.methods) {
            switch (method) {
                case Method::IaOptimum:
                    append_estimates(rows, snr, method, ia_est.optimum[p]);
                    break;
                case Method::IaProjection:
                    append_estimates(rows, snr, method, ia_est.projection[p]);
                    break;
                case Method::WfGame:
                    append_estimates(rows, snr, method, wf_est[p]);
                    break;
                case Method::IaProjectionAnalytic: {
                    std::vector<double> vals;
                    for (int k = 0; k < spec.dims.K; ++k) {
                        const double rho = profiles[p].stream_snr(spec.dims, k);
                        const int lo = std::min(spec.dims.d[k], spec.dims.dprime[k]);
                        const int hi = std::max(spec.dims.d[k], spec.dims.dprime[k]);
                        vals.push_back(shin_lee_rate(lo, hi, rho));
                    }
                    append_analytic(rows, snr, method, vals);
                    break;
                }
                case Method::IaBoundThm2: {
                    std::vector<double> vals;
                    for (int k = 0; k < spec.dims.K; ++k)
                        vals.push_back(theorem2_bound(spec.dims, profiles[p], k));
                    append_analytic(rows, snr, method, vals);
                    break;
                }
            }
        }
    }
    return rows;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                      bool with_timestamp) {
    std::string out;
    out += "# iakit sweep\n";
    if (with_timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(
            std::chrono::system_clock::now());
        char buf[32];
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        out += std::string("# generated: ") + buf + "\n";
    }
    for (const std::string& line : split(serialize_config(spec), '\n'))
        if (!line.empty()) out += "# " + line + "\n";
    out += "# game_update_order: sequential\n";
    out += "snr_db,method,user,rate_bits,ci_halfwidth,trials_used,trials_discarded\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.snr_db);
        out += ',';
        out += method_token(r.method);
        out += ',';
        out += r.user == 0 ? "sum" : std::to_string(r.user);
        out += ',';
        out += format_double(r.rate_bits);
        out += ',';
        out += format_double(r.ci_halfwidth);
        out += ',';
        if (r.has_trials) {
            out += std::to_string(r.trials_used);
            out += ',';
            out += std::to_string(r.trials_discarded);
        } else {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

} // namespace ia
