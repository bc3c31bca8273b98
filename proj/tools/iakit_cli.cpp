// iakit command-line front end. Talks to the core library exclusively through
// the C API in iakit.h; everything here is argument plumbing, config-text
// assembly, and CSV post-processing.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iakit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

constexpr const char* kCsvHeader =
    "snr_db,method,user,rate_bits,ci_halfwidth,trials_used,trials_discarded";

int exit_code_for(iakit_status status) {
    switch (status) {
        case IAKIT_OK: return kExitOk;
        case IAKIT_EINVAL: return kExitUsage;
        case IAKIT_ENUMERIC:
        case IAKIT_ENONCONV:
        case IAKIT_EINTERNAL: return kExitNumerical;
    }
    return kExitNumerical;
}

int fail(iakit_status status) {
    std::cerr << "error: " << iakit_last_error() << "\n";
    return exit_code_for(status);
}

struct ManagedString {
    char* ptr = nullptr;
    ~ManagedString() { iakit_string_free(ptr); }
};

std::string join_repeated(const std::string& value, int count) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (i) out += ',';
        out += value;
    }
    return out;
}

int threads_from_env() {
    const char* env = std::getenv("IAKIT_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    return v >= 1 ? static_cast<int>(v) : 1;
}

// Options shared by the analytic / montecarlo / sweep subcommands.
struct SweepArgs {
    int users = 0, tx = 0, rx = 0, streams = 1, rx_streams = 1;
    std::vector<double> snr;
    std::vector<std::string> methods;
    long trials = 2000;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string config_path;
    std::string preset;
    bool force = false;
    bool no_timestamp = false;
    int threads = threads_from_env();

    bool dims_given = false;
};

void add_common_flags(CLI::App* cmd, SweepArgs& args, bool with_preset) {
    auto* users = cmd->add_option("-K,--users", args.users, "number of users");
    cmd->add_option("--tx", args.tx, "transmit antennas per user (symmetric)")->needs(users);
    cmd->add_option("--rx", args.rx, "receive antennas per user (symmetric)")->needs(users);
    cmd->add_option("-d,--streams", args.streams, "streams per user");
    cmd->add_option("--dprime", args.rx_streams, "interference-free receive dimensions");
    cmd->add_option("--snr", args.snr, "SNR grid in dB (default 0:2.5:30)")->delimiter(',');
    cmd->add_option("--methods", args.methods, "methods to evaluate")->delimiter(',');
    cmd->add_option("--trials", args.trials, "Monte-Carlo trials per point");
    cmd->add_option("--seed", args.seed, "top-level RNG seed");
    cmd->add_option("-o,--out", args.out_path, "output CSV path (default stdout)");
    cmd->add_option("--config", args.config_path, "key=value config file; flags override");
    cmd->add_flag("--force", args.force, "run IA methods on improper dimensions");
    cmd->add_flag("--no-timestamp", args.no_timestamp, "omit the timestamp metadata line");
    cmd->add_option("--threads", args.threads,
                    "worker threads (default $IAKIT_THREADS or 1); never changes results");
    if (with_preset)
        cmd->add_option("--preset", args.preset, "figure preset: fig1, fig2 or fig3");
}

// Assembles the flat key=value config the library understands. Starts from
// the config file when given, then lets explicit flags override.
std::string build_config_text(const SweepArgs& args, const CLI::App* cmd,
                              const std::vector<std::string>& default_methods) {
    std::map<std::string, std::string> kv;

    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw std::runtime_error("cannot read config file " + args.config_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::string trimmed = line;
            trimmed.erase(0, trimmed.find_first_not_of(" \t"));
            if (trimmed.empty() || trimmed[0] == '#') continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line without '=': " + line);
            kv[trimmed.substr(0, eq)] = trimmed.substr(eq + 1);
        }
    }

    const auto have = [&](const char* name) { return cmd->count(name) > 0; };
    if (have("--users") || kv.find("K") == kv.end()) {
        if (args.users < 1 || args.tx < 1 || args.rx < 1)
            throw CLI::ValidationError(
                "dimensions", "need -K, --tx and --rx (or a --config/--preset)");
        kv["K"] = std::to_string(args.users);
        kv["M"] = join_repeated(std::to_string(args.tx), args.users);
        kv["N"] = join_repeated(std::to_string(args.rx), args.users);
        kv["d"] = join_repeated(std::to_string(args.streams), args.users);
        kv["dprime"] = join_repeated(std::to_string(args.rx_streams), args.users);
    }
    if (have("--snr") || kv.find("snr_db") == kv.end()) {
        std::ostringstream snr;
        if (args.snr.empty()) {
            for (int i = 0; i <= 12; ++i) snr << (i ? "," : "") << 2.5 * i;
        } else {
            for (std::size_t i = 0; i < args.snr.size(); ++i)
                snr << (i ? "," : "") << args.snr[i];
        }
        kv["snr_db"] = snr.str();
    }
    if (have("--methods") || kv.find("methods") == kv.end()) {
        const auto& methods = args.methods.empty() ? default_methods : args.methods;
        std::string joined;
        for (std::size_t i = 0; i < methods.size(); ++i) {
            if (i) joined += ',';
            joined += methods[i];
        }
        kv["methods"] = joined;
    }
    if (have("--trials") || kv.find("trials") == kv.end())
        kv["trials"] = std::to_string(args.trials);
    if (have("--seed") || kv.find("seed") == kv.end())
        kv["seed"] = std::to_string(args.seed);

    std::string text;
    for (const auto& [key, value] : kv) text += key + "=" + value + "\n";
    return text;
}

int emit_csv(const std::string& csv, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << csv;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open " << out_path << " for writing\n";
        return kExitIo;
    }
    out << csv;
    out.flush();
    if (!out) {
        std::cerr << "error: failed writing " << out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_one_sweep(const std::string& config_text, const SweepArgs& args,
                  const std::string& out_path) {
    iakit_sweep_spec* spec = nullptr;
    iakit_status status = iakit_sweep_spec_parse(config_text.c_str(), &spec);
    if (status != IAKIT_OK) return fail(status);

    ManagedString csv;
    status = iakit_sweep_run_csv(spec, args.threads, args.force ? 1 : 0,
                                 args.no_timestamp ? 0 : 1, &csv.ptr);
    iakit_sweep_spec_destroy(spec);
    if (status != IAKIT_OK) return fail(status);
    return emit_csv(csv.ptr, out_path);
}

// Derives per-run output paths for the two-configuration presets:
// results.csv -> results_k7d2.csv, results_k11d1.csv.
std::string suffixed_path(const std::string& path, const std::string& tag) {
    if (path.empty()) return path;
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + tag;
    return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

struct PresetRun {
    std::string config_text;
    std::string tag;
};

std::vector<PresetRun> preset_runs(const std::string& preset, const SweepArgs& args,
                                   const CLI::App* cmd) {
    auto base = [&](int users, int streams, int rx_streams,
                    const std::string& methods) {
        SweepArgs a = args;
        a.users = users;
        a.tx = 7;
        a.rx = 5;
        a.streams = streams;
        a.rx_streams = rx_streams;
        a.methods.clear();
        std::string cfg = build_config_text(a, cmd, {});
        // build_config_text only fills dims when the flag was passed; force
        // the preset dimensions in.
        std::map<std::string, std::string> kv;
        std::istringstream in(cfg);
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
        kv["K"] = std::to_string(users);
        kv["M"] = join_repeated("7", users);
        kv["N"] = join_repeated("5", users);
        kv["d"] = join_repeated(std::to_string(streams), users);
        kv["dprime"] = join_repeated(std::to_string(rx_streams), users);
        kv["methods"] = methods;
        std::string text;
        for (const auto& [key, value] : kv) text += key + "=" + value + "\n";
        return text;
    };

    if (preset == "fig1")
        return {{base(7, 1, 2,
                      "ia_optimum,ia_projection,ia_bound_thm2,ia_projection_analytic"),
                 ""}};
    if (preset == "fig2")
        return {{base(7, 1, 2, "ia_bound_thm2,ia_projection_analytic"), "k7d2"},
                {base(11, 1, 1, "ia_bound_thm2,ia_projection_analytic"), "k11d1"}};
    if (preset == "fig3")
        return {{base(7, 1, 2, "ia_bound_thm2,ia_projection_analytic,wf_game"), "k7d2"},
                {base(11, 1, 1, "ia_bound_thm2,ia_projection_analytic,wf_game"), "k11d1"}};
    throw CLI::ValidationError("--preset", "unknown preset '" + preset + "'");
}

// ---- feasibility ---------------------------------------------------------

int cmd_feasibility(int users, int tx, int rx, std::optional<int> streams,
                    std::optional<int> rx_streams) {
    if (streams.has_value()) {
        iakit_proper_report report{};
        const iakit_status status =
            iakit_proper_symmetric(users, tx, rx, *streams, *rx_streams, &report);
        if (status != IAKIT_OK) return fail(status);
        std::cout << (report.proper ? "proper" : "improper") << ", margin "
                  << report.margin << "\n"
                  << "equations " << report.num_equations << ", variables "
                  << report.num_variables << "\n";
        return kExitOk;
    }

    int count = 0;
    iakit_status status = iakit_dmt_enumerate(users, tx, rx, nullptr, 0, &count);
    if (status != IAKIT_OK) return fail(status);
    std::vector<iakit_dmt_point> points(static_cast<std::size_t>(std::max(count, 1)));
    status = iakit_dmt_enumerate(users, tx, rx, points.data(), count, &count);
    if (status != IAKIT_OK) return fail(status);

    std::cout << "d,dprime,diversity,margin\n";
    for (int i = 0; i < count; ++i)
        std::cout << points[i].streams << ',' << points[i].rx_streams << ','
                  << points[i].rx_streams - points[i].streams + 1 << ','
                  << points[i].margin << "\n";
    return kExitOk;
}

// ---- solve ----------------------------------------------------------------

int cmd_solve(int users, int tx, int rx, int streams, int rx_streams,
              std::uint64_t channel_seed, std::uint64_t solver_seed, int max_iters,
              double tol, int restarts) {
    iakit_dims* dims = nullptr;
    iakit_status status =
        iakit_dims_create_symmetric(users, tx, rx, streams, rx_streams, &dims);
    if (status != IAKIT_OK) return fail(status);

    iakit_solve_report report{};
    status = iakit_solve(dims, channel_seed, solver_seed, max_iters, tol, restarts, &report);
    iakit_dims_destroy(dims);
    if (status != IAKIT_OK) return fail(status);

    std::cout << "converged: " << (report.converged ? "yes" : "no") << "\n"
              << "residual_leakage: " << report.residual_leakage << "\n"
              << "iterations: " << report.iterations << "\n"
              << "aligned: " << (report.aligned ? "yes" : "no") << "\n"
              << "ranks_ok: " << (report.ranks_ok ? "yes" : "no") << "\n";
    return report.converged ? kExitOk : kExitNumerical;
}

// ---- compare ----------------------------------------------------------------

struct CsvRow {
    std::string snr;
    std::string method;
    std::string user;
    double rate = 0.0;
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const auto end = line.find(',', start);
        if (end == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    bool header_seen = false;
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kCsvHeader)
                throw std::runtime_error(path + ": schema mismatch, expected '"
                                         + kCsvHeader + "'");
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 7)
            throw std::runtime_error(path + ": malformed row '" + line + "'");
        rows.push_back({fields[0], fields[1], fields[2], std::stod(fields[3])});
    }
    if (!header_seen) throw std::runtime_error(path + ": no header row found");
    return rows;
}

void report_method_orderings(const std::string& path, const std::vector<CsvRow>& rows) {
    std::vector<std::string> methods;
    std::vector<std::string> snrs;
    std::map<std::pair<std::string, std::string>, double> sums;  // (method, snr)
    for (const CsvRow& r : rows) {
        if (r.user != "sum") continue;
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        if (std::find(snrs.begin(), snrs.end(), r.snr) == snrs.end()) snrs.push_back(r.snr);
        sums[{r.method, r.snr}] = r.rate;
    }
    std::sort(snrs.begin(), snrs.end(),
              [](const std::string& a, const std::string& b) {
                  return std::stod(a) < std::stod(b);
              });
    for (std::size_t a = 0; a < methods.size(); ++a) {
        for (std::size_t b = a + 1; b < methods.size(); ++b) {
            std::cout << path << ": sum-rate " << methods[a] << " - " << methods[b] << ":";
            int last_sign = 0;
            std::string crossings;
            for (const std::string& snr : snrs) {
                const auto ia = sums.find({methods[a], snr});
                const auto ib = sums.find({methods[b], snr});
                if (ia == sums.end() || ib == sums.end()) continue;
                const double delta = ia->second - ib->second;
                std::cout << ' ' << snr << "dB:" << delta;
                const int sign = delta > 0 ? 1 : (delta < 0 ? -1 : 0);
                if (last_sign != 0 && sign != 0 && sign != last_sign)
                    crossings += (crossings.empty() ? "" : ", ") + snr + " dB";
                if (sign != 0) last_sign = sign;
            }
            std::cout << "\n";
            if (!crossings.empty())
                std::cout << path << ": crossover of " << methods[a] << "/" << methods[b]
                          << " near " << crossings << "\n";
        }
    }
}

int cmd_compare(const std::string& path_a, const std::string& path_b) {
    std::vector<CsvRow> rows_a, rows_b;
    try {
        rows_a = read_csv(path_a);
        rows_b = read_csv(path_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    report_method_orderings(path_a, rows_a);
    if (path_b != path_a) report_method_orderings(path_b, rows_b);

    std::map<std::tuple<std::string, std::string, std::string>, double> b_index;
    for (const CsvRow& r : rows_b) b_index[{r.snr, r.method, r.user}] = r.rate;

    long common = 0;
    double max_delta = 0.0;
    std::string max_key;
    for (const CsvRow& r : rows_a) {
        const auto it = b_index.find({r.snr, r.method, r.user});
        if (it == b_index.end()) continue;
        ++common;
        const double delta = r.rate - it->second;
        std::cout << "delta " << r.snr << "dB " << r.method << " user " << r.user << ": "
                  << delta << "\n";
        if (std::abs(delta) > std::abs(max_delta)) {
            max_delta = delta;
            max_key = r.snr + "dB " + r.method + " user " + r.user;
        }
    }
    if (common == 0) {
        std::cout << "no common rows\n";
    } else if (max_delta == 0.0) {
        std::cout << "all deltas 0 (" << common << " common rows)\n";
    } else {
        std::cout << "max |delta| " << std::abs(max_delta) << " at " << max_key << " ("
                  << common << " common rows)\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interference alignment toolkit (iakit)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(iakit_version()));

    // feasibility
    int f_users = 0, f_tx = 0, f_rx = 0;
    std::optional<int> f_streams, f_rx_streams;
    auto* feas = app.add_subcommand(
        "feasibility", "properness check or DMT table for a symmetric network");
    feas->add_option("users", f_users, "number of users K")->required();
    feas->add_option("tx", f_tx, "transmit antennas")->required();
    feas->add_option("rx", f_rx, "receive antennas")->required();
    feas->add_option("d", f_streams, "streams per user");
    feas->add_option("dprime", f_rx_streams, "interference-free receive dimensions");

    // solve
    int s_users = 0, s_tx = 0, s_rx = 0, s_streams = 1, s_rx_streams = 1;
    int s_max_iters = 10000, s_restarts = 3;
    double s_tol = 1e-8;
    std::uint64_t s_channel_seed = 1, s_solver_seed = 1;
    auto* solve = app.add_subcommand("solve", "run the alignment solver on one draw");
    solve->add_option("users", s_users)->required();
    solve->add_option("tx", s_tx)->required();
    solve->add_option("rx", s_rx)->required();
    solve->add_option("d", s_streams)->required();
    solve->add_option("dprime", s_rx_streams)->required();
    solve->add_option("--channel-seed", s_channel_seed, "channel realization seed");
    solve->add_option("--seed", s_solver_seed, "solver initialization seed");
    solve->add_option("--max-iters", s_max_iters);
    solve->add_option("--tol", s_tol, "normalized leakage tolerance");
    solve->add_option("--restarts", s_restarts);

    // analytic / montecarlo / sweep share flag plumbing
    SweepArgs analytic_args, mc_args, sweep_args;
    auto* analytic = app.add_subcommand("analytic", "closed-form rate curves as CSV");
    add_common_flags(analytic, analytic_args, false);
    auto* montecarlo =
        app.add_subcommand("montecarlo", "Monte-Carlo rate estimates as CSV");
    add_common_flags(montecarlo, mc_args, false);
    auto* sweep = app.add_subcommand("sweep", "full experiment sweep (figure presets)");
    add_common_flags(sweep, sweep_args, true);

    // compare
    std::string cmp_a, cmp_b;
    auto* compare = app.add_subcommand("compare", "diff two sweep CSV files");
    compare->add_option("csv_a", cmp_a)->required();
    compare->add_option("csv_b", cmp_b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (feas->parsed()) {
            if (f_streams.has_value() != f_rx_streams.has_value()) {
                std::cerr << "error: give both d and dprime, or neither\n";
                return kExitUsage;
            }
            return cmd_feasibility(f_users, f_tx, f_rx, f_streams, f_rx_streams);
        }
        if (solve->parsed())
            return cmd_solve(s_users, s_tx, s_rx, s_streams, s_rx_streams, s_channel_seed,
                             s_solver_seed, s_max_iters, s_tol, s_restarts);
        if (analytic->parsed())
            return run_one_sweep(
                build_config_text(analytic_args, analytic,
                                  {"ia_projection_analytic", "ia_bound_thm2"}),
                analytic_args, analytic_args.out_path);
        if (montecarlo->parsed())
            return run_one_sweep(
                build_config_text(mc_args, montecarlo, {"ia_optimum", "ia_projection"}),
                mc_args, mc_args.out_path);
        if (sweep->parsed()) {
            if (!sweep_args.preset.empty()) {
                for (const PresetRun& run : preset_runs(sweep_args.preset, sweep_args, sweep)) {
                    const std::string out = run.tag.empty()
                                                ? sweep_args.out_path
                                                : suffixed_path(sweep_args.out_path, run.tag);
                    const int code = run_one_sweep(run.config_text, sweep_args, out);
                    if (code != kExitOk) return code;
                }
                return kExitOk;
            }
            return run_one_sweep(
                build_config_text(sweep_args, sweep, {"ia_projection_analytic"}),
                sweep_args, sweep_args.out_path);
        }
        if (compare->parsed()) return cmd_compare(cmp_a, cmp_b);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
