#include "iakit.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ia/errors.hpp"
#include "ia/feasibility.hpp"
#include "ia/rates.hpp"
#include "ia/solver.hpp"
#include "ia/sweep.hpp"
#include "ia/channel.hpp"

namespace {

thread_local std::string g_last_error;

// Translates C++ exceptions to status codes at the ABI boundary; nothing may
// throw across it.
template <class F>
iakit_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return IAKIT_OK;
    } catch (const ia::NonconvergenceError& e) {
        g_last_error = e.what();
        return IAKIT_ENONCONV;
    } catch (const ia::NumericalError& e) {
        g_last_error = e.what();
        return IAKIT_ENUMERIC;
    } catch (const ia::DimensionError& e) {
        g_last_error = e.what();
        return IAKIT_EINVAL;
    } catch (const ia::DomainError& e) {
        g_last_error = e.what();
        return IAKIT_EINVAL;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return IAKIT_EINTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return IAKIT_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return IAKIT_EINTERNAL;
    }
}

iakit_status invalid(const char* message) {
    g_last_error = message;
    return IAKIT_EINVAL;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void fill_report(const ia::ProperReport& in, iakit_proper_report* out) {
    out->proper = in.proper ? 1 : 0;
    out->margin = in.margin;
    out->num_equations = in.num_equations;
    out->num_variables = in.num_variables;
}

} // namespace

struct iakit_dims {
    ia::NetworkDims dims;
};

struct iakit_sweep_spec {
    ia::SweepSpec spec;
};

extern "C" {

const char* iakit_version(void) { return IAKIT_VERSION_STRING; }

const char* iakit_last_error(void) { return g_last_error.c_str(); }

void iakit_string_free(char* s) { delete[] s; }

iakit_status iakit_dims_create(int users, const int* tx_antennas, const int* rx_antennas,
                               const int* streams, const int* rx_streams,
                               iakit_dims** out) {
    if (!out || !tx_antennas || !rx_antennas || !streams || !rx_streams || users < 1)
        return invalid("iakit_dims_create: null argument or non-positive user count");
    *out = nullptr;
    return guarded([&] {
        auto take = [users](const int* p) { return std::vector<int>(p, p + users); };
        ia::NetworkDims dims(users, take(tx_antennas), take(rx_antennas), take(streams),
                             take(rx_streams));
        dims.validate();
        *out = new iakit_dims{std::move(dims)};
    });
}

iakit_status iakit_dims_create_symmetric(int users, int tx_antennas, int rx_antennas,
                                         int streams, int rx_streams, iakit_dims** out) {
    if (!out) return invalid("iakit_dims_create_symmetric: null output");
    *out = nullptr;
    return guarded([&] {
        ia::NetworkDims dims =
            ia::NetworkDims::symmetric(users, tx_antennas, rx_antennas, streams, rx_streams);
        dims.validate();
        *out = new iakit_dims{std::move(dims)};
    });
}

void iakit_dims_destroy(iakit_dims* dims) { delete dims; }

iakit_status iakit_proper_symmetric(int users, int tx_antennas, int rx_antennas,
                                    int streams, int rx_streams,
                                    iakit_proper_report* out) {
    if (!out) return invalid("iakit_proper_symmetric: null output");
    return guarded([&] {
        fill_report(ia::is_proper_symmetric(users, tx_antennas, rx_antennas, streams,
                                            rx_streams),
                    out);
    });
}

iakit_status iakit_proper_general(const iakit_dims* dims, iakit_proper_report* out) {
    if (!dims || !out) return invalid("iakit_proper_general: null argument");
    return guarded([&] { fill_report(ia::is_proper_general(dims->dims), out); });
}

iakit_status iakit_dmt_enumerate(int users, int tx_antennas, int rx_antennas,
                                 iakit_dmt_point* out_points, int capacity,
                                 int* out_count) {
    if (!out_count) return invalid("iakit_dmt_enumerate: null count output");
    return guarded([&] {
        const auto points = ia::enumerate_dmt_points(users, tx_antennas, rx_antennas);
        *out_count = static_cast<int>(points.size());
        if (!out_points) return;
        if (capacity < static_cast<int>(points.size()))
            throw ia::DimensionError("iakit_dmt_enumerate: capacity too small");
        for (std::size_t i = 0; i < points.size(); ++i) {
            out_points[i].streams = points[i].streams;
            out_points[i].rx_streams = points[i].rx_streams;
            out_points[i].margin = points[i].margin;
        }
    });
}

iakit_status iakit_solve(const iakit_dims* dims, unsigned long long channel_seed,
                         unsigned long long solver_seed, int max_iters, double tol,
                         int restarts, iakit_solve_report* out) {
    if (!dims || !out) return invalid("iakit_solve: null argument");
    return guarded([&] {
        const ia::ChannelSet channels = ia::draw_channels(dims->dims, channel_seed);
        ia::SolverOptions opts;
        opts.max_iters = max_iters;
        opts.tol = tol;
        opts.restarts = restarts;
        opts.seed = solver_seed;
        const ia::IASolution sol = ia::solve_alternating(channels, opts);
        const ia::AlignmentReport rep = ia::verify_alignment(channels, sol);
        out->residual_leakage = sol.residual_leakage;
        out->iterations = sol.iterations;
        out->converged = sol.converged ? 1 : 0;
        out->aligned = rep.aligned ? 1 : 0;
        out->ranks_ok = rep.ranks_ok ? 1 : 0;
    });
}

iakit_status iakit_shin_lee_rate(int streams, int rx_streams, double rho,
                                 double* out_bits) {
    if (!out_bits) return invalid("iakit_shin_lee_rate: null output");
    return guarded([&] { *out_bits = ia::shin_lee_rate(streams, rx_streams, rho); });
}

iakit_status iakit_chiani_csu(int n, int p, const double* mu, const int* mult, int L,
                              double* out_bits) {
    if (!out_bits || !mu || !mult || L < 1)
        return invalid("iakit_chiani_csu: null argument or empty profile");
    return guarded([&] {
        // Canonicalize (sort, merge near-duplicates) so callers really can
        // pass eigenvalues in any order.
        std::vector<double> flat;
        long total = 0;
        for (int l = 0; l < L; ++l) {
            if (mult[l] < 1) throw ia::DomainError("iakit_chiani_csu: multiplicities must be positive");
            total += mult[l];
            if (total > 1024) throw ia::DomainError("iakit_chiani_csu: profile too large");
            flat.insert(flat.end(), static_cast<std::size_t>(mult[l]), mu[l]);
        }
        *out_bits = ia::chiani_csu(n, p, ia::make_eig_profile(std::move(flat)));
    });
}

iakit_status iakit_theorem2_bound(const iakit_dims* dims, const double* powers,
                                  double sigma2, int user, double* out_bits) {
    if (!dims || !powers || !out_bits) return invalid("iakit_theorem2_bound: null argument");
    return guarded([&] {
        ia::PowerProfile profile(
            std::vector<double>(powers, powers + dims->dims.K), sigma2);
        *out_bits = ia::theorem2_bound(dims->dims, profile, user);
    });
}

iakit_status iakit_sweep_spec_parse(const char* text, iakit_sweep_spec** out) {
    if (!text || !out) return invalid("iakit_sweep_spec_parse: null argument");
    *out = nullptr;
    return guarded([&] { *out = new iakit_sweep_spec{ia::parse_config(text)}; });
}

iakit_status iakit_sweep_spec_serialize(const iakit_sweep_spec* spec, char** out_text) {
    if (!spec || !out_text) return invalid("iakit_sweep_spec_serialize: null argument");
    *out_text = nullptr;
    return guarded([&] { *out_text = copy_string(ia::serialize_config(spec->spec)); });
}

void iakit_sweep_spec_destroy(iakit_sweep_spec* spec) { delete spec; }

iakit_status iakit_sweep_run_csv(const iakit_sweep_spec* spec, int threads, int force,
                                 int with_timestamp, char** out_csv) {
    if (!spec || !out_csv) return invalid("iakit_sweep_run_csv: null argument");
    *out_csv = nullptr;
    return guarded([&] {
        const auto rows = ia::run_sweep(spec->spec, threads, force != 0);
        *out_csv = copy_string(ia::sweep_csv(spec->spec, rows, with_timestamp != 0));
    });
}

} // extern "C"
