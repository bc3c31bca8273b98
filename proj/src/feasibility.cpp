#include "ia/feasibility.hpp"

#include <algorithm>
#include <numeric>

#include "ia/errors.hpp"

namespace ia {

namespace {

const char* kHeuristicNote =
    "proper systems are almost surely feasible in practice (heuristic, "
    "not a theorem); run the IA solver to confirm";

std::string base_note(const NetworkDims& dims) {
    std::string note = kHeuristicNote;
    for (int k = 0; k < dims.K; ++k) {
        if (dims.dprime[k] < dims.d[k]) {
            note += "; warning: d' < d for user " + std::to_string(k + 1)
                    + ", rank d is then unachievable";
            break;
        }
    }
    return note;
}

} // namespace

ProperReport is_proper_symmetric(int users, int tx_antennas, int rx_antennas,
                                 int streams, int rx_streams) {
    if (users < 1 || tx_antennas < 1 || rx_antennas < 1 || streams < 1 || rx_streams < 1)
        throw DomainError("is_proper_symmetric: arguments must be positive");
    if (streams > tx_antennas)
        throw DomainError("is_proper_symmetric: d exceeds N_T");
    if (rx_streams > rx_antennas)
        throw DomainError("is_proper_symmetric: d' exceeds N_R");

    const long long d = streams, dp = rx_streams, K = users;
    ProperReport report;
    report.margin = d * (tx_antennas - d) + dp * (rx_antennas - dp) - d * dp * (K - 1);
    report.proper = report.margin >= 0;
    report.num_equations = K * (K - 1) * d * dp;
    report.num_variables = K * (d * (tx_antennas - d) + dp * (rx_antennas - dp));
    report.note = base_note(NetworkDims::symmetric(users, tx_antennas, rx_antennas,
                                                   streams, rx_streams));
    return report;
}

EquationSystem build_equation_system(const NetworkDims& dims) {
    dims.validate();
    EquationSystem sys;

    std::vector<int> tx_group_start(dims.K), rx_group_start(dims.K);
    int next = 0;
    for (int j = 0; j < dims.K; ++j) {
        tx_group_start[j] = next;
        for (int n = 0; n < dims.d[j]; ++n) sys.group_size.push_back(dims.M[j] - dims.d[j]);
        next += dims.d[j];
    }
    for (int i = 0; i < dims.K; ++i) {
        rx_group_start[i] = next;
        for (int m = 0; m < dims.dprime[i]; ++m)
            sys.group_size.push_back(dims.N[i] - dims.dprime[i]);
        next += dims.dprime[i];
    }

    for (int i = 0; i < dims.K; ++i) {
        for (int j = 0; j < dims.K; ++j) {
            if (i == j) continue;
            for (int m = 0; m < dims.dprime[i]; ++m) {
                for (int n = 0; n < dims.d[j]; ++n) {
                    sys.equations.push_back({i, j, m, n,
                                             tx_group_start[j] + n,
                                             rx_group_start[i] + m});
                }
            }
        }
    }
    sys.num_equations = static_cast<int>(sys.equations.size());
    sys.num_variables = std::accumulate(sys.group_size.begin(), sys.group_size.end(), 0);
    return sys;
}

namespace {

// Capacitated bipartite matching: each equation needs one variable slot, a
// group holds group_size slots. Kuhn-style augmenting paths; `visited` marks
// groups, so recursion depth is bounded by the group count.
struct Matcher {
    const EquationSystem& sys;
    std::vector<int> match;                    // equation -> group, -1 if unmatched
    std::vector<int> load;                     // slots used per group
    std::vector<std::vector<int>> assigned;    // group -> equations matched to it
    std::vector<char> visited;

    explicit Matcher(const EquationSystem& s)
        : sys(s),
          match(s.equations.size(), -1),
          load(s.group_size.size(), 0),
          assigned(s.group_size.size()),
          visited(s.group_size.size(), 0) {}

    bool augment(int e) {
        for (int g : {sys.equations[e].tx_group, sys.equations[e].rx_group}) {
            if (visited[g] || sys.group_size[g] == 0) continue;
            visited[g] = 1;
            if (load[g] < sys.group_size[g]) {
                attach(e, g);
                return true;
            }
            for (int other : assigned[g]) {
                if (other == e) continue;
                if (augment(other)) {
                    detach(other, g);
                    attach(e, g);
                    return true;
                }
            }
        }
        return false;
    }

    void attach(int e, int g) {
        match[e] = g;
        ++load[g];
        assigned[g].push_back(e);
    }

    void detach(int e, int g) {
        --load[g];
        assigned[g].erase(std::find(assigned[g].begin(), assigned[g].end(), e));
    }

    int run() {
        int matched = 0;
        for (int e = 0; e < sys.num_equations; ++e) {
            std::fill(visited.begin(), visited.end(), 0);
            if (augment(e)) ++matched;
        }
        return matched;
    }

    // Equations reachable from an unmatched equation by alternating paths.
    // Their touched groups are all saturated and fully claimed by the set, so
    // the set has more equations than variables (Hall witness).
    std::vector<int> witness() {
        std::fill(visited.begin(), visited.end(), 0);
        std::vector<char> in_witness(sys.equations.size(), 0);
        for (int e = 0; e < sys.num_equations; ++e) {
            if (match[e] == -1 && !in_witness[e]) mark(e, in_witness);
        }
        std::vector<int> out;
        for (int e = 0; e < sys.num_equations; ++e)
            if (in_witness[e]) out.push_back(e);
        return out;
    }

    void mark(int e, std::vector<char>& in_witness) {
        in_witness[e] = 1;
        for (int g : {sys.equations[e].tx_group, sys.equations[e].rx_group}) {
            if (visited[g]) continue;
            visited[g] = 1;
            for (int other : assigned[g])
                if (!in_witness[other]) mark(other, in_witness);
        }
    }
};

} // namespace

ProperReport is_proper_general(const EquationSystem& sys) {
    ProperReport report;
    report.num_equations = sys.num_equations;
    report.num_variables = sys.num_variables;
    report.note = kHeuristicNote;

    if (sys.num_equations > sys.num_variables) {
        // The full equation set is already a deficient subset.
        report.proper = false;
        report.margin = sys.num_variables - sys.num_equations;
        report.witness.resize(sys.equations.size());
        std::iota(report.witness.begin(), report.witness.end(), 0);
        return report;
    }

    Matcher matcher(sys);
    const int matched = matcher.run();
    report.margin = matched - sys.num_equations;
    report.proper = matched == sys.num_equations;
    if (!report.proper) report.witness = matcher.witness();
    return report;
}

ProperReport is_proper_general(const NetworkDims& dims) {
    ProperReport report = is_proper_general(build_equation_system(dims));
    report.note = base_note(dims);
    return report;
}

std::vector<DmtPoint> enumerate_dmt_points(int users, int tx_antennas, int rx_antennas) {
    if (users < 1 || tx_antennas < 1 || rx_antennas < 1)
        throw DomainError("enumerate_dmt_points: arguments must be positive");
    std::vector<DmtPoint> points;
    for (int d = tx_antennas; d >= 1; --d) {
        for (int dp = rx_antennas; dp >= d; --dp) {
            const long long margin = static_cast<long long>(d) * (tx_antennas - d)
                                     + static_cast<long long>(dp) * (rx_antennas - dp)
                                     - static_cast<long long>(d) * dp * (users - 1);
            if (margin >= 0) points.push_back({d, dp, margin});
        }
    }
    return points;
}

} // namespace ia
