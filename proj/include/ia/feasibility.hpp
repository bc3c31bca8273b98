#pragma once

#include <string>
#include <vector>

#include "ia/types.hpp"

namespace ia {

// The bilinear alignment conditions u_m^[i]H H_ij v_n^[j] = 0 (i != j)
// expand into N_e = sum_{i!=j} d'_i d_j scalar equations. The free variables
// are Grassmannian coordinates: each precoder column v_n^[j] contributes a
// group of M_j - d_j variables, each suppression column u_m^[i] a group of
// N_i - d'_i variables. Equation (i, j, m, n) touches exactly those two
// groups.
struct EquationSystem {
    struct Equation {
        int rx_user;   // i
        int tx_user;   // j
        int rx_col;    // m, 0-based
        int tx_col;    // n, 0-based
        int tx_group;  // index into group_size
        int rx_group;
    };
    std::vector<Equation> equations;
    std::vector<int> group_size;  // tx groups for all users first, then rx groups
    int num_equations = 0;        // N_e
    int num_variables = 0;        // N_v = sum of group_size
};

// Properness verdict. A system is proper when every subset of equations
// involves at least as many variables as it has members. Proper systems are
// almost surely feasible in practice, but that implication is a heuristic,
// not a theorem; the IA solver is the ground truth for feasibility.
struct ProperReport {
    bool proper = false;
    // Symmetric path: d(N_T - d) + d'(N_R - d') - d d'(K - 1), proper iff >= 0.
    // General path: 0 when proper; otherwise the negated equation shortfall
    // of the witnessed deficient subset.
    long long margin = 0;
    long long num_equations = 0;
    long long num_variables = 0;
    // Improper systems get a witness: equation indices forming a deficient
    // subset (more equations than variables touched). Empty when proper.
    std::vector<int> witness;
    std::string note;
};

ProperReport is_proper_symmetric(int users, int tx_antennas, int rx_antennas,
                                 int streams, int rx_streams);

EquationSystem build_equation_system(const NetworkDims& dims);

// Hall's condition checked via maximum bipartite matching between equations
// and scalar variables (variables in a group are interchangeable, so this is
// a capacitated matching). Equivalent to exhaustive subset enumeration.
ProperReport is_proper_general(const EquationSystem& system);
ProperReport is_proper_general(const NetworkDims& dims);

// Proper (d, d') pairs with 1 <= d <= N_T and d <= d' <= N_R for the
// symmetric network, sorted by (d desc, d' desc). The achievable receive
// diversity order at each point is d' - d + 1.
struct DmtPoint {
    int streams = 0;     // d
    int rx_streams = 0;  // d'
    long long margin = 0;
};
std::vector<DmtPoint> enumerate_dmt_points(int users, int tx_antennas, int rx_antennas);

} // namespace ia
