#pragma once

#include <vector>

#include "ia/types.hpp"

namespace ia {

// Distinct eigenvalues of Phi^{-1} in strictly descending order with their
// multiplicities. Near-coincident values (within 1e-6 relative) are merged,
// since the formula's (mu_i - mu_j) denominators blow up as eigenvalues
// approach each other while the value itself stays continuous.
struct EigProfile {
    std::vector<double> mu;
    std::vector<int> mult;

    int total() const;
    void validate() const;
};

// Canonical profile from the eigenvalues of Phi^{-1} (any order, repeats
// allowed): sorts descending and merges near-equal values.
EigProfile make_eig_profile(std::vector<double> mu_of_phi_inverse);

// Ergodic rate E[log2 det(I + rho Hb Hb^H)] in bits for an rx_streams x
// streams unit-variance complex Gaussian Hb, evaluated by the Shin-Lee
// closed form (sums of exponential integrals). Requires streams <= rx_streams;
// transpose the roles at the call site otherwise (the expectation is
// symmetric in the two dimensions).
double shin_lee_rate(int streams, int rx_streams, double rho);

// Chiani, Win & Shin's single-user ergodic mutual information
// E[log2 det(I_p + H Phi H^H)] for H p x n unit-variance complex Gaussian and
// Phi > 0 with inverse-eigenvalue profile `eig` (n = sum of multiplicities).
// Dimensions are capped at n, p <= 16; catastrophic cancellation in the
// determinant expansion raises NumericalError rather than returning noise.
double chiani_csu(int n, int p, const EigProfile& eig);

// The two per-dimension SNRs entering the ergodic-rate lower bound for one
// user: interference-free receive dimensions see P_k/(d_k sigma^2), the rest
// see the same signal over noise plus total interference power.
struct PsiSpec {
    int streams = 0;       // d_k
    int rx_streams = 0;    // d'_k
    int rx_antennas = 0;   // N_k
    double rho_signal = 0.0;
    double rho_interf = 0.0;

    static PsiSpec from(const NetworkDims& dims, const PowerProfile& powers, int user);
    EigProfile profile() const;
};

// Ergodic-rate lower bound for user k under IA with the optimum receiver:
// chiani_csu(N_k, d_k, Psi_k) with the block-diagonal Psi_k above. Bits.
double theorem2_bound(const NetworkDims& dims, const PowerProfile& powers, int user);

} // namespace ia
