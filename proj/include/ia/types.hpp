#ifndef IAKIT_TYPES_HPP
#define IAKIT_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ia/errors.hpp"

namespace ia {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Geometry of a K-user interference network: antenna counts per node and the
/// transmit/receive subspace dimensions each link is operated with. d[k] is the
/// number of spatial streams of user k, dprime[k] the number of interference-free
/// receive dimensions its combiner keeps (dprime > d buys receive diversity).
struct NetworkDims {
    int K = 0;
    std::vector<int> M;       // transmit antennas per user
    std::vector<int> N;       // receive antennas per user
    std::vector<int> d;       // transmit subspace dimension per user
    std::vector<int> dprime;  // receive subspace dimension per user

    NetworkDims() = default;
    NetworkDims(int users, std::vector<int> tx, std::vector<int> rx,
                std::vector<int> streams, std::vector<int> combiner_dims);

    /// All users share (n_t, n_r, d, dprime).
    static NetworkDims symmetric(int users, int n_t, int n_r, int streams, int combiner_dims);

    /// Throws DimensionError unless K >= 2, all entries >= 1, d <= M and dprime <= N.
    void validate() const;

    bool is_symmetric() const;
    bool operator==(const NetworkDims&) const = default;
};

/// Transmit powers and receiver noise variance, both on linear scale.
struct PowerProfile {
    std::vector<double> P;
    double sigma2 = 1.0;

    PowerProfile() = default;
    PowerProfile(std::vector<double> powers, double noise_var);

    /// Equal-power profile with SNR = P/sigma2 given in dB and sigma2 = 1.
    static PowerProfile from_snr_db(int users, double snr_db);

    void validate(int users) const;

    /// Per-stream SNR of user k: P_k / (d_k sigma2).
    double stream_snr(const NetworkDims& dims, int k) const {
        return P.at(static_cast<std::size_t>(k)) / (dims.d.at(static_cast<std::size_t>(k)) * sigma2);
    }
};

/// One realization of all K^2 channel matrices. H(i, j) is the N_i x M_j channel
/// from transmitter j to receiver i, entries i.i.d. CN(0, 1). Immutable after
/// creation; safe to share across threads.
class ChannelSet {
public:
    ChannelSet(NetworkDims dims, std::vector<CMatrix> matrices, std::uint64_t seed);

    const NetworkDims& dims() const { return dims_; }
    std::uint64_t seed() const { return seed_; }

    const CMatrix& H(int rx, int tx) const {
        return matrices_[static_cast<std::size_t>(rx) * static_cast<std::size_t>(dims_.K)
                         + static_cast<std::size_t>(tx)];
    }

private:
    NetworkDims dims_;
    std::vector<CMatrix> matrices_;  // row-major [rx * K + tx]
    std::uint64_t seed_;
};

/// Result of the alternating alignment solver: truncated-unitary precoders V[k]
/// (M_k x d_k) and interference-suppression bases U[k] (N_k x dprime_k).
struct IASolution {
    std::vector<CMatrix> V;
    std::vector<CMatrix> U;
    double residual_leakage = 0.0;  // normalized; see leakage()
    int iterations = 0;
    bool converged = false;
    /// Normalized leakage after every half-iteration (U update, then V update)
    /// of the selected restart. Filled only when SolverOptions::record_trace.
    std::vector<double> leakage_trace;
};

/// A Monte-Carlo mean with 95% normal-approximation confidence half-width.
struct Estimate {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
    long trials_used = 0;
    long trials_discarded = 0;
    std::uint64_t seed = 0;
};

} // namespace ia

#endif
