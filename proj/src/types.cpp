#include "ia/types.hpp"

#include <cmath>
#include <utility>

namespace ia {

NetworkDims::NetworkDims(int users, std::vector<int> tx, std::vector<int> rx,
                         std::vector<int> streams, std::vector<int> combiner_dims)
    : K(users), M(std::move(tx)), N(std::move(rx)), d(std::move(streams)),
      dprime(std::move(combiner_dims)) {
    validate();
}

NetworkDims NetworkDims::symmetric(int users, int n_t, int n_r, int streams, int combiner_dims) {
    const auto k = static_cast<std::size_t>(users > 0 ? users : 0);
    return NetworkDims(users, std::vector<int>(k, n_t), std::vector<int>(k, n_r),
                       std::vector<int>(k, streams), std::vector<int>(k, combiner_dims));
}

void NetworkDims::validate() const {
    if (K < 1) throw DimensionError("NetworkDims: need at least 1 user");
    const auto k = static_cast<std::size_t>(K);
    if (M.size() != k || N.size() != k || d.size() != k || dprime.size() != k)
        throw DimensionError("NetworkDims: per-user lists must have K entries");
    for (std::size_t i = 0; i < k; ++i) {
        if (M[i] < 1 || N[i] < 1 || d[i] < 1 || dprime[i] < 1)
            throw DimensionError("NetworkDims: all entries must be positive");
        if (d[i] > M[i])
            throw DimensionError("NetworkDims: d exceeds transmit antennas for a user");
        if (dprime[i] > N[i])
            throw DimensionError("NetworkDims: dprime exceeds receive antennas for a user");
    }
}

bool NetworkDims::is_symmetric() const {
    for (std::size_t i = 1; i < static_cast<std::size_t>(K); ++i) {
        if (M[i] != M[0] || N[i] != N[0] || d[i] != d[0] || dprime[i] != dprime[0]) return false;
    }
    return true;
}

PowerProfile::PowerProfile(std::vector<double> powers, double noise_var)
    : P(std::move(powers)), sigma2(noise_var) {}

PowerProfile PowerProfile::from_snr_db(int users, double snr_db) {
    const double p = std::pow(10.0, snr_db / 10.0);
    return PowerProfile(std::vector<double>(static_cast<std::size_t>(users), p), 1.0);
}

void PowerProfile::validate(int users) const {
    if (P.size() != static_cast<std::size_t>(users))
        throw DimensionError("PowerProfile: need one power per user");
    for (double p : P)
        if (!(p >= 0.0)) throw DomainError("PowerProfile: powers must be nonnegative");
    if (!(sigma2 > 0.0)) throw DomainError("PowerProfile: sigma2 must be positive");
}

ChannelSet::ChannelSet(NetworkDims dims, std::vector<CMatrix> matrices, std::uint64_t seed)
    : dims_(std::move(dims)), matrices_(std::move(matrices)), seed_(seed) {
    dims_.validate();
    const auto k = static_cast<std::size_t>(dims_.K);
    if (matrices_.size() != k * k) throw DimensionError("ChannelSet: need K^2 matrices");
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const CMatrix& h = matrices_[i * k + j];
            if (h.rows() != dims_.N[i] || h.cols() != dims_.M[j])
                throw DimensionError("ChannelSet: H(i,j) must be N_i x M_j");
        }
    }
}

} // namespace ia
