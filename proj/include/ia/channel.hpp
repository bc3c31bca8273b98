#ifndef IAKIT_CHANNEL_HPP
#define IAKIT_CHANNEL_HPP

#include <cstdint>

#include "ia/types.hpp"

namespace ia {

/// Draws one Rayleigh realization of all K^2 channels, entries i.i.d. CN(0,1)
/// (variance 1/2 per real component). Bit-reproducible for a fixed seed.
ChannelSet draw_channels(const NetworkDims& dims, std::uint64_t seed);

/// Mutual information of user k (bits) for the receiver that processes the full
/// antenna array, treating residual interference as colored Gaussian noise:
///   log2 det(sigma2 I + S + B) - log2 det(sigma2 I + B)
/// with S the desired-signal covariance and B the aggregate interference
/// covariance, both under spatially white per-stream transmit power P_i/d_i.
double mi_optimum(const ChannelSet& channels, const IASolution& solution,
                  const PowerProfile& powers, int user);

/// Mutual information of user k (bits) for the projection receiver that keeps
/// only the interference-free subspace: log2 det(I + rho_k Hbar Hbar^H) with
/// Hbar = U_k^H H_kk V_k and rho_k = P_k/(d_k sigma2). Residual interference is
/// ignored; callers are responsible for alignment quality.
double mi_projection(const ChannelSet& channels, const IASolution& solution,
                     const PowerProfile& powers, int user);

namespace detail {
/// log2 det of a Hermitian positive-definite matrix via Cholesky.
double log2det_hermitian(const CMatrix& a);
}

} // namespace ia

#endif
