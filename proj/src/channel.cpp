#include "ia/channel.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "ia/rng.hpp"

namespace ia {

ChannelSet draw_channels(const NetworkDims& dims, std::uint64_t seed) {
    dims.validate();
    const auto k = static_cast<std::size_t>(dims.K);
    std::vector<CMatrix> mats;
    mats.reserve(k * k);
    // One substream per (rx, tx) link so that single matrices can be re-derived
    // in isolation if ever needed.
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            Rng rng(derive_stream(seed, i * k + j));
            CMatrix h(dims.N[i], dims.M[j]);
            for (Eigen::Index c = 0; c < h.cols(); ++c)
                for (Eigen::Index r = 0; r < h.rows(); ++r)
                    h(r, c) = rng.complex_gaussian();
            mats.push_back(std::move(h));
        }
    }
    return ChannelSet(dims, std::move(mats), seed);
}

namespace detail {

double log2det_hermitian(const CMatrix& a) {
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("log2det: matrix not positive definite");
    double ld = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) ld += std::log2(l(i, i).real());
    return 2.0 * ld;
}

} // namespace detail

static void check_solution_shapes(const ChannelSet& channels, const IASolution& solution) {
    const NetworkDims& dims = channels.dims();
    const auto k = static_cast<std::size_t>(dims.K);
    if (solution.V.size() != k || solution.U.size() != k)
        throw DimensionError("IASolution: need one V and one U per user");
    for (std::size_t i = 0; i < k; ++i) {
        if (solution.V[i].rows() != dims.M[i] || solution.V[i].cols() != dims.d[i])
            throw DimensionError("IASolution: V_k must be M_k x d_k");
        if (solution.U[i].rows() != dims.N[i] || solution.U[i].cols() != dims.dprime[i])
            throw DimensionError("IASolution: U_k must be N_k x dprime_k");
    }
}

double mi_optimum(const ChannelSet& channels, const IASolution& solution,
                  const PowerProfile& powers, int user) {
    const NetworkDims& dims = channels.dims();
    check_solution_shapes(channels, solution);
    powers.validate(dims.K);
    if (user < 0 || user >= dims.K) throw DomainError("mi_optimum: user index out of range");
    const auto k = static_cast<std::size_t>(user);

    const int n = dims.N[k];
    CMatrix interference = powers.sigma2 * CMatrix::Identity(n, n);
    for (std::size_t i = 0; i < static_cast<std::size_t>(dims.K); ++i) {
        if (i == k) continue;
        const CMatrix t = channels.H(static_cast<int>(k), static_cast<int>(i)) * solution.V[i];
        interference.noalias() += (powers.P[i] / dims.d[i]) * t * t.adjoint();
    }
    const CMatrix t0 = channels.H(static_cast<int>(k), static_cast<int>(k)) * solution.V[k];
    const CMatrix total = interference + (powers.P[k] / dims.d[k]) * t0 * t0.adjoint();
    return detail::log2det_hermitian(total) - detail::log2det_hermitian(interference);
}

double mi_projection(const ChannelSet& channels, const IASolution& solution,
                     const PowerProfile& powers, int user) {
    const NetworkDims& dims = channels.dims();
    check_solution_shapes(channels, solution);
    powers.validate(dims.K);
    if (user < 0 || user >= dims.K)
        throw DomainError("mi_projection: user index out of range");
    const auto k = static_cast<std::size_t>(user);

    const CMatrix hbar = solution.U[k].adjoint()
                         * channels.H(static_cast<int>(k), static_cast<int>(k)) * solution.V[k];
    const double rho = powers.stream_snr(dims, static_cast<int>(k));
    const int dp = dims.dprime[k];
    const CMatrix m = CMatrix::Identity(dp, dp) + rho * hbar * hbar.adjoint();
    return detail::log2det_hermitian(m);
}

} // namespace ia
