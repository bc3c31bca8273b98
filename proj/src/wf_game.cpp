#include "ia/wf_game.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ia/channel.hpp"
#include "ia/errors.hpp"

namespace ia {

CMatrix waterfill_best_response(const CMatrix& H, const CMatrix& R_interf_plus_noise,
                                double P) {
    if (H.rows() != R_interf_plus_noise.rows()
        || R_interf_plus_noise.rows() != R_interf_plus_noise.cols())
        throw DimensionError("waterfill_best_response: shape mismatch");
    if (!(P > 0.0)) throw DomainError("waterfill_best_response: power must be positive");

    Eigen::LLT<CMatrix> llt(R_interf_plus_noise);
    if (llt.info() != Eigen::Success)
        throw NumericalError("waterfill_best_response: covariance not positive definite");

    // Effective modes come from H^H R^{-1} H = G^H G with G the whitened
    // channel.
    const CMatrix G = llt.matrixL().solve(H);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(G.adjoint() * G);
    if (eig.info() != Eigen::Success)
        throw NumericalError("waterfill_best_response: eigendecomposition failed");

    const Eigen::VectorXd lambda = eig.eigenvalues();
    const double lambda_max = lambda.maxCoeff();
    const int m = static_cast<int>(lambda.size());
    if (!(lambda_max > 0.0)) return CMatrix::Zero(m, m);

    std::vector<int> active;
    double level_hi = 0.0;
    for (int i = 0; i < m; ++i) {
        if (lambda(i) > 1e-12 * lambda_max) {
            active.push_back(i);
            level_hi = std::max(level_hi, 1.0 / lambda(i));
        }
    }
    level_hi += P;

    auto poured = [&](double level) {
        double total = 0.0;
        for (int i : active) total += std::max(0.0, level - 1.0 / lambda(i));
        return total;
    };
    double lo = 0.0, hi = level_hi;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (poured(mid) < P ? lo : hi) = mid;
    }
    const double level = 0.5 * (lo + hi);

    Eigen::VectorXd q = Eigen::VectorXd::Zero(m);
    for (int i : active) q(i) = std::max(0.0, level - 1.0 / lambda(i));
    return eig.eigenvectors() * q.asDiagonal() * eig.eigenvectors().adjoint();
}

WfGameOutcome run_wf_game(const ChannelSet& channels, const PowerProfile& powers,
                          const WfGameOptions& opts) {
    const NetworkDims& dims = channels.dims();
    powers.validate(dims.K);
    if (opts.max_iters < 1) throw DomainError("run_wf_game: max_iters must be >= 1");
    if (!(opts.tol > 0.0)) throw DomainError("run_wf_game: tol must be positive");

    WfGameOutcome out;
    out.Q.resize(dims.K);

    for (int k = 0; k < dims.K; ++k) {
        const CMatrix noise =
            powers.sigma2 * CMatrix::Identity(dims.N[k], dims.N[k]);
        out.Q[k] = waterfill_best_response(channels.H(k, k), noise, powers.P[k]);
    }

    for (int sweep = 1; sweep <= opts.max_iters; ++sweep) {
        double worst = 0.0;
        for (int k = 0; k < dims.K; ++k) {
            CMatrix R = powers.sigma2 * CMatrix::Identity(dims.N[k], dims.N[k]);
            for (int i = 0; i < dims.K; ++i) {
                if (i == k) continue;
                const CMatrix HQ = channels.H(k, i) * out.Q[i];
                R.noalias() += HQ * channels.H(k, i).adjoint();
            }
            CMatrix next = waterfill_best_response(channels.H(k, k), R, powers.P[k]);
            worst = std::max(worst, (next - out.Q[k]).norm() / powers.P[k]);
            out.Q[k] = std::move(next);
        }
        out.iterations = sweep;
        if (worst < opts.tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::vector<double> wf_user_rates(const ChannelSet& channels,
                                  const std::vector<CMatrix>& Q, double sigma2) {
    const NetworkDims& dims = channels.dims();
    if (static_cast<int>(Q.size()) != dims.K)
        throw DimensionError("wf_user_rates: covariance count does not match users");
    if (!(sigma2 > 0.0)) throw DomainError("wf_user_rates: sigma2 must be positive");

    std::vector<double> rates(dims.K);
    for (int k = 0; k < dims.K; ++k) {
        CMatrix interf = sigma2 * CMatrix::Identity(dims.N[k], dims.N[k]);
        for (int i = 0; i < dims.K; ++i) {
            if (i == k) continue;
            const CMatrix HQ = channels.H(k, i) * Q[i];
            interf.noalias() += HQ * channels.H(k, i).adjoint();
        }
        CMatrix full = interf;
        const CMatrix HQ = channels.H(k, k) * Q[k];
        full.noalias() += HQ * channels.H(k, k).adjoint();
        rates[k] = detail::log2det_hermitian(full) - detail::log2det_hermitian(interf);
    }
    return rates;
}

} // namespace ia
