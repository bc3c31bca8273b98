#include "ia/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <utility>

#include "ia/errors.hpp"
#include "ia/rng.hpp"

namespace ia {

namespace {

void check_shapes(const ChannelSet& channels, const IASolution& sol) {
    const NetworkDims& dims = channels.dims();
    if (static_cast<int>(sol.V.size()) != dims.K || static_cast<int>(sol.U.size()) != dims.K)
        throw DimensionError("solution has wrong number of users");
    for (int k = 0; k < dims.K; ++k) {
        if (sol.V[k].rows() != dims.M[k] || sol.V[k].cols() != dims.d[k])
            throw DimensionError("V has wrong shape for user " + std::to_string(k + 1));
        if (sol.U[k].rows() != dims.N[k] || sol.U[k].cols() != dims.dprime[k])
            throw DimensionError("U has wrong shape for user " + std::to_string(k + 1));
    }
}

// sum_{i != j} ||H_ij||_F^2 d_j d'_i / (N_i M_j); makes leakage scale-free.
double leakage_normalizer(const ChannelSet& channels) {
    const NetworkDims& dims = channels.dims();
    double den = 0.0;
    for (int i = 0; i < dims.K; ++i)
        for (int j = 0; j < dims.K; ++j) {
            if (i == j) continue;
            den += channels.H(i, j).squaredNorm()
                   * (static_cast<double>(dims.d[j]) * dims.dprime[i])
                   / (static_cast<double>(dims.N[i]) * dims.M[j]);
        }
    return den;
}

bool ranks_ok(const ChannelSet& channels, const IASolution& sol, double tol_rank_rel) {
    const NetworkDims& dims = channels.dims();
    for (int k = 0; k < dims.K; ++k) {
        const CMatrix eff = sol.U[k].adjoint() * channels.H(k, k) * sol.V[k];
        Eigen::JacobiSVD<CMatrix> svd(eff);
        const auto& sv = svd.singularValues();
        if (sv.size() < dims.d[k]) return false;
        if (sv(dims.d[k] - 1) <= tol_rank_rel * sv(0)) return false;
    }
    return true;
}

struct RestartState {
    std::vector<CMatrix> V, U;
    std::vector<CMatrix> T;    // T[i*K+j] = H_ij V_j, receiver-side views
    std::vector<CMatrix> S;    // S[i*K+j] = H_ij^H U_i, transmitter-side views
    std::vector<CMatrix> Qrx;  // interference covariance at receiver i, reused
    std::vector<CMatrix> Qtx;  // reciprocal covariance at transmitter j, reused
    std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>> eig_rx, eig_tx;
};

void init_state(RestartState& st, const NetworkDims& dims) {
    const int K = dims.K;
    st.V.resize(K);
    st.U.resize(K);
    st.T.resize(static_cast<std::size_t>(K) * K);
    st.S.resize(static_cast<std::size_t>(K) * K);
    st.Qrx.resize(K);
    st.Qtx.resize(K);
    st.eig_rx.resize(K);
    st.eig_tx.resize(K);
    for (int i = 0; i < K; ++i) {
        st.U[i].resize(dims.N[i], dims.dprime[i]);
        st.V[i].resize(dims.M[i], dims.d[i]);
        st.Qrx[i].resize(dims.N[i], dims.N[i]);
        st.Qtx[i].resize(dims.M[i], dims.M[i]);
        for (int j = 0; j < K; ++j) {
            if (i == j) continue;
            st.T[static_cast<std::size_t>(i) * K + j].resize(dims.N[i], dims.d[j]);
            st.S[static_cast<std::size_t>(i) * K + j].resize(dims.M[j], dims.dprime[i]);
        }
    }
}

void random_truncated_unitary(CMatrix& out, int rows, int cols, Rng& rng) {
    CMatrix g(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) g(r, c) = rng.complex_gaussian();
    Eigen::HouseholderQR<CMatrix> qr(g);
    out = qr.householderQ() * CMatrix::Identity(rows, cols);
}

} // namespace

double leakage(const ChannelSet& channels, const IASolution& solution) {
    check_shapes(channels, solution);
    const NetworkDims& dims = channels.dims();
    const double den = leakage_normalizer(channels);
    if (den == 0.0) return 0.0;
    double num = 0.0;
    for (int i = 0; i < dims.K; ++i)
        for (int j = 0; j < dims.K; ++j) {
            if (i == j) continue;
            num += (solution.U[i].adjoint() * channels.H(i, j) * solution.V[j]).squaredNorm();
        }
    return num / den;
}

IASolution solve_alternating(const ChannelSet& channels, const SolverOptions& opts) {
    const NetworkDims& dims = channels.dims();
    const int K = dims.K;
    if (opts.max_iters < 1) throw DomainError("solve_alternating: max_iters must be >= 1");
    if (opts.restarts < 1) throw DomainError("solve_alternating: restarts must be >= 1");
    if (!(opts.tol > 0.0)) throw DomainError("solve_alternating: tol must be positive");
    if (!opts.powers.empty() && static_cast<int>(opts.powers.size()) != K)
        throw DimensionError("solve_alternating: powers size does not match user count");

    // Covariance weights: forward uses P_j/d_j, reverse P_i/d'_i.
    std::vector<double> w_fwd(K), w_rev(K);
    for (int k = 0; k < K; ++k) {
        const double p = opts.powers.empty() ? 1.0 : opts.powers[k];
        w_fwd[k] = p / dims.d[k];
        w_rev[k] = p / dims.dprime[k];
    }

    const double den = leakage_normalizer(channels);

    RestartState st;
    init_state(st, dims);

    IASolution best;
    bool have_best = false;

    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_stream(opts.seed, static_cast<std::uint64_t>(restart)));
        for (int j = 0; j < K; ++j) {
            random_truncated_unitary(st.V[j], dims.M[j], dims.d[j], rng);
            for (int i = 0; i < K; ++i)
                if (i != j)
                    st.T[static_cast<std::size_t>(i) * K + j].noalias()
                        = channels.H(i, j) * st.V[j];
        }

        std::vector<double> trace;
        double leak = std::numeric_limits<double>::infinity();
        int halves = 0;
        bool tol_hit = false;

        for (int iter = 0; iter < opts.max_iters && !tol_hit; ++iter) {
            // Forward half: U_i spans the d'_i smallest eigenvectors of Q_i.
            for (int i = 0; i < K; ++i) {
                st.Qrx[i].setZero();
                for (int j = 0; j < K; ++j) {
                    if (i == j) continue;
                    st.Qrx[i].selfadjointView<Eigen::Lower>().rankUpdate(
                        st.T[static_cast<std::size_t>(i) * K + j], w_fwd[j]);
                }
                st.eig_rx[i].compute(st.Qrx[i]);
                if (st.eig_rx[i].info() != Eigen::Success)
                    throw NumericalError("solve_alternating: eigendecomposition failed");
                st.U[i] = st.eig_rx[i].eigenvectors().leftCols(dims.dprime[i]);
            }
            ++halves;
            if (den > 0.0) {
                double num = 0.0;
                for (int i = 0; i < K; ++i)
                    for (int j = 0; j < K; ++j)
                        if (i != j)
                            num += (st.U[i].adjoint()
                                    * st.T[static_cast<std::size_t>(i) * K + j])
                                       .squaredNorm();
                leak = num / den;
            } else {
                leak = 0.0;
            }
            if (opts.record_trace) trace.push_back(leak);
            if (leak < opts.tol) {
                tol_hit = true;
                break;
            }

            // Reverse half: same update in the reciprocal network.
            for (int j = 0; j < K; ++j) {
                st.Qtx[j].setZero();
                for (int i = 0; i < K; ++i) {
                    if (i == j) continue;
                    auto& S_ij = st.S[static_cast<std::size_t>(i) * K + j];
                    S_ij.noalias() = channels.H(i, j).adjoint() * st.U[i];
                    st.Qtx[j].selfadjointView<Eigen::Lower>().rankUpdate(S_ij, w_rev[i]);
                }
                st.eig_tx[j].compute(st.Qtx[j]);
                if (st.eig_tx[j].info() != Eigen::Success)
                    throw NumericalError("solve_alternating: eigendecomposition failed");
                st.V[j] = st.eig_tx[j].eigenvectors().leftCols(dims.d[j]);
                for (int i = 0; i < K; ++i)
                    if (i != j)
                        st.T[static_cast<std::size_t>(i) * K + j].noalias()
                            = channels.H(i, j) * st.V[j];
            }
            ++halves;
            if (den > 0.0) {
                double num = 0.0;
                for (int i = 0; i < K; ++i)
                    for (int j = 0; j < K; ++j)
                        if (i != j)
                            num += (st.S[static_cast<std::size_t>(i) * K + j].adjoint()
                                    * st.V[j])
                                       .squaredNorm();
                leak = num / den;
            } else {
                leak = 0.0;
            }
            if (opts.record_trace) trace.push_back(leak);
            tol_hit = leak < opts.tol;
        }

        IASolution sol;
        sol.V = st.V;
        sol.U = st.U;
        sol.residual_leakage = leak;
        sol.iterations = (halves + 1) / 2;
        sol.converged = tol_hit && ranks_ok(channels, sol, opts.tol_rank_rel);
        sol.leakage_trace = std::move(trace);

        const bool better = !have_best
                            || (sol.converged && !best.converged)
                            || (sol.converged == best.converged
                                && sol.residual_leakage < best.residual_leakage);
        if (better) {
            best = std::move(sol);
            have_best = true;
        }
    }
    return best;
}

AlignmentReport verify_alignment(const ChannelSet& channels, const IASolution& solution,
                                 double tol_align, double tol_rank_rel) {
    check_shapes(channels, solution);
    const NetworkDims& dims = channels.dims();
    AlignmentReport report;
    report.per_link_residuals.assign(static_cast<std::size_t>(dims.K) * dims.K, 0.0);
    double worst = 0.0;
    for (int i = 0; i < dims.K; ++i)
        for (int j = 0; j < dims.K; ++j) {
            if (i == j) continue;
            const double hnorm = channels.H(i, j).norm();
            const double res =
                hnorm > 0.0
                    ? (solution.U[i].adjoint() * channels.H(i, j) * solution.V[j]).norm() / hnorm
                    : 0.0;
            report.per_link_residuals[static_cast<std::size_t>(i) * dims.K + j] = res;
            worst = std::max(worst, res);
        }
    report.aligned = worst < tol_align;
    report.ranks_ok = ranks_ok(channels, solution, tol_rank_rel);
    return report;
}

} // namespace ia
