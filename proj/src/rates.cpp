#include "ia/rates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ia/errors.hpp"
#include "ia/special_functions.hpp"

namespace ia {

namespace {

constexpr int kMaxDim = 16;       // n, p cap in double precision
constexpr double kCondLimit = 1e6;
constexpr double kMergeTol = 1e-6;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

// Gamma-type product Gamma_q(a) = prod_{i=1}^q (a - i)!, the convention that
// makes the constant consistent with the Monte-Carlo oracle (no pi factors).
double log_gamma_product(int q, int a) {
    double s = 0.0;
    for (int i = 1; i <= q; ++i) s += log_factorial(a - i);
    return s;
}

} // namespace

int EigProfile::total() const {
    return std::accumulate(mult.begin(), mult.end(), 0);
}

void EigProfile::validate() const {
    if (mu.empty() || mu.size() != mult.size())
        throw DomainError("EigProfile: mu and mult must be nonempty and equal-length");
    for (std::size_t l = 0; l < mu.size(); ++l) {
        if (!(mu[l] > 0.0) || !std::isfinite(mu[l]))
            throw DomainError("EigProfile: eigenvalues must be positive and finite");
        if (mult[l] < 1) throw DomainError("EigProfile: multiplicities must be positive");
        if (l > 0 && !(mu[l - 1] > mu[l]))
            throw DomainError("EigProfile: eigenvalues must be strictly descending");
    }
}

EigProfile make_eig_profile(std::vector<double> mu_of_phi_inverse) {
    if (mu_of_phi_inverse.empty())
        throw DomainError("make_eig_profile: need at least one eigenvalue");
    std::sort(mu_of_phi_inverse.begin(), mu_of_phi_inverse.end(), std::greater<double>());
    EigProfile p;
    for (double mu : mu_of_phi_inverse) {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw DomainError("make_eig_profile: eigenvalues must be positive and finite");
        if (!p.mu.empty() && p.mu.back() - mu < kMergeTol * p.mu.back()) {
            ++p.mult.back();
        } else {
            p.mu.push_back(mu);
            p.mult.push_back(1);
        }
    }
    p.validate();
    return p;
}

double shin_lee_rate(int streams, int rx_streams, double rho) {
    const int d = streams, dp = rx_streams;
    if (d < 1) throw DomainError("shin_lee_rate: d must be >= 1");
    if (d > dp)
        throw DomainError("shin_lee_rate: d > d' (transpose the dimensions; the "
                          "expectation is symmetric)");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw DomainError("shin_lee_rate: rho must be positive and finite");

    const double z = 1.0 / rho;
    // Scaled exponential integrals e^z E_p(z); the e^{1/rho} prefactor is
    // absorbed here so small rho cannot overflow.
    const int max_order = dp - d + 2 * (d - 1) + 1;
    std::vector<double> se(max_order + 1);
    for (int p = 1; p <= max_order; ++p) se[p] = exp_integral_scaled(p, z);

    double total = 0.0;
    for (int k = 0; k <= d - 1; ++k) {
        for (int l = 0; l <= k; ++l) {
            for (int m = 0; m <= 2 * l; ++m) {
                const double coeff = ((m % 2 == 0) ? 1.0 : -1.0) * factorial(2 * l)
                                     * factorial(dp - d + m)
                                     / (std::pow(2.0, 2 * k - m) * factorial(l)
                                        * factorial(m) * factorial(dp - d + l))
                                     * binom(2 * k - 2 * l, k - l)
                                     * binom(2 * l + 2 * (dp - d), 2 * l - m);
                double esum = 0.0;
                for (int p = 1; p <= dp - d + m + 1; ++p) esum += se[p];
                total += coeff * esum;
            }
        }
    }
    return total * std::numbers::log2e;
}

namespace {

// Signed log-magnitude determinant of a small dense matrix: equilibrate rows
// and columns, LU-factor, and accumulate logs so huge entry ranges (extreme
// eigenvalue spreads) cannot overflow.
struct LogDet {
    double log_mag;  // log |det|, -inf when singular
    int sign;        // -1, 0, +1
};

LogDet log_det(Eigen::MatrixXd m) {
    const auto n = m.rows();
    double log_scale = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        const double s = m.row(r).cwiseAbs().maxCoeff();
        if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        m.row(r) /= s;
        log_scale += std::log(s);
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        const double s = m.col(c).cwiseAbs().maxCoeff();
        if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        m.col(c) /= s;
        log_scale += std::log(s);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    double log_mag = log_scale;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = lu.matrixLU()(i, i);
        if (u == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        if (u < 0.0) sign = -sign;
        log_mag += std::log(std::abs(u));
    }
    return {log_mag, sign};
}

} // namespace

double chiani_csu(int n, int p, const EigProfile& eig_in) {
    if (n < 1 || p < 1) throw DomainError("chiani_csu: n and p must be >= 1");
    if (n > kMaxDim || p > kMaxDim)
        throw DomainError("chiani_csu: dimensions capped at 16 in double precision");

    // Canonicalize defensively so permuted or near-duplicate profiles give
    // the same answer.
    if (eig_in.mu.empty() || eig_in.mu.size() != eig_in.mult.size())
        throw DomainError("chiani_csu: mu and mult must be nonempty and equal-length");
    std::vector<double> flat;
    for (std::size_t l = 0; l < eig_in.mu.size(); ++l) {
        if (eig_in.mult[l] < 1)
            throw DomainError("chiani_csu: multiplicities must be positive");
        for (int c = 0; c < eig_in.mult[l]; ++c) flat.push_back(eig_in.mu[l]);
    }
    const EigProfile eig = make_eig_profile(std::move(flat));
    if (eig.total() != n)
        throw DomainError("chiani_csu: multiplicities must sum to n");

    const int L = static_cast<int>(eig.mu.size());
    const int n_min = std::min(n, p);

    // Row i of R^(k) belongs to eigenvalue block e_i with offset a_i.
    std::vector<int> e(n), a(n);
    {
        int row = 0;
        for (int l = 0; l < L; ++l) {
            for (int c = 0; c < eig.mult[l]; ++c, ++row) {
                e[row] = l;
                a[row] = eig.mult[l] - 1 - c;  // sum_{k<=e_i} m_k - i, 0-based
            }
        }
    }

    // log |K| and its sign; mu are descending so the difference products are
    // positive.
    double log_const = -log_gamma_product(n_min, p);
    for (int l = 0; l < L; ++l) {
        log_const += p * eig.mult[l] * std::log(eig.mu[l]);
        log_const -= log_gamma_product(eig.mult[l], eig.mult[l]);
    }
    for (int l = 0; l < L; ++l)
        for (int l2 = l + 1; l2 < L; ++l2)
            log_const -= static_cast<double>(eig.mult[l]) * eig.mult[l2]
                         * std::log(eig.mu[l] - eig.mu[l2]);
    const int const_sign = (p * (n - n_min)) % 2 == 0 ? 1 : -1;

    // Entries shared by all R^(k): only column k swaps the plain integral for
    // the log-kernel one.
    Eigen::MatrixXd base(n, n);
    Eigen::MatrixXd logcol(n, n_min);  // log-kernel integrals per (row, k)
    for (int i = 0; i < n; ++i) {
        const double mu = eig.mu[e[i]];
        const double row_sign = a[i] % 2 == 0 ? 1.0 : -1.0;
        for (int j = 0; j < n_min; ++j) {
            const int power = p - n_min + j + a[i];  // x^power under the integral
            base(i, j) = row_sign * std::exp(log_factorial(power)
                                             - (power + 1) * std::log(mu));
            logcol(i, j) = row_sign * log_kernel_integral(power, mu);
        }
        for (int j = n_min; j < n; ++j) {
            const int nj = n - (j + 1);  // n - j with 1-based j
            base(i, j) = nj >= a[i] ? std::exp(log_factorial(nj) - log_factorial(nj - a[i])
                                               + (nj - a[i]) * std::log(mu))
                                    : 0.0;
        }
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(base(i, j)))
                throw NumericalError("chiani_csu: matrix entry overflowed");
        for (int j = 0; j < n_min; ++j)
            if (!std::isfinite(logcol(i, j)))
                throw NumericalError("chiani_csu: matrix entry overflowed");
    }

    // Sum of K det(R^(k)) with all magnitudes carried in logs; the relative
    // conditioning of the signed sum is the cancellation detector.
    std::vector<double> term_log(n_min);
    std::vector<int> term_sign(n_min);
    Eigen::MatrixXd r(n, n);
    for (int k = 0; k < n_min; ++k) {
        r = base;
        r.col(k) = logcol.col(k);
        const LogDet det = log_det(r);
        term_log[k] = log_const + det.log_mag;
        term_sign[k] = const_sign * det.sign;
    }
    const double max_log = *std::max_element(term_log.begin(), term_log.end());
    if (!std::isfinite(max_log)) {
        if (max_log < 0.0) return 0.0;  // all terms vanished
        throw NumericalError("chiani_csu: determinant overflowed");
    }
    double signed_sum = 0.0, abs_sum = 0.0;
    for (int k = 0; k < n_min; ++k) {
        const double t = term_sign[k] * std::exp(term_log[k] - max_log);
        signed_sum += t;
        abs_sum += std::abs(t);
    }
    if (signed_sum <= 0.0 || abs_sum > kCondLimit * signed_sum)
        throw NumericalError("chiani_csu: catastrophic cancellation in the "
                             "determinant expansion; result not trustworthy");
    const double log_nats = max_log + std::log(signed_sum);
    if (log_nats > 700.0) throw NumericalError("chiani_csu: result overflowed");
    return std::exp(log_nats) * std::numbers::log2e;
}

PsiSpec PsiSpec::from(const NetworkDims& dims, const PowerProfile& powers, int user) {
    dims.validate();
    powers.validate(dims.K);
    if (user < 0 || user >= dims.K) throw DomainError("PsiSpec: user index out of range");
    PsiSpec spec;
    spec.streams = dims.d[user];
    spec.rx_streams = dims.dprime[user];
    spec.rx_antennas = dims.N[user];
    double interf = 0.0;
    for (int i = 0; i < dims.K; ++i)
        if (i != user) interf += powers.P[i];
    const double pk = powers.P[user];
    if (!(pk > 0.0)) throw DomainError("PsiSpec: user power must be positive");
    spec.rho_signal = pk / (spec.streams * powers.sigma2);
    spec.rho_interf = pk / (spec.streams * (powers.sigma2 + interf));
    return spec;
}

EigProfile PsiSpec::profile() const {
    std::vector<double> inv;
    for (int i = 0; i < rx_streams; ++i) inv.push_back(1.0 / rho_signal);
    for (int i = 0; i < rx_antennas - rx_streams; ++i) inv.push_back(1.0 / rho_interf);
    return make_eig_profile(std::move(inv));
}

double theorem2_bound(const NetworkDims& dims, const PowerProfile& powers, int user) {
    const PsiSpec spec = PsiSpec::from(dims, powers, user);
    return chiani_csu(spec.rx_antennas, spec.streams, spec.profile());
}

} // namespace ia
