#include "ia/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "ia/errors.hpp"

namespace ia {

namespace {

constexpr int kMaxIter = 400;
constexpr double kEps = 1e-16;
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// Continued fraction for E_p(z), z > 1, modified Lentz. Returns e^z E_p(z).
double expint_cf_scaled(int p, double z) {
    double b = z + p;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double a = -static_cast<double>(i) * (p - 1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h;
    }
    throw NumericalError("exp_integral: continued fraction failed to converge");
}

// Power series for E_p(z), 0 < z <= 1. Returns E_p(z) itself.
double expint_series(int p, double z) {
    const int nm1 = p - 1;
    double ans = nm1 != 0 ? 1.0 / nm1 : -std::log(z) - std::numbers::egamma;
    double fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -z / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -std::numbers::egamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(z) + psi);
        }
        ans += del;
        if (std::abs(del) <= std::abs(ans) * kEps) return ans;
    }
    throw NumericalError("exp_integral: series failed to converge");
}

void check_expint_args(int p, double z) {
    if (p < 1) throw DomainError("exp_integral: order p must be >= 1");
    if (!(z > 0.0)) throw DomainError("exp_integral: argument z must be positive");
}

} // namespace

double exp_integral(int p, double z) {
    check_expint_args(p, z);
    if (z > 1.0) return std::exp(-z) * expint_cf_scaled(p, z);
    return expint_series(p, z);
}

double exp_integral_scaled(int p, double z) {
    check_expint_args(p, z);
    if (z > 1.0) return expint_cf_scaled(p, z);
    return std::exp(z) * expint_series(p, z);
}

double log_kernel_integral(int a, double mu) {
    if (a < 0) throw DomainError("log_kernel_integral: power a must be >= 0");
    if (!(mu > 0.0)) throw DomainError("log_kernel_integral: mu must be positive");
    double sum = 0.0;
    for (int q = 1; q <= a + 1; ++q) sum += exp_integral_scaled(q, mu);
    double fact_over_pow = 1.0 / mu;  // a! / mu^(a+1)
    for (int i = 1; i <= a; ++i) fact_over_pow *= i / mu;
    return fact_over_pow * sum;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss7/Kronrod15 quadrature.

namespace {

// Kronrod-15 abscissae on [0,1] side (symmetric) and weights; Gauss-7 weights
// sit at the odd Kronrod nodes.
constexpr std::array<double, 8> kKronrodX = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kGaussW = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = kKronrodW[7] * f(c);
    double resg = kGaussW[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodX[i];
        const double fsum = f(c - dx) + f(c + dx);
        resk += kKronrodW[i] * fsum;
        if (i % 2 == 1) resg += kGaussW[i / 2] * fsum;
    }
    resk *= h;
    resg *= h;
    return {resk, std::abs(resk - resg)};
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
    // Global strategy: keep a worklist of panels and always split the one
    // with the largest error estimate. A fixed panel budget guarantees
    // termination even when the estimates bottom out at roundoff level,
    // where a per-panel tolerance test can never be satisfied.
    struct Panel {
        double a, b, val, err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    auto make_panel = [&f](double lo, double hi) {
        const PanelResult r = gk15(f, lo, hi);
        return Panel{lo, hi, r.kronrod, r.err};
    };

    std::vector<Panel> heap;
    heap.push_back(make_panel(a, b));
    double total_val = heap[0].val;
    double total_err = heap[0].err;

    constexpr std::size_t kMaxPanels = 4096;
    while (total_err > rel_tol * std::max(std::abs(total_val), kTiny)
           && heap.size() < kMaxPanels) {
        std::pop_heap(heap.begin(), heap.end());
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = make_panel(worst.a, mid);
        const Panel right = make_panel(mid, worst.b);
        total_val += left.val + right.val - worst.val;
        total_err += left.err + right.err - worst.err;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
    }

    // Re-sum from scratch so the answer does not inherit the incremental
    // update drift.
    double result = 0.0;
    for (const Panel& p : heap) result += p.val;
    return result;
}

double exp_integral_quadrature(int p, double z) {
    check_expint_args(p, z);
    // Truncate where the tail is below ~1e-20 of the value.
    const double upper = 1.0 + 55.0 / z;
    auto f = [p, z](double x) { return std::exp(-z * x) * std::pow(x, -p); };
    return integrate_adaptive(f, 1.0, upper, 1e-13);
}

double log_kernel_integral_quadrature(int a, double mu) {
    if (a < 0) throw DomainError("log_kernel_integral: power a must be >= 0");
    if (!(mu > 0.0)) throw DomainError("log_kernel_integral: mu must be positive");
    auto f = [a, mu](double x) {
        return (x > 0.0 ? std::pow(x, a) : (a == 0 ? 1.0 : 0.0)) * std::exp(-mu * x)
               * std::log1p(x);
    };
    // Expand the truncation point until the integrand is negligible relative
    // to its peak.
    const double x_peak = std::max(a / mu, 1e-3);
    const double f_peak = std::max(f(x_peak), kTiny);
    double upper = (a + 55.0) / mu;
    while (f(upper) > 1e-22 * f_peak) upper *= 1.5;
    return integrate_adaptive(f, 0.0, upper, 1e-13);
}

} // namespace ia
