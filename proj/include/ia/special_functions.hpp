#ifndef IAKIT_SPECIAL_FUNCTIONS_HPP
#define IAKIT_SPECIAL_FUNCTIONS_HPP

#include <functional>

namespace ia {

/// Exponential integral of integer order p >= 1,
///
///            inf
///             /   -z x   -p
///   E (z) =  |   e      x    dx,    z > 0,
///    p       /
///            1
///
/// evaluated by the classic series (z <= 1) / continued-fraction (z > 1) split
/// to near machine precision. Throws DomainError for z <= 0 or p < 1.
double exp_integral(int p, double z);

/// e^z E_p(z). Safe for large z where E_p itself underflows.
double exp_integral_scaled(int p, double z);

/// Closed form of the log-weighted gamma-kernel integral
///
///   inf
///    /    a   -mu x
///   |    x   e      ln(1 + x) dx  =  (a! / mu^(a+1)) e^mu [E_1(mu) + ... + E_(a+1)(mu)],
///    /
///    0
///
/// obtained by repeated integration by parts. All terms are positive, so the
/// evaluation is cancellation-free. a >= 0, mu > 0.
double log_kernel_integral(int a, double mu);

/// Same integral by adaptive Gauss-Kronrod quadrature. Independent of the
/// closed form; used to validate it and as a fallback.
double log_kernel_integral_quadrature(int a, double mu);

/// E_p(z) by adaptive quadrature of the defining integral (validation oracle).
double exp_integral_quadrature(int p, double z);

/// Adaptive Gauss7/Kronrod15 quadrature on a finite interval to the requested
/// relative tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol);

} // namespace ia

#endif
