#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace vlasov {

using cdouble = std::complex<double>;

// ---------------------------------------------------------------------------
// Bessel functions of integer order.
// ---------------------------------------------------------------------------

// J_n(x) by normalized downward recurrence below the turning point and the
// symmetries J_{-n} = (-1)^n J_n, J_n(-x) = (-1)^n J_n(x).
// Absolute error < 1e-12 for |x| <= 50, |n| <= 80 (holds well beyond).
double bessel_J(int n, double x);

// J_0..J_nmax(x) for x >= 0 in one downward pass; fills out[k] = J_k(x).
// This is the workhorse for the harmonic sums, where all orders are needed
// at a fixed argument.
void bessel_J_array(int nmax, double x, std::vector<double>& out);

// ---------------------------------------------------------------------------
// Plasma dispersion function.
// ---------------------------------------------------------------------------

// Faddeeva function w(z) = exp(-z^2) erfc(-iz). Entire; evaluated by a
// Weideman rational approximation in the central region, the Laplace
// continued fraction far out, and the reflection w(z) = 2 exp(-z^2) - w(-z)
// in the lower half plane.
cdouble faddeeva_w(cdouble z);

// Z(zeta) = i sqrt(pi) w(zeta): the entire continuation of
// (1/sqrt(pi)) \int exp(-t^2)/(t - zeta) dt from Im zeta > 0.
cdouble plasma_Z(cdouble zeta);

// Z'(zeta) = -2 (1 + zeta Z(zeta)).
cdouble plasma_Z_deriv(cdouble zeta);

// ---------------------------------------------------------------------------
// Quadrature.
// ---------------------------------------------------------------------------

// Gauss-Legendre nodes/weights on [a, b]. Deterministic (Newton on the
// recurrence-evaluated Legendre polynomial).
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

enum class PoleHandling { Subtraction, SplitSymmetric };

// Quadrature rule for principal-value integrals P int g(v)/(v - a) dv on the
// span of its nodes. Applied to a pole-free integrand it is plain quadrature.
struct PVQuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    PoleHandling pole_handling = PoleHandling::Subtraction;

    static PVQuadratureRule gauss(int n, double a, double b,
                                  PoleHandling handling = PoleHandling::Subtraction);
    double span_lo() const { return lo_; }
    double span_hi() const { return hi_; }

    double lo_ = 0.0, hi_ = 0.0;
};

// P int_{span} g(v)/(v - pole) dv. The pole must lie strictly inside the
// rule's span; g must be smooth there. Subtraction method:
//   int (g(v)-g(pole))/(v-pole) dv + g(pole) ln|(hi-pole)/(pole-lo)|.
double pv_integral(const std::function<double(double)>& g, double pole,
                   const PVQuadratureRule& rule);

// Complex-valued integrand variant (same pole treatment).
cdouble pv_integral(const std::function<cdouble(double)>& g, double pole,
                    const PVQuadratureRule& rule);

}  // namespace vlasov
