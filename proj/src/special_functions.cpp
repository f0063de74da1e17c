#include "vlasov/special_functions.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace vlasov {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

// ---------------------------------------------------------------------------
// Bessel
// ---------------------------------------------------------------------------

namespace {

// Downward (Miller) recurrence from a start order well above both n and x,
// normalized with J_0 + 2 J_2 + 2 J_4 + ... = 1. Stable for all regimes we
// touch; the oscillatory region n < x is neutrally stable, the decay region
// n > x strongly damps seed error.
int miller_start(int nmax, double x) {
    double m = std::max<double>(nmax, x);
    return static_cast<int>(m) + 2 * static_cast<int>(std::sqrt(40.0 + m)) + 40;
}

void bessel_miller(int nmax, double x, std::vector<double>& out) {
    // pre: x > 0, nmax >= 0
    int start = miller_start(nmax, x);
    out.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    double jp = 0.0;       // J_{k+1} (seed)
    double jc = 1e-300;    // J_k (arbitrary tiny seed)
    double norm = 0.0;     // accumulates J_0 + 2 sum J_{2m}
    for (int k = start; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 <= nmax) out[static_cast<std::size_t>(k - 1)] = jc;
        if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jc : 2.0 * jc;
        if (std::abs(jc) > 1e250) {  // rescale to avoid overflow
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    for (auto& v : out) v /= norm;
}

}  // namespace

void bessel_J_array(int nmax, double x, std::vector<double>& out) {
    if (!(x >= 0.0) || nmax < 0) throw std::invalid_argument("bessel_J_array: need x >= 0, nmax >= 0");
    if (x == 0.0) {
        out.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
        out[0] = 1.0;
        return;
    }
    bessel_miller(nmax, x, out);
}

double bessel_J(int n, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_J: non-finite argument");
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2 != 0) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0) sign = -sign;
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    static thread_local std::vector<double> buf;
    bessel_miller(n, x, buf);
    return sign * buf[static_cast<std::size_t>(n)];
}

// ---------------------------------------------------------------------------
// Faddeeva / plasma Z
// ---------------------------------------------------------------------------

namespace {

// Weideman (1994) rational approximation, upper half plane, moderate |z|.
// Coefficients are computed once from samples of exp(-t^2)(L^2+t^2) on the
// mapped grid t = L tan(theta/2).
constexpr int kWeidemanN = 48;
std::vector<double> g_weideman_a;
double g_weideman_L = 0.0;
std::once_flag g_weideman_once;

void weideman_init() {
    const int N = kWeidemanN;
    const int M = 2 * N;
    const int M2 = 2 * M;
    const double L = std::sqrt(N / std::sqrt(2.0));
    std::vector<double> f(static_cast<std::size_t>(M2), 0.0);
    // f[0] corresponds to the excluded endpoint theta = -pi (t = -inf).
    for (int k = -M + 1; k <= M - 1; ++k) {
        double theta = k * kPi / M;
        double t = L * std::tan(0.5 * theta);
        double val = std::exp(-t * t) * (L * L + t * t);
        f[static_cast<std::size_t>(k + M)] = val;
    }
    // a = Re(FFT(fftshift(f)))/M2, keep indices 1..N, reversed.
    std::vector<double> shifted(static_cast<std::size_t>(M2));
    for (int i = 0; i < M2; ++i) shifted[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((i + M) % M2)];
    g_weideman_a.assign(kWeidemanN, 0.0);
    for (int k = 1; k <= N; ++k) {
        double re = 0.0;
        for (int n = 0; n < M2; ++n)
            re += shifted[static_cast<std::size_t>(n)] * std::cos(2.0 * kPi * k * n / M2);
        g_weideman_a[static_cast<std::size_t>(N - k)] = re / M2;
    }
    g_weideman_L = L;
}

cdouble faddeeva_upper(cdouble z) {
    // pre: Im z >= 0
    double az2 = std::norm(z);
    if (az2 >= 110.0) {
        // Laplace continued fraction, excellent for large |z|.
        const int depth = 14;
        cdouble t = 0.0;
        for (int k = depth; k >= 1; --k) t = (0.5 * k) / (z - t);
        return cdouble(0.0, 1.0 / kSqrtPi) / (z - t);
    }
    std::call_once(g_weideman_once, weideman_init);
    const double L = g_weideman_L;
    cdouble iz = cdouble(-z.imag(), z.real());
    cdouble denom = L - iz;
    cdouble Z = (L + iz) / denom;
    cdouble p = 0.0;
    for (double a : g_weideman_a) p = p * Z + a;
    return 2.0 * p / (denom * denom) + (1.0 / kSqrtPi) / denom;
}

}  // namespace

cdouble faddeeva_w(cdouble z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("faddeeva_w: non-finite argument");
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    // Reflection into the upper half plane: w(z) = 2 exp(-z^2) - w(-z).
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cdouble plasma_Z(cdouble zeta) { return cdouble(0.0, kSqrtPi) * faddeeva_w(zeta); }

cdouble plasma_Z_deriv(cdouble zeta) { return -2.0 * (1.0 + zeta * plasma_Z(zeta)); }

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = xm - xl * x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = xm + xl * x;
        double w = 2.0 * xl / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

// ---------------------------------------------------------------------------
// Principal value
// ---------------------------------------------------------------------------

PVQuadratureRule PVQuadratureRule::gauss(int n, double a, double b, PoleHandling handling) {
    PVQuadratureRule r;
    gauss_legendre(n, a, b, r.nodes, r.weights);
    r.pole_handling = handling;
    r.lo_ = a;
    r.hi_ = b;
    return r;
}

namespace {

template <class T>
T pv_impl(const std::function<T(double)>& g, double pole, const PVQuadratureRule& rule) {
    const double lo = rule.span_lo(), hi = rule.span_hi();
    if (!(pole > lo && pole < hi))
        throw std::invalid_argument("pv_integral: pole outside quadrature span");
    const T gp = g(pole);
    if (rule.pole_handling == PoleHandling::Subtraction) {
        T acc{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double v = rule.nodes[i];
            double d = v - pole;
            // The subtracted integrand extends continuously to g'(pole) at the
            // node closest to the pole; Gauss nodes never hit it exactly, and
            // the guard below only fires on degenerate spans.
            if (d == 0.0) continue;
            acc += rule.weights[i] * (g(v) - gp) / d;
        }
        return acc + gp * std::log((hi - pole) / (pole - lo));
    }
    // SplitSymmetric: reflect around the pole; the symmetric window
    // [pole-h, pole+h] contributes int_0^h (g(p+u)-g(p-u))/u du, the
    // remainder is pole-free plain quadrature on a dedicated rule.
    const double h = std::min(pole - lo, hi - pole);
    std::vector<double> xs, ws;
    int half = std::max<int>(16, static_cast<int>(rule.nodes.size()) / 2);
    gauss_legendre(half, 0.0, h, xs, ws);
    T acc{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double u = xs[i];
        acc += ws[i] * (g(pole + u) - g(pole - u)) / u;
    }
    std::vector<double> xr, wr;
    if (pole - lo > h) {
        gauss_legendre(half, lo, pole - h, xr, wr);
        for (std::size_t i = 0; i < xr.size(); ++i) acc += wr[i] * g(xr[i]) / (xr[i] - pole);
    }
    if (hi - pole > h) {
        gauss_legendre(half, pole + h, hi, xr, wr);
        for (std::size_t i = 0; i < xr.size(); ++i) acc += wr[i] * g(xr[i]) / (xr[i] - pole);
    }
    return acc;
}

}  // namespace

double pv_integral(const std::function<double(double)>& g, double pole,
                   const PVQuadratureRule& rule) {
    return pv_impl<double>(g, pole, rule);
}

cdouble pv_integral(const std::function<cdouble(double)>& g, double pole,
                    const PVQuadratureRule& rule) {
    return pv_impl<cdouble>(g, pole, rule);
}

}  // namespace vlasov
