#include "vlasov/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlasov/special_functions.hpp"

namespace vlasov {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kSqrt2 = 1.41421356237309504880;

thread_local int t_last_auto_nmax = 0;
}  // namespace

int last_auto_n_max() { return t_last_auto_nmax; }

DispersionEvaluator DispersionEvaluator::make(const EquilibriumDistribution& eq,
                                              const WaveConfig& wave, const GridSpec& spec,
                                              Continuation cont, DispersionMethod method,
                                              int n_max) {
    wave.validate();
    if (n_max < 0 || n_max > kHarmonicCap)
        throw std::invalid_argument("DispersionEvaluator: n_max out of range");
    DispersionEvaluator ev;
    ev.equilibrium = eq;
    ev.wave = wave;
    ev.n_max = n_max;
    ev.grid_spec = spec;
    ev.continuation = cont;
    ev.method = method;
    ev.grid = VelocityGrid::make(spec, eq);
    ev.reduced = reduce_along_k(eq, wave);
    return ev;
}

// ---------------------------------------------------------------------------
// epsilon_0
// ---------------------------------------------------------------------------

namespace {

// Closed form: 1 + (omega_p^2/k^2) sum_i w_i (1 + zeta_i Z(zeta_i)) / sigma_i^2,
// zeta_i = (z/k - u_i) / (sqrt(2) sigma_i). Entire in z; equals the defining
// integral for Im z > 0, i.e. this IS the plus continuation.
cdouble eps0_closed_plus(const DispersionEvaluator& ev, cdouble z) {
    double k = ev.wave.k();
    cdouble c = z / k;
    cdouble acc = 0.0;
    for (const auto& comp : ev.reduced.components) {
        cdouble zeta = (c - comp.mean) / (kSqrt2 * comp.sigma);
        acc += comp.weight * (1.0 + zeta * plasma_Z(zeta)) / (comp.sigma * comp.sigma);
    }
    return 1.0 + ev.wave.omega_p * ev.wave.omega_p / (k * k) * acc;
}

// Defining-minus-plus jump for Im z < 0: eps0_def = eps0_plus + 2 pi i etabar(z/k)/k.
cdouble eps0_jump(const DispersionEvaluator& ev, cdouble z) {
    double k = ev.wave.k();
    return cdouble(0.0, kTwoPi) * eta_bar_c(ev.reduced, ev.wave, z / k) / k;
}

cdouble eps0_quadrature(const DispersionEvaluator& ev, cdouble z) {
    double k = ev.wave.k();
    cdouble vstar = z / k;
    const auto& g = *ev.grid;
    // The reduced problem reuses the v_par nodes; span is symmetric.
    double L = g.cut_par;
    double guard = 6.0 * (2.0 * L / static_cast<double>(g.n_par()));

    cdouble integral;  // int etabar(v)/(v - vstar) dv
    if (std::abs(vstar.imag()) > guard) {
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < g.n_par(); ++j)
            acc += g.wpar[j] * eta_bar(ev.reduced, ev.wave, g.vpar[j]) / (g.vpar[j] - vstar);
        integral = acc;
    } else {
        // Pole-subtracted form, with etabar continued to the complex pole.
        cdouble ep = eta_bar_c(ev.reduced, ev.wave, vstar);
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < g.n_par(); ++j) {
            cdouble num = eta_bar(ev.reduced, ev.wave, g.vpar[j]) - ep;
            acc += g.wpar[j] * num / (g.vpar[j] - vstar);
        }
        if (vstar.imag() != 0.0) {
            acc += ep * (std::log(L - vstar) - std::log(-L - vstar));
        } else {
            // On-axis principal value; the iota pi residue term is added by the
            // continuation logic below.
            acc += ep * std::log((L - vstar.real()) / (vstar.real() + L));
        }
        integral = acc;
    }
    cdouble eps = 1.0 - integral / k;  // note int etabar/(kv - z) dv = integral / k
    if (ev.continuation == Continuation::Plus) {
        if (z.imag() < 0.0)
            eps -= eps0_jump(ev, z);  // def -> plus
        else if (z.imag() == 0.0)
            eps -= cdouble(0.0, kPi) * eta_bar_c(ev.reduced, ev.wave, vstar) / k;
    }
    return eps;
}

}  // namespace

cdouble epsilon0(const DispersionEvaluator& ev, cdouble z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("epsilon0: non-finite z");
    if (ev.wave.omega_p == 0.0) return 1.0;
    if (ev.continuation == Continuation::None && z.imag() == 0.0)
        throw std::invalid_argument("epsilon0: z on the branch cut requires Plus continuation");
    bool closed = ev.method != DispersionMethod::Quadrature;
    if (closed) {
        cdouble plus = eps0_closed_plus(ev, z);
        if (ev.continuation == Continuation::Plus || z.imag() > 0.0) return plus;
        return plus + eps0_jump(ev, z);
    }
    return eps0_quadrature(ev, z);
}

// ---------------------------------------------------------------------------
// epsilon (magnetized)
// ---------------------------------------------------------------------------

namespace {

struct HarmonicTermContext {
    const DispersionEvaluator* ev;
    std::vector<std::vector<double>> jtab;  // per v_perp node: J_0..J_qmax(a)
    int qmax = 0;
    double guard = 0.0;

    double j(std::size_t ip, int q) const {
        int aq = q < 0 ? -q : q;
        if (aq > qmax) return 0.0;
        double v = jtab[ip][static_cast<std::size_t>(aq)];
        return (q < 0 && aq % 2 != 0) ? -v : v;
    }
};

HarmonicTermContext make_context(const DispersionEvaluator& ev) {
    HarmonicTermContext ctx;
    ctx.ev = &ev;
    const auto& g = *ev.grid;
    double amax = ev.wave.omega_0 > 0.0 ? ev.wave.k_perp * g.cut_perp / ev.wave.omega_0 : 0.0;
    ctx.qmax = static_cast<int>(amax + 12.0 * std::cbrt(amax + 2.0) + 24.0);
    ctx.qmax = std::max(ctx.qmax, kHarmonicCap + 2);
    ctx.jtab.resize(g.n_perp());
    for (std::size_t ip = 0; ip < g.n_perp(); ++ip) {
        double a = ev.wave.omega_0 > 0.0 ? ev.wave.k_perp * g.vperp[ip] / ev.wave.omega_0 : 0.0;
        bessel_J_array(ctx.qmax, a, ctx.jtab[ip]);
    }
    ctx.guard = 6.0 * (2.0 * g.cut_par / static_cast<double>(g.n_par()));
    return ctx;
}

// Perpendicular-propagation branch: denominators z - n omega_0 only.
cdouble epsilon_perp_branch(const HarmonicTermContext& ctx, cdouble z, int& n_used) {
    const auto& ev = *ctx.ev;
    const auto& g = *ev.grid;
    // v_par column integrals of eta_perp, independent of the harmonic.
    std::vector<double> col(g.n_perp(), 0.0);
    for (std::size_t ip = 0; ip < g.n_perp(); ++ip)
        for (std::size_t jp = 0; jp < g.n_par(); ++jp)
            col[ip] += g.wpar[jp] *
                       eval_eta_components(ev.equilibrium, ev.wave, g.vperp[ip], g.vpar[jp]).perp;
    cdouble acc = 1.0;
    int limit = ev.n_max > 0 ? ev.n_max : kHarmonicCap;
    int tiny_streak = 0;
    int n = 1;
    for (; n <= limit; ++n) {
        double red = 0.0;
        for (std::size_t ip = 0; ip < g.n_perp(); ++ip) {
            double jfac = ctx.j(ip, n) * (ctx.j(ip, n + 1) + ctx.j(ip, n - 1));
            if (jfac == 0.0) continue;
            red += g.wperp[ip] * g.vperp[ip] * jfac * col[ip];
        }
        // +n and -n terms: under n -> -n the Bessel product flips sign and the
        // denominator becomes z + n omega_0.
        cdouble term = kPi * red *
                       (1.0 / (z - static_cast<double>(n) * ev.wave.omega_0) -
                        1.0 / (z + static_cast<double>(n) * ev.wave.omega_0));
        acc += term;
        if (ev.n_max == 0) {
            if (std::abs(term) < 1e-12 * std::max(1.0, std::abs(acc))) {
                if (++tiny_streak >= 2) break;
            } else {
                tiny_streak = 0;
            }
        }
    }
    n_used = std::min(n, limit);
    return acc;
}

// One harmonic's parallel integral column for fixed v_perp:
//   S = int c_n(v_par) / (z - n w0 - kpar v_par) dv_par
// with c_n = eta_par J_n + eta_perp (J_{n-1}+J_{n+1})/2, continued per the
// evaluator's continuation setting.
struct ParallelIntegrals {
    cdouble s_par;   // int eta_par-shape / denom
    cdouble s_perp;  // int eta_perp-shape / denom
};

// Closed-form (plasma Z) route; inherently the plus continuation.
ParallelIntegrals parallel_closed(const DispersionEvaluator& ev, std::size_t ip, cdouble vstar) {
    const auto& g = *ev.grid;
    double vperp = g.vperp[ip];
    double pref = ev.wave.omega_p * ev.wave.omega_p / (ev.wave.k() * ev.wave.k());
    double kpar = ev.wave.k_par;
    cdouble acc_par = 0.0, acc_perp = 0.0;
    for (const auto& comp : ev.equilibrium.components) {
        double n2 = std::exp(-0.5 * vperp * vperp / (comp.s_perp * comp.s_perp)) /
                    (kTwoPi * comp.s_perp * comp.s_perp);
        double dn2 = -vperp / (comp.s_perp * comp.s_perp) * n2;
        cdouble zeta = (vstar - comp.drift) / (kSqrt2 * comp.s_par);
        cdouble Z = plasma_Z(zeta);
        acc_par += comp.weight * n2 * (1.0 + zeta * Z) / (comp.s_par * comp.s_par);
        acc_perp += comp.weight * dn2 * (-Z / (kSqrt2 * comp.s_par * kpar));
    }
    return {pref * acc_par, pref * ev.wave.k_perp * acc_perp};
}

// Quadrature route with pole subtraction and explicit Landau corrections.
ParallelIntegrals parallel_quadrature(const DispersionEvaluator& ev,
                                      const HarmonicTermContext& ctx, std::size_t ip,
                                      cdouble vstar) {
    const auto& g = *ev.grid;
    double vperp = g.vperp[ip];
    double kpar = ev.wave.k_par;
    double L = g.cut_par;
    cdouble ipar = 0.0, iperp = 0.0;  // int shape/(v - vstar) dv
    if (std::abs(vstar.imag()) > ctx.guard) {
        for (std::size_t jp = 0; jp < g.n_par(); ++jp) {
            EtaValues e = eval_eta_components(ev.equilibrium, ev.wave, vperp, g.vpar[jp]);
            cdouble d = g.wpar[jp] / (g.vpar[jp] - vstar);
            ipar += e.par * d;
            iperp += e.perp * d;
        }
    } else {
        cdouble ep_par = eta_par_c(ev.equilibrium, ev.wave, vperp, vstar);
        cdouble ep_perp = eta_perp_c(ev.equilibrium, ev.wave, vperp, vstar);
        for (std::size_t jp = 0; jp < g.n_par(); ++jp) {
            EtaValues e = eval_eta_components(ev.equilibrium, ev.wave, vperp, g.vpar[jp]);
            cdouble d = g.wpar[jp] / (g.vpar[jp] - vstar);
            ipar += (e.par - ep_par) * d;
            iperp += (e.perp - ep_perp) * d;
        }
        cdouble logs = (vstar.imag() != 0.0)
                           ? std::log(L - vstar) - std::log(-L - vstar)
                           : cdouble(std::log((L - vstar.real()) / (vstar.real() + L)), 0.0);
        ipar += ep_par * logs;
        iperp += ep_perp * logs;
    }
    // int shape/(z_n - kpar v) dv = -(1/kpar) int shape/(v - vstar) dv
    cdouble s_par = -ipar / kpar;
    cdouble s_perp = -iperp / kpar;
    if (ev.continuation == Continuation::Plus) {
        if (vstar.imag() < 0.0) {
            s_par -= kTwoPi * cdouble(0.0, 1.0) / kpar * eta_par_c(ev.equilibrium, ev.wave, vperp, vstar);
            s_perp -= kTwoPi * cdouble(0.0, 1.0) / kpar * eta_perp_c(ev.equilibrium, ev.wave, vperp, vstar);
        } else if (vstar.imag() == 0.0) {
            s_par -= kPi * cdouble(0.0, 1.0) / kpar * eta_par_c(ev.equilibrium, ev.wave, vperp, vstar);
            s_perp -= kPi * cdouble(0.0, 1.0) / kpar * eta_perp_c(ev.equilibrium, ev.wave, vperp, vstar);
        }
    }
    return {s_par, s_perp};
}

// Full harmonic term 2 pi int v dv_perp J_n c_n-column.
cdouble harmonic_term(const DispersionEvaluator& ev, const HarmonicTermContext& ctx, int n,
                      cdouble z) {
    const auto& g = *ev.grid;
    cdouble vstar = (z - static_cast<double>(n) * ev.wave.omega_0) / ev.wave.k_par;
    bool closed = ev.method != DispersionMethod::Quadrature;
    cdouble acc = 0.0;
    for (std::size_t ip = 0; ip < g.n_perp(); ++ip) {
        double jn = ctx.j(ip, n);
        double jm = 0.5 * (ctx.j(ip, n - 1) + ctx.j(ip, n + 1));
        if (jn == 0.0 && jm == 0.0) continue;
        ParallelIntegrals s = closed ? parallel_closed(ev, ip, vstar)
                                     : parallel_quadrature(ev, ctx, ip, vstar);
        acc += g.wperp[ip] * g.vperp[ip] * (jn * (jn * s.s_par + jm * s.s_perp));
    }
    return kTwoPi * acc;
}

// Defining value from the plus value below the axis (ClosedForm route):
// subtract the per-harmonic jump.
cdouble harmonic_jump(const DispersionEvaluator& ev, const HarmonicTermContext& ctx, int n,
                      cdouble z) {
    const auto& g = *ev.grid;
    cdouble vstar = (z - static_cast<double>(n) * ev.wave.omega_0) / ev.wave.k_par;
    cdouble acc = 0.0;
    for (std::size_t ip = 0; ip < g.n_perp(); ++ip) {
        double jn = ctx.j(ip, n);
        double jm = 0.5 * (ctx.j(ip, n - 1) + ctx.j(ip, n + 1));
        if (jn == 0.0 && jm == 0.0) continue;
        cdouble cn = eta_par_c(ev.equilibrium, ev.wave, g.vperp[ip], vstar) * jn +
                     eta_perp_c(ev.equilibrium, ev.wave, g.vperp[ip], vstar) * jm;
        acc += g.wperp[ip] * g.vperp[ip] * jn * cn;
    }
    // plus = def - (2 pi i / kpar) * 2 pi * acc  =>  jump = plus - def
    return -kTwoPi * kTwoPi * cdouble(0.0, 1.0) / ev.wave.k_par * acc;
}

}  // namespace

cdouble epsilon(const DispersionEvaluator& ev, cdouble z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("epsilon: non-finite z");
    if (ev.wave.omega_p == 0.0) return 1.0;
    if (ev.wave.omega_0 == 0.0) return epsilon0(ev, z);

    HarmonicTermContext ctx = make_context(ev);
    if (ev.wave.k_par == 0.0) {
        int used = 0;
        cdouble val = epsilon_perp_branch(ctx, z, used);
        t_last_auto_nmax = used;
        return val;
    }
    if (ev.continuation == Continuation::None && z.imag() == 0.0)
        throw std::invalid_argument("epsilon: z on the branch cut requires Plus continuation");

    bool closed = ev.method != DispersionMethod::Quadrature;
    // ClosedForm yields the plus value; convert to the defining value when
    // requested below the axis.
    bool want_def_fixup = closed && ev.continuation == Continuation::None && z.imag() < 0.0;

    cdouble acc = 1.0;
    int limit = ev.n_max > 0 ? ev.n_max : kHarmonicCap;
    int tiny_streak = 0;
    int n = 0;
    for (; n <= limit; ++n) {
        cdouble term = harmonic_term(ev, ctx, n, z);
        if (n > 0) term += harmonic_term(ev, ctx, -n, z);
        if (want_def_fixup) {
            term -= harmonic_jump(ev, ctx, n, z);
            if (n > 0) term -= harmonic_jump(ev, ctx, -n, z);
        }
        acc += term;
        if (ev.n_max == 0 && n > 0) {
            if (std::abs(term) < 1e-12 * std::max(1.0, std::abs(acc))) {
                if (++tiny_streak >= 2) break;
            } else {
                tiny_streak = 0;
            }
        }
    }
    t_last_auto_nmax = std::min(n, limit);
    return acc;
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

namespace {

cdouble eval_dispersion(const DispersionEvaluator& ev, cdouble z) {
    return ev.wave.omega_0 > 0.0 ? epsilon(ev, z) : epsilon0(ev, z);
}

// Winding number of eps along the rectangle boundary, with adaptive
// refinement of the argument increments.
int boundary_winding(const DispersionEvaluator& ev, const RootRegion& r, double boundary_tol) {
    std::vector<cdouble> corners = {
        {r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cdouble a = corners[static_cast<std::size_t>(e)];
        cdouble b = corners[static_cast<std::size_t>((e + 1) % 4)];
        const int n0 = 24;
        struct Seg {
            double t0, t1;
            cdouble f0, f1;
            int depth;
        };
        std::vector<Seg> stack;
        std::vector<cdouble> fs(n0 + 1);
        for (int i = 0; i <= n0; ++i) {
            double t = i / static_cast<double>(n0);
            fs[static_cast<std::size_t>(i)] = eval_dispersion(ev, a + t * (b - a));
        }
        for (int i = n0 - 1; i >= 0; --i)
            stack.push_back({i / static_cast<double>(n0), (i + 1) / static_cast<double>(n0),
                             fs[static_cast<std::size_t>(i)], fs[static_cast<std::size_t>(i + 1)], 0});
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            if (std::abs(s.f0) < boundary_tol || std::abs(s.f1) < boundary_tol)
                throw std::runtime_error(
                    "find_roots: |eps| below boundary tolerance on the region contour; adjust the region");
            double darg = std::arg(s.f1 / s.f0);
            if (std::abs(darg) > 0.5 * kPi && s.depth < 24) {
                double tm = 0.5 * (s.t0 + s.t1);
                cdouble fm = eval_dispersion(ev, a + tm * (b - a));
                stack.push_back({s.t0, tm, s.f0, fm, s.depth + 1});
                stack.push_back({tm, s.t1, fm, s.f1, s.depth + 1});
            } else {
                total += darg;
            }
        }
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

struct NewtonResult {
    cdouble z;
    double residual;
    bool converged;
};

NewtonResult newton_polish(const DispersionEvaluator& ev, cdouble z0, const RootSearchOptions& opts) {
    cdouble z = z0;
    for (int it = 0; it < opts.max_newton_iter; ++it) {
        cdouble f = eval_dispersion(ev, z);
        if (std::abs(f) < opts.residual_tol) return {z, std::abs(f), true};
        double h = 1e-6 * std::max(1.0, std::abs(z));
        cdouble fp = eval_dispersion(ev, z + h) - eval_dispersion(ev, z - h);
        cdouble df = fp / (2.0 * h);
        if (std::abs(df) == 0.0) break;
        cdouble step = f / df;
        // Damp wild steps out of the search scale.
        double cap = 0.5 * std::max(1.0, std::abs(z));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    }
    cdouble f = eval_dispersion(ev, z);
    return {z, std::abs(f), std::abs(f) < opts.residual_tol};
}

void subdivide(const DispersionEvaluator& ev, const RootRegion& r, const RootSearchOptions& opts,
               int depth, std::vector<DispersionRoot>& roots, std::vector<cdouble>& unconverged) {
    int count;
    try {
        count = boundary_winding(ev, r, opts.boundary_tol);
    } catch (const std::runtime_error&) {
        if (depth == 0) throw;  // user-level region touches a zero
        // A sub-cell boundary ran over a zero: nudge the split instead.
        RootRegion r2 = r;
        double eps_re = 0.017 * (r.re_hi - r.re_lo);
        double eps_im = 0.013 * (r.im_hi - r.im_lo);
        r2.re_lo -= eps_re;
        r2.re_hi += eps_re;
        r2.im_lo -= eps_im;
        r2.im_hi += eps_im;
        count = boundary_winding(ev, r2, 0.1 * opts.boundary_tol);
    }
    if (count == 0) return;
    double diag = std::hypot(r.re_hi - r.re_lo, r.im_hi - r.im_lo);
    cdouble center(0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi));
    if (count == 1 || diag < 1e-3 || depth >= 28) {
        NewtonResult nr = newton_polish(ev, center, opts);
        if (nr.converged) {
            roots.push_back({nr.z, nr.residual, count});
        } else {
            unconverged.push_back(center);
        }
        return;
    }
    double rm = 0.5 * (r.re_lo + r.re_hi);
    double im = 0.5 * (r.im_lo + r.im_hi);
    subdivide(ev, {r.re_lo, rm, r.im_lo, im}, opts, depth + 1, roots, unconverged);
    subdivide(ev, {rm, r.re_hi, r.im_lo, im}, opts, depth + 1, roots, unconverged);
    subdivide(ev, {r.re_lo, rm, im, r.im_hi}, opts, depth + 1, roots, unconverged);
    subdivide(ev, {rm, r.re_hi, im, r.im_hi}, opts, depth + 1, roots, unconverged);
}

}  // namespace

RootSearchResult find_roots(const DispersionEvaluator& ev, const RootRegion& region,
                            const RootSearchOptions& opts) {
    if (!(region.re_lo < region.re_hi && region.im_lo < region.im_hi))
        throw std::invalid_argument("find_roots: empty region");
    RootSearchResult res;
    if (ev.wave.omega_p == 0.0) return res;  // eps == 1 identically
    bool has_continuum = ev.wave.omega_0 == 0.0 || ev.wave.k_par != 0.0;
    if (ev.continuation == Continuation::None && has_continuum && region.im_lo < 0.0 &&
        region.im_hi > 0.0)
        throw std::invalid_argument(
            "find_roots: region straddles the branch cut; use Plus continuation or split the region");

    res.region_count = boundary_winding(ev, region, opts.boundary_tol);
    if (res.region_count == 0) return res;

    std::vector<DispersionRoot> raw;
    subdivide(ev, region, opts, 0, raw, res.unconverged);

    // Deduplicate, keep inside-region roots, sort deterministically.
    std::sort(raw.begin(), raw.end(), [](const DispersionRoot& a, const DispersionRoot& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    for (const auto& cand : raw) {
        if (cand.z.real() < region.re_lo - 1e-12 || cand.z.real() > region.re_hi + 1e-12 ||
            cand.z.imag() < region.im_lo - 1e-12 || cand.z.imag() > region.im_hi + 1e-12)
            continue;
        bool dup = false;
        for (auto& kept : res.roots)
            if (std::abs(kept.z - cand.z) < opts.dedup_distance) {
                dup = true;
                break;
            }
        if (!dup) res.roots.push_back(cand);
    }
    return res;
}

}  // namespace vlasov
