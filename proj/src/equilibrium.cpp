#include "vlasov/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace vlasov {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kSqrtTwoPi = 2.50662827463100050242;

double n2(double v_perp, double s) {
    return std::exp(-0.5 * v_perp * v_perp / (s * s)) / (kTwoPi * s * s);
}
double n1(double x, double s) {
    return std::exp(-0.5 * x * x / (s * s)) / (kSqrtTwoPi * s);
}
cdouble n1c(cdouble x, double s) {
    return std::exp(-0.5 * x * x / (s * s)) / (kSqrtTwoPi * s);
}

void check_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}
}  // namespace

EquilibriumDistribution EquilibriumDistribution::maxwellian(double v_t) {
    check_positive(v_t, "v_t");
    return {EquilibriumKind::Maxwellian, {{1.0, v_t, v_t, 0.0}}};
}

EquilibriumDistribution EquilibriumDistribution::bi_maxwellian(double v_t_perp, double v_t_par) {
    check_positive(v_t_perp, "v_t_perp");
    check_positive(v_t_par, "v_t_par");
    return {EquilibriumKind::BiMaxwellian, {{1.0, v_t_perp, v_t_par, 0.0}}};
}

EquilibriumDistribution EquilibriumDistribution::bump_on_tail(double fraction, double beam_drift,
                                                              double beam_v_t, double v_t) {
    check_positive(v_t, "v_t");
    check_positive(beam_v_t, "beam_v_t");
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("beam fraction must be in (0,1)");
    return {EquilibriumKind::BumpOnTail,
            {{1.0 - fraction, v_t, v_t, 0.0}, {fraction, beam_v_t, beam_v_t, beam_drift}}};
}

EquilibriumDistribution EquilibriumDistribution::two_stream(double u1, double u2, double v_t,
                                                            double fraction) {
    check_positive(v_t, "v_t");
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("stream fraction must be in (0,1)");
    return {EquilibriumKind::TwoStream,
            {{fraction, v_t, v_t, u1}, {1.0 - fraction, v_t, v_t, u2}}};
}

double EquilibriumDistribution::max_drift() const {
    double m = 0.0;
    for (const auto& c : components) m = std::max(m, std::abs(c.drift));
    return m;
}

double EquilibriumDistribution::max_sigma() const {
    double m = 0.0;
    for (const auto& c : components) m = std::max({m, c.s_perp, c.s_par});
    return m;
}

bool EquilibriumDistribution::even_in_vpar() const {
    // Even iff components pair up under drift -> -drift with equal weights
    // and spreads. The families we build only break this through drifts.
    for (const auto& c : components) {
        if (c.drift == 0.0) continue;
        bool paired = false;
        for (const auto& d : components) {
            if (d.drift == -c.drift && d.weight == c.weight && d.s_perp == c.s_perp &&
                d.s_par == c.s_par) {
                paired = true;
                break;
            }
        }
        if (!paired) return false;
    }
    return true;
}

double WaveConfig::k() const { return std::hypot(k_perp, k_par); }

void WaveConfig::validate() const {
    if (!std::isfinite(k_perp) || !std::isfinite(k_par) || !std::isfinite(omega_p) ||
        !std::isfinite(omega_0))
        throw std::invalid_argument("WaveConfig: non-finite field");
    if (!(k() > 0.0)) throw std::invalid_argument("WaveConfig: k must be > 0");
    if (omega_0 < 0.0) throw std::invalid_argument("WaveConfig: omega_0 must be >= 0");
    if (omega_p < 0.0) throw std::invalid_argument("WaveConfig: omega_p must be >= 0");
    if (k_perp < 0.0) throw std::invalid_argument("WaveConfig: k_perp must be >= 0");
}

double eval_f0(const EquilibriumDistribution& eq, double v_perp, double v_par) {
    if (!(v_perp >= 0.0) || !std::isfinite(v_perp) || !std::isfinite(v_par))
        throw std::invalid_argument("eval_f0: invalid velocity");
    double acc = 0.0;
    for (const auto& c : eq.components)
        acc += c.weight * n2(v_perp, c.s_perp) * n1(v_par - c.drift, c.s_par);
    return acc;
}

double df0_dvperp(const EquilibriumDistribution& eq, double v_perp, double v_par) {
    double acc = 0.0;
    for (const auto& c : eq.components)
        acc += c.weight * (-v_perp / (c.s_perp * c.s_perp)) * n2(v_perp, c.s_perp) *
               n1(v_par - c.drift, c.s_par);
    return acc;
}

double df0_dvpar(const EquilibriumDistribution& eq, double v_perp, double v_par) {
    double acc = 0.0;
    for (const auto& c : eq.components)
        acc += c.weight * n2(v_perp, c.s_perp) *
               (-(v_par - c.drift) / (c.s_par * c.s_par)) * n1(v_par - c.drift, c.s_par);
    return acc;
}

EtaValues eval_eta_components(const EquilibriumDistribution& eq, const WaveConfig& wave,
                              double v_perp, double v_par) {
    wave.validate();
    double k2 = wave.k() * wave.k();
    double pref = wave.omega_p * wave.omega_p / k2;
    return {pref * wave.k_perp * df0_dvperp(eq, v_perp, v_par),
            pref * wave.k_par * df0_dvpar(eq, v_perp, v_par)};
}

double eval_eta(const EquilibriumDistribution& eq, const WaveConfig& wave, double v_perp,
                double v_par, double theta) {
    EtaValues e = eval_eta_components(eq, wave, v_perp, v_par);
    return e.perp * std::cos(theta) + e.par;
}

cdouble eta_perp_c(const EquilibriumDistribution& eq, const WaveConfig& wave, double v_perp,
                   cdouble v_par) {
    double pref = wave.omega_p * wave.omega_p / (wave.k() * wave.k()) * wave.k_perp;
    cdouble acc = 0.0;
    for (const auto& c : eq.components)
        acc += c.weight * (-v_perp / (c.s_perp * c.s_perp)) * n2(v_perp, c.s_perp) *
               n1c(v_par - c.drift, c.s_par);
    return pref * acc;
}

cdouble eta_par_c(const EquilibriumDistribution& eq, const WaveConfig& wave, double v_perp,
                  cdouble v_par) {
    double pref = wave.omega_p * wave.omega_p / (wave.k() * wave.k()) * wave.k_par;
    cdouble acc = 0.0;
    for (const auto& c : eq.components)
        acc += c.weight * n2(v_perp, c.s_perp) * (-(v_par - c.drift) / (c.s_par * c.s_par)) *
               n1c(v_par - c.drift, c.s_par);
    return pref * acc;
}

Reduced1D reduce_along_k(const EquilibriumDistribution& eq, const WaveConfig& wave) {
    wave.validate();
    Reduced1D red;
    double k = wave.k();
    double cpar = wave.k_par / k, cperp = wave.k_perp / k;
    for (const auto& c : eq.components) {
        double var = cperp * cperp * c.s_perp * c.s_perp + cpar * cpar * c.s_par * c.s_par;
        red.components.push_back({c.weight, c.drift * cpar, std::sqrt(var)});
    }
    return red;
}

double Reduced1D::f(double v) const {
    double acc = 0.0;
    for (const auto& c : components) acc += c.weight * n1(v - c.mean, c.sigma);
    return acc;
}

double Reduced1D::df(double v) const {
    double acc = 0.0;
    for (const auto& c : components)
        acc += c.weight * (-(v - c.mean) / (c.sigma * c.sigma)) * n1(v - c.mean, c.sigma);
    return acc;
}

cdouble Reduced1D::df_c(cdouble v) const {
    cdouble acc = 0.0;
    for (const auto& c : components)
        acc += c.weight * (-(v - c.mean) / (c.sigma * c.sigma)) * n1c(v - c.mean, c.sigma);
    return acc;
}

double eta_bar(const Reduced1D& red, const WaveConfig& wave, double v) {
    return wave.omega_p * wave.omega_p / wave.k() * red.df(v);
}

cdouble eta_bar_c(const Reduced1D& red, const WaveConfig& wave, cdouble v) {
    return wave.omega_p * wave.omega_p / wave.k() * red.df_c(v);
}

const char* kind_name(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Maxwellian: return "maxwellian";
        case EquilibriumKind::BiMaxwellian: return "bi-maxwellian";
        case EquilibriumKind::BumpOnTail: return "bump-on-tail";
        case EquilibriumKind::TwoStream: return "two-stream";
    }
    return "unknown";
}

}  // namespace vlasov
