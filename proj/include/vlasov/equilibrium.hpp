#pragma once

#include <complex>
#include <string>
#include <vector>

namespace vlasov {

using cdouble = std::complex<double>;

// Units throughout: velocities in v_t, frequencies in omega_p, wavenumbers in
// 1/lambda_D with lambda_D = v_t / omega_p. Only omega_p and omega_0 appear;
// e, m_e, n_0, B_0 never do individually.

enum class EquilibriumKind { Maxwellian, BiMaxwellian, BumpOnTail, TwoStream };

// One axisymmetric Gaussian component:
//   w * N2(v_perp; s_perp) * N1(v_par - u; s_par)
// with N2 the unit 2D normal in (v1, v2) and N1 the unit 1D normal.
struct GaussianComponent {
    double weight;
    double s_perp;
    double s_par;
    double drift;  // parallel drift (along B_0 = z)
};

// Equilibrium distribution f0(v_perp, v_par), normalized to unit density:
// every family is a finite Gaussian mixture, so gradients, complex-argument
// evaluations, and 1D reductions along any k direction are closed-form.
struct EquilibriumDistribution {
    EquilibriumKind kind = EquilibriumKind::Maxwellian;
    std::vector<GaussianComponent> components;

    static EquilibriumDistribution maxwellian(double v_t = 1.0);
    static EquilibriumDistribution bi_maxwellian(double v_t_perp, double v_t_par);
    // Core (1-fraction) Maxwellian of width v_t plus a drifting beam.
    static EquilibriumDistribution bump_on_tail(double fraction, double beam_drift,
                                                double beam_v_t, double v_t = 1.0);
    // Two drifting streams along z; fraction is the weight of the first.
    static EquilibriumDistribution two_stream(double u1, double u2, double v_t = 1.0,
                                              double fraction = 0.5);

    // Largest |drift| over components; used for automatic grid cutoffs.
    double max_drift() const;
    double max_sigma() const;

    // True when f0 is even in v_par (real-coefficient-symmetric case: roots
    // pair as z, -z*).
    bool even_in_vpar() const;
};

struct WaveConfig {
    double k_perp = 0.0;
    double k_par = 0.0;
    double omega_p = 1.0;
    double omega_0 = 0.0;  // cyclotron frequency; 0 selects unmagnetized paths

    double k() const;
    void validate() const;  // k > 0, omega_0 >= 0, omega_p >= 0, finite
};

// f0(v_perp, v_par); v_perp >= 0.
double eval_f0(const EquilibriumDistribution& eq, double v_perp, double v_par);

double df0_dvperp(const EquilibriumDistribution& eq, double v_perp, double v_par);
double df0_dvpar(const EquilibriumDistribution& eq, double v_perp, double v_par);

// eta_perp = (omega_p^2/k^2) k_perp d f0/d v_perp
// eta_par  = (omega_p^2/k^2) k_par  d f0/d v_par
// eta(v)   = eta_perp cos(theta) + eta_par
struct EtaValues {
    double perp;
    double par;
};
EtaValues eval_eta_components(const EquilibriumDistribution& eq, const WaveConfig& wave,
                              double v_perp, double v_par);
double eval_eta(const EquilibriumDistribution& eq, const WaveConfig& wave, double v_perp,
                double v_par, double theta);

// Analytic continuations in v_par, needed for Landau residues along the
// resonance lines k_par v_par = z - n omega_0.
cdouble eta_perp_c(const EquilibriumDistribution& eq, const WaveConfig& wave, double v_perp,
                   cdouble v_par);
cdouble eta_par_c(const EquilibriumDistribution& eq, const WaveConfig& wave, double v_perp,
                  cdouble v_par);

// Exact 1D reduction along k-hat. Each axisymmetric Gaussian projects to a 1D
// Gaussian with mean drift*k_par/k and variance (k_perp^2 s_perp^2 +
// k_par^2 s_par^2)/k^2.
struct Reduced1D {
    struct Component {
        double weight;
        double mean;
        double sigma;
    };
    std::vector<Component> components;

    double f(double v) const;        // fbar(v) = integral of f0 over the k-perp plane
    double df(double v) const;       // fbar'(v)
    cdouble df_c(cdouble v) const;   // analytic continuation of fbar'
};
Reduced1D reduce_along_k(const EquilibriumDistribution& eq, const WaveConfig& wave);

// etabar(v) = (omega_p^2/k) fbar'(v): the 1D source in epsilon_0 and the van
// Kampen-Case construction.
double eta_bar(const Reduced1D& red, const WaveConfig& wave, double v);
cdouble eta_bar_c(const Reduced1D& red, const WaveConfig& wave, cdouble v);

const char* kind_name(EquilibriumKind k);

}  // namespace vlasov
