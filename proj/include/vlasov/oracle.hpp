#pragma once

#include <functional>
#include <vector>

#include "vlasov/field.hpp"

namespace vlasov {

// Discretized linear Vlasov operator K_h acting on theta-harmonic tables:
//   (K f)_m = (m omega_0 + k_par v_par) f_m
//           + (k_perp v_perp / 2) (f_{m-1} + f_{m+1})
//           - M[f] * (eta_par on m = 0, eta_perp/2 on m = +-1)
// with M[f] = int f d^3v. The adjoint variant replaces the moment term with
// -delta_{m0} int eta f d^3v. Both moments use the grid quadrature weights,
// so the discrete adjointness <K~f, g> = <f, K g> is exact up to round-off.
struct DiscreteOperator {
    EquilibriumDistribution equilibrium;
    WaveConfig wave;
    std::shared_ptr<const VelocityGrid> grid;
    int m_max = 0;

    // Precomputed tables on the grid.
    std::vector<double> eta_perp, eta_par;  // [ip * npar + jp]

    static DiscreteOperator make(const EquilibriumDistribution& eq, const WaveConfig& wave,
                                 std::shared_ptr<const VelocityGrid> grid, int m_max);

    // Estimate of max |spectrum|, for explicit step-size control.
    double spectral_radius_estimate() const;
};

PerturbationField apply_K(const DiscreteOperator& op, const PerturbationField& f,
                          bool adjoint = false);

// <f, g> = int f* g d^3v on the grid.
cdouble inner(const PerturbationField& f, const PerturbationField& g);

struct TrajectoryPoint {
    double t = 0.0;
    cdouble moment;
    double field_l2 = 0.0;
    PerturbationField field;
};

struct IntegrateOptions {
    double dt = 0.0;        // 0 = auto from spectral radius
    double cfl = 0.5;       // fraction of the RK4 imaginary-axis limit
    double blowup_factor = 1e8;  // norm growth bound for known-stable runs
    bool check_stability = false;
};

// Classic RK4 on i df/dt = K_h f; emits the state at each requested time.
// Requested times must be non-negative and ascending.
std::vector<TrajectoryPoint> integrate_direct(const DiscreteOperator& op,
                                              const PerturbationField& f0,
                                              const std::vector<double>& times,
                                              const IntegrateOptions& opts = {});

// 1D reduced problem: (K0bar f)(v) = k v f(v) - etabar(v) int f dv'.
struct DiscreteOperator1D {
    double k = 0.0;
    std::shared_ptr<const Grid1D> grid;
    std::vector<double> eta_bar;

    static DiscreteOperator1D make(const EquilibriumDistribution& eq, const WaveConfig& wave,
                                   std::shared_ptr<const Grid1D> grid);
    double spectral_radius_estimate() const;
};

Field1D apply_K(const DiscreteOperator1D& op, const Field1D& f);

struct TrajectoryPoint1D {
    double t = 0.0;
    cdouble moment;
    double field_l2 = 0.0;
    Field1D field;
};

std::vector<TrajectoryPoint1D> integrate_direct(const DiscreteOperator1D& op, const Field1D& f0,
                                                const std::vector<double>& times,
                                                const IntegrateOptions& opts = {});

// Least-squares fit of ln moment(t) to -i omega t - gamma t + c over the
// window [t_lo, t_hi]; phase is unwrapped along the series. Returns
// rate = omega - i gamma, directly comparable with a dispersion root.
struct RateFit {
    cdouble rate;
    double residual = 0.0;      // RMS residual of the complex-log fit
    bool low_confidence = false;
};

RateFit fit_rate(const std::vector<double>& t, const std::vector<cdouble>& moment, double t_lo,
                 double t_hi, double residual_threshold = 0.05);

}  // namespace vlasov
