#include "vlasov/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "vlasov/parallel.hpp"

namespace vlasov {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
// RK4 covers [-i 2.828, +i 2.828] on the imaginary axis.
constexpr double kRk4ImagLimit = 2.82842712474619;
}  // namespace

DiscreteOperator DiscreteOperator::make(const EquilibriumDistribution& eq, const WaveConfig& wave,
                                        std::shared_ptr<const VelocityGrid> grid, int m_max) {
    wave.validate();
    if (m_max < 1) throw std::invalid_argument("DiscreteOperator: m_max must be >= 1");
    DiscreteOperator op;
    op.equilibrium = eq;
    op.wave = wave;
    op.grid = std::move(grid);
    op.m_max = m_max;
    std::size_t np = op.grid->n_perp(), nv = op.grid->n_par();
    op.eta_perp.assign(np * nv, 0.0);
    op.eta_par.assign(np * nv, 0.0);
    for (std::size_t ip = 0; ip < np; ++ip)
        for (std::size_t jp = 0; jp < nv; ++jp) {
            EtaValues e = eval_eta_components(eq, wave, op.grid->vperp[ip], op.grid->vpar[jp]);
            op.eta_perp[ip * nv + jp] = e.perp;
            op.eta_par[ip * nv + jp] = e.par;
        }
    return op;
}

double DiscreteOperator::spectral_radius_estimate() const {
    double diag = m_max * wave.omega_0 + std::abs(wave.k_par) * grid->cut_par;
    double coupling = std::abs(wave.k_perp) * grid->cut_perp;
    // The moment term is a rank-one perturbation with norm ~ omega_p^2/k;
    // bounded crudely by omega_p^2/k * max |eta| volume factors.
    double moment_term = wave.omega_p * wave.omega_p / std::max(wave.k(), 1e-12);
    return diag + coupling + moment_term;
}

PerturbationField apply_K(const DiscreteOperator& op, const PerturbationField& f, bool adjoint) {
    if (f.grid != op.grid || f.m_max != op.m_max)
        throw std::invalid_argument("apply_K: grid or harmonic mismatch");
    PerturbationField out(f.wave, f.grid, f.m_max);
    const auto& g = *op.grid;
    std::size_t np = g.n_perp(), nv = g.n_par();
    int mm = op.m_max;

    for (int m = -mm; m <= mm; ++m) {
        parallel_for(np, [&](std::size_t ip) {
            double kperp_half = 0.5 * op.wave.k_perp * g.vperp[ip];
            for (std::size_t jp = 0; jp < nv; ++jp) {
                cdouble val = (m * op.wave.omega_0 + op.wave.k_par * g.vpar[jp]) * f.at(m, ip, jp);
                if (m - 1 >= -mm) val += kperp_half * f.at(m - 1, ip, jp);
                if (m + 1 <= mm) val += kperp_half * f.at(m + 1, ip, jp);
                out.at(m, ip, jp) = val;
            }
        });
    }

    if (!adjoint) {
        cdouble M = f.moment();
        if (M != cdouble(0.0)) {
            for (std::size_t ip = 0; ip < np; ++ip)
                for (std::size_t jp = 0; jp < nv; ++jp) {
                    out.at(0, ip, jp) -= op.eta_par[ip * nv + jp] * M;
                    cdouble half = 0.5 * op.eta_perp[ip * nv + jp] * M;
                    if (mm >= 1) {
                        out.at(1, ip, jp) -= half;
                        out.at(-1, ip, jp) -= half;
                    }
                }
        }
    } else {
        // int eta f d^3v, fed into the m = 0 harmonic as a constant.
        cdouble S = 0.0;
        for (std::size_t ip = 0; ip < np; ++ip) {
            cdouble row = 0.0;
            for (std::size_t jp = 0; jp < nv; ++jp) {
                cdouble v = op.eta_par[ip * nv + jp] * f.at(0, ip, jp);
                if (mm >= 1)
                    v += 0.5 * op.eta_perp[ip * nv + jp] * (f.at(1, ip, jp) + f.at(-1, ip, jp));
                row += g.wpar[jp] * v;
            }
            S += g.wperp[ip] * g.vperp[ip] * row;
        }
        S *= kTwoPi;
        for (std::size_t ip = 0; ip < np; ++ip)
            for (std::size_t jp = 0; jp < nv; ++jp) out.at(0, ip, jp) -= S;
    }
    return out;
}

cdouble inner(const PerturbationField& f, const PerturbationField& g) {
    if (f.grid != g.grid || f.m_max != g.m_max) throw std::invalid_argument("inner: mismatch");
    cdouble acc = 0.0;
    for (int m = -f.m_max; m <= f.m_max; ++m)
        for (std::size_t ip = 0; ip < f.grid->n_perp(); ++ip) {
            cdouble row = 0.0;
            for (std::size_t jp = 0; jp < f.grid->n_par(); ++jp)
                row += f.grid->wpar[jp] * std::conj(f.at(m, ip, jp)) * g.at(m, ip, jp);
            acc += f.grid->wperp[ip] * f.grid->vperp[ip] * row;
        }
    return kTwoPi * acc;
}

namespace {

// One RK4 step of df/dt = -i K f.
template <class FieldT, class OpT>
void rk4_step(const OpT& op, FieldT& f, double dt) {
    const cdouble mi(0.0, -1.0);
    FieldT k1 = apply_K(op, f);
    k1 *= mi;
    FieldT y = f;
    y.axpy(0.5 * dt, k1);
    FieldT k2 = apply_K(op, y);
    k2 *= mi;
    y = f;
    y.axpy(0.5 * dt, k2);
    FieldT k3 = apply_K(op, y);
    k3 *= mi;
    y = f;
    y.axpy(dt, k3);
    FieldT k4 = apply_K(op, y);
    k4 *= mi;
    f.axpy(dt / 6.0, k1);
    f.axpy(dt / 3.0, k2);
    f.axpy(dt / 3.0, k3);
    f.axpy(dt / 6.0, k4);
}

template <class FieldT, class OpT, class PointT>
std::vector<PointT> integrate_impl(const OpT& op, const FieldT& f0,
                                   const std::vector<double>& times,
                                   const IntegrateOptions& opts) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
            throw std::invalid_argument("integrate_direct: times must be ascending and >= 0");
    }
    double dt = opts.dt;
    if (dt <= 0.0) {
        double rho = op.spectral_radius_estimate();
        dt = opts.cfl * kRk4ImagLimit / std::max(rho, 1e-12);
    }
    double norm0 = f0.l2_norm();

    std::vector<PointT> out;
    out.reserve(times.size());
    FieldT f = f0;
    double t = 0.0;
    for (double target : times) {
        double remain = target - t;
        if (remain > 0.0) {
            int steps = std::max(1, static_cast<int>(std::ceil(remain / dt)));
            double h = remain / steps;
            for (int s = 0; s < steps; ++s) rk4_step(op, f, h);
            t = target;
        }
        PointT p;
        p.t = target;
        p.moment = f.moment();
        p.field_l2 = f.l2_norm();
        p.field = f;
        if (opts.check_stability && norm0 > 0.0 && p.field_l2 > opts.blowup_factor * norm0)
            throw std::runtime_error("integrate_direct: norm blow-up, step size too large");
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

std::vector<TrajectoryPoint> integrate_direct(const DiscreteOperator& op,
                                              const PerturbationField& f0,
                                              const std::vector<double>& times,
                                              const IntegrateOptions& opts) {
    return integrate_impl<PerturbationField, DiscreteOperator, TrajectoryPoint>(op, f0, times,
                                                                                opts);
}

DiscreteOperator1D DiscreteOperator1D::make(const EquilibriumDistribution& eq,
                                            const WaveConfig& wave,
                                            std::shared_ptr<const Grid1D> grid) {
    wave.validate();
    DiscreteOperator1D op;
    op.k = wave.k();
    op.grid = std::move(grid);
    Reduced1D red = reduce_along_k(eq, wave);
    op.eta_bar.resize(op.grid->v.size());
    for (std::size_t j = 0; j < op.grid->v.size(); ++j)
        op.eta_bar[j] = vlasov::eta_bar(red, wave, op.grid->v[j]);
    return op;
}

double DiscreteOperator1D::spectral_radius_estimate() const {
    double diag = k * grid->cut;
    double moment_term = 0.0;
    for (std::size_t j = 0; j < grid->v.size(); ++j)
        moment_term += grid->w[j] * std::abs(eta_bar[j]);
    return diag + moment_term;
}

Field1D apply_K(const DiscreteOperator1D& op, const Field1D& f) {
    if (f.grid != op.grid) throw std::invalid_argument("apply_K(1D): grid mismatch");
    Field1D out(op.k, f.grid);
    cdouble M = f.moment();
    for (std::size_t j = 0; j < f.values.size(); ++j)
        out.values[j] = op.k * op.grid->v[j] * f.values[j] - op.eta_bar[j] * M;
    return out;
}

std::vector<TrajectoryPoint1D> integrate_direct(const DiscreteOperator1D& op, const Field1D& f0,
                                                const std::vector<double>& times,
                                                const IntegrateOptions& opts) {
    return integrate_impl<Field1D, DiscreteOperator1D, TrajectoryPoint1D>(op, f0, times, opts);
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<cdouble>& moment, double t_lo,
                 double t_hi, double residual_threshold) {
    if (t.size() != moment.size() || t.size() < 4)
        throw std::invalid_argument("fit_rate: need matching series with >= 4 samples");
    // Collect the window, unwrapping the phase as we go.
    std::vector<double> ts, lre, lim;
    double prev_phase = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        double mag = std::abs(moment[i]);
        if (mag <= 0.0) continue;
        double ph = std::arg(moment[i]);
        if (!first) {
            while (ph - prev_phase > 3.14159265358979) ph -= 2.0 * 3.14159265358979323846;
            while (ph - prev_phase < -3.14159265358979) ph += 2.0 * 3.14159265358979323846;
        }
        first = false;
        prev_phase = ph;
        ts.push_back(t[i]);
        lre.push_back(std::log(mag));
        lim.push_back(ph);
    }
    if (ts.size() < 4) throw std::invalid_argument("fit_rate: window contains too few samples");

    auto lsq = [&](const std::vector<double>& y) {
        double n = static_cast<double>(ts.size());
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            st += ts[i];
            sy += y[i];
            stt += ts[i] * ts[i];
            sty += ts[i] * y[i];
        }
        double slope = (n * sty - st * sy) / (n * stt - st * st);
        double icept = (sy - slope * st) / n;
        double r2 = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            double e = y[i] - slope * ts[i] - icept;
            r2 += e * e;
        }
        return std::pair<double, double>(slope, std::sqrt(r2 / n));
    };

    auto [slope_mag, res_mag] = lsq(lre);    // = -gamma
    auto [slope_ph, res_ph] = lsq(lim);      // = -omega
    RateFit fit;
    fit.rate = cdouble(-slope_ph, slope_mag);  // omega - i gamma
    fit.residual = std::hypot(res_mag, res_ph);
    fit.low_confidence = fit.residual > residual_threshold;
    return fit;
}

}  // namespace vlasov
