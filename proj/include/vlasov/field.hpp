#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "vlasov/equilibrium.hpp"
#include "vlasov/grid.hpp"

namespace vlasov {

// Complex perturbation f(v) stored as theta-harmonic coefficient tables
// f_m(v_perp, v_par), m in [-m_max, m_max]:
//   f(v) = sum_m f_m(v_par, v_perp) e^{i m theta}
struct PerturbationField {
    WaveConfig wave;
    std::shared_ptr<const VelocityGrid> grid;
    int m_max = 0;
    std::vector<cdouble> data;  // [(m + m_max) * np * npar + ip * npar + jp]

    PerturbationField() = default;
    PerturbationField(const WaveConfig& w, std::shared_ptr<const VelocityGrid> g, int mmax);

    std::size_t index(int m, std::size_t ip, std::size_t jp) const {
        return (static_cast<std::size_t>(m + m_max) * grid->n_perp() + ip) * grid->n_par() + jp;
    }
    cdouble& at(int m, std::size_t ip, std::size_t jp) { return data[index(m, ip, jp)]; }
    const cdouble& at(int m, std::size_t ip, std::size_t jp) const { return data[index(m, ip, jp)]; }

    // int f d^3v = 2 pi sum w_perp w_par v_perp f_0  (only m = 0 survives).
    cdouble moment() const;
    double l2_norm() const;
    // Largest harmonic magnitude per |m|, relative to the overall max; the
    // truncation diagnostic reported by the resolvent.
    std::vector<double> harmonic_profile() const;

    bool compatible(const PerturbationField& o) const;
    PerturbationField& operator+=(const PerturbationField& o);
    PerturbationField& operator*=(cdouble s);
    // this += s * o, with o allowed a different (smaller or larger) m_max.
    void axpy(cdouble s, const PerturbationField& o);
};

double l2_distance(const PerturbationField& a, const PerturbationField& b);

// Reduced 1D field fbar(v) on a Grid1D.
struct Field1D {
    double k = 0.0;
    std::shared_ptr<const Grid1D> grid;
    std::vector<cdouble> values;

    Field1D() = default;
    Field1D(double k_, std::shared_ptr<const Grid1D> g);
    cdouble moment() const;
    double l2_norm() const;
    Field1D& operator*=(cdouble s);
    void axpy(cdouble s, const Field1D& o);
};

double l2_distance(const Field1D& a, const Field1D& b);

// Integrates a 3D field over the perpendicular velocity components:
// fbar(v_par) = 2 pi int f_0(v_perp, v_par) v_perp dv_perp. Only the m = 0
// harmonic survives. The output lives on the same v_par nodes.
Field1D reduce_perpendicular(const PerturbationField& f, std::shared_ptr<const Grid1D> grid1d);

// ---------------------------------------------------------------------------
// Bessel harmonic rotation.
// Multiplication by e^{+-i a(v_perp) sin theta}, a = k_perp v_perp / omega_0,
// acts on harmonic tables as a Toeplitz matrix of Bessel values:
//   [e^{+i a sin}ed f]_n = sum_m J_{n-m}(a) f_m        (rotate_up)
//   [e^{-i a sin}ed f]_m = sum_n J_{n-m}(a) f_n        (rotate_down)
// The pair is unitary on untruncated tables: sum_k J_{k+p} J_{k+q} = delta_pq.
// ---------------------------------------------------------------------------
struct HarmonicRotation {
    // jtab[ip][q] = J_q(a(v_perp_ip)), q in [0, qmax]; negative orders via
    // J_{-q} = (-1)^q J_q.
    std::vector<std::vector<double>> jtab;
    int spread = 0;  // smallest S with |J_q(a)| < tol for all nodes, |q| >= S

    double j(std::size_t ip, int q) const {
        int aq = q < 0 ? -q : q;
        if (aq >= static_cast<int>(jtab[ip].size())) return 0.0;
        double val = jtab[ip][static_cast<std::size_t>(aq)];
        return (q < 0 && aq % 2 != 0) ? -val : val;
    }
};

HarmonicRotation make_rotation(const VelocityGrid& grid, const WaveConfig& wave,
                               double tol = 1e-15);

// out (harmonics up to out.m_max) from in (harmonics up to in.m_max).
void rotate_up(const HarmonicRotation& rot, const PerturbationField& in, PerturbationField& out);
void rotate_down(const HarmonicRotation& rot, const PerturbationField& in, PerturbationField& out);

}  // namespace vlasov
