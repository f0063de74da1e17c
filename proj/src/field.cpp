#include "vlasov/field.hpp"

#include <cmath>
#include <stdexcept>

#include "vlasov/special_functions.hpp"

namespace vlasov {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

PerturbationField::PerturbationField(const WaveConfig& w, std::shared_ptr<const VelocityGrid> g,
                                     int mmax)
    : wave(w), grid(std::move(g)), m_max(mmax) {
    if (m_max < 0) throw std::invalid_argument("PerturbationField: m_max < 0");
    data.assign(static_cast<std::size_t>(2 * m_max + 1) * grid->n_perp() * grid->n_par(), 0.0);
}

cdouble PerturbationField::moment() const {
    cdouble acc = 0.0;
    for (std::size_t ip = 0; ip < grid->n_perp(); ++ip) {
        cdouble row = 0.0;
        for (std::size_t jp = 0; jp < grid->n_par(); ++jp) row += grid->wpar[jp] * at(0, ip, jp);
        acc += grid->wperp[ip] * grid->vperp[ip] * row;
    }
    return kTwoPi * acc;
}

double PerturbationField::l2_norm() const {
    double acc = 0.0;
    for (int m = -m_max; m <= m_max; ++m)
        for (std::size_t ip = 0; ip < grid->n_perp(); ++ip) {
            double row = 0.0;
            for (std::size_t jp = 0; jp < grid->n_par(); ++jp)
                row += grid->wpar[jp] * std::norm(at(m, ip, jp));
            acc += grid->wperp[ip] * grid->vperp[ip] * row;
        }
    return std::sqrt(kTwoPi * acc);
}

std::vector<double> PerturbationField::harmonic_profile() const {
    std::vector<double> prof(static_cast<std::size_t>(m_max) + 1, 0.0);
    double global = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        double peak = 0.0;
        for (std::size_t ip = 0; ip < grid->n_perp(); ++ip)
            for (std::size_t jp = 0; jp < grid->n_par(); ++jp)
                peak = std::max(peak, std::abs(at(m, ip, jp)));
        std::size_t am = static_cast<std::size_t>(m < 0 ? -m : m);
        prof[am] = std::max(prof[am], peak);
        global = std::max(global, peak);
    }
    if (global > 0.0)
        for (auto& p : prof) p /= global;
    return prof;
}

bool PerturbationField::compatible(const PerturbationField& o) const {
    return grid == o.grid && m_max == o.m_max;
}

PerturbationField& PerturbationField::operator+=(const PerturbationField& o) {
    if (!compatible(o)) throw std::invalid_argument("PerturbationField: grid/harmonic mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

PerturbationField& PerturbationField::operator*=(cdouble s) {
    for (auto& v : data) v *= s;
    return *this;
}

void PerturbationField::axpy(cdouble s, const PerturbationField& o) {
    if (grid != o.grid) throw std::invalid_argument("PerturbationField::axpy: grid mismatch");
    int mm = std::min(m_max, o.m_max);
    for (int m = -mm; m <= mm; ++m)
        for (std::size_t ip = 0; ip < grid->n_perp(); ++ip)
            for (std::size_t jp = 0; jp < grid->n_par(); ++jp)
                at(m, ip, jp) += s * o.at(m, ip, jp);
}

double l2_distance(const PerturbationField& a, const PerturbationField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("l2_distance: grid mismatch");
    double acc = 0.0;
    int mm = std::max(a.m_max, b.m_max);
    for (int m = -mm; m <= mm; ++m)
        for (std::size_t ip = 0; ip < a.grid->n_perp(); ++ip) {
            double row = 0.0;
            for (std::size_t jp = 0; jp < a.grid->n_par(); ++jp) {
                cdouble va = (m >= -a.m_max && m <= a.m_max) ? a.at(m, ip, jp) : cdouble(0.0);
                cdouble vb = (m >= -b.m_max && m <= b.m_max) ? b.at(m, ip, jp) : cdouble(0.0);
                row += a.grid->wpar[jp] * std::norm(va - vb);
            }
            acc += a.grid->wperp[ip] * a.grid->vperp[ip] * row;
        }
    return std::sqrt(kTwoPi * acc);
}

Field1D::Field1D(double k_, std::shared_ptr<const Grid1D> g) : k(k_), grid(std::move(g)) {
    values.assign(grid->v.size(), 0.0);
}

cdouble Field1D::moment() const {
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) acc += grid->w[j] * values[j];
    return acc;
}

double Field1D::l2_norm() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) acc += grid->w[j] * std::norm(values[j]);
    return std::sqrt(acc);
}

Field1D& Field1D::operator*=(cdouble s) {
    for (auto& v : values) v *= s;
    return *this;
}

void Field1D::axpy(cdouble s, const Field1D& o) {
    if (grid != o.grid) throw std::invalid_argument("Field1D::axpy: grid mismatch");
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += s * o.values[j];
}

double l2_distance(const Field1D& a, const Field1D& b) {
    if (a.grid != b.grid) throw std::invalid_argument("l2_distance: grid mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j)
        acc += a.grid->w[j] * std::norm(a.values[j] - b.values[j]);
    return std::sqrt(acc);
}

Field1D reduce_perpendicular(const PerturbationField& f, std::shared_ptr<const Grid1D> grid1d) {
    if (grid1d->v.size() != f.grid->n_par())
        throw std::invalid_argument("reduce_perpendicular: v_par node mismatch");
    Field1D out(f.wave.k(), std::move(grid1d));
    for (std::size_t jp = 0; jp < f.grid->n_par(); ++jp) {
        cdouble acc = 0.0;
        for (std::size_t ip = 0; ip < f.grid->n_perp(); ++ip)
            acc += f.grid->wperp[ip] * f.grid->vperp[ip] * f.at(0, ip, jp);
        out.values[jp] = kTwoPi * acc;
    }
    return out;
}

HarmonicRotation make_rotation(const VelocityGrid& grid, const WaveConfig& wave, double tol) {
    HarmonicRotation rot;
    rot.jtab.resize(grid.n_perp());
    if (wave.k_perp == 0.0 || wave.omega_0 <= 0.0) {
        // Identity rotation (a = 0 everywhere): J_0 = 1 only.
        for (auto& row : rot.jtab) row = {1.0};
        rot.spread = 0;
        return rot;
    }
    double amax = wave.k_perp * grid.cut_perp / wave.omega_0;
    int qmax = static_cast<int>(amax + 12.0 * std::cbrt(amax + 2.0) + 24.0);
    int spread = 0;
    for (std::size_t ip = 0; ip < grid.n_perp(); ++ip) {
        double a = wave.k_perp * grid.vperp[ip] / wave.omega_0;
        bessel_J_array(qmax, a, rot.jtab[ip]);
        int s = qmax;
        while (s > 0 && std::abs(rot.jtab[ip][static_cast<std::size_t>(s)]) < tol) --s;
        spread = std::max(spread, s + 1);
    }
    rot.spread = spread;
    return rot;
}

namespace {

enum class RotDir { Up, Down };

void rotate_impl(const HarmonicRotation& rot, const PerturbationField& in, PerturbationField& out,
                 RotDir dir) {
    if (in.grid != out.grid) throw std::invalid_argument("rotate: grid mismatch");
    std::fill(out.data.begin(), out.data.end(), cdouble(0.0));
    for (int n = -out.m_max; n <= out.m_max; ++n)
        for (int m = -in.m_max; m <= in.m_max; ++m) {
            int q = (dir == RotDir::Up) ? (n - m) : (m - n);
            if (std::abs(q) > rot.spread) continue;
            for (std::size_t ip = 0; ip < in.grid->n_perp(); ++ip) {
                double jv = rot.j(ip, q);
                if (jv == 0.0) continue;
                const cdouble* src = &in.at(m, ip, 0);
                cdouble* dst = &out.at(n, ip, 0);
                for (std::size_t jp = 0; jp < in.grid->n_par(); ++jp) dst[jp] += jv * src[jp];
            }
        }
}

}  // namespace

void rotate_up(const HarmonicRotation& rot, const PerturbationField& in, PerturbationField& out) {
    rotate_impl(rot, in, out, RotDir::Up);
}

void rotate_down(const HarmonicRotation& rot, const PerturbationField& in, PerturbationField& out) {
    rotate_impl(rot, in, out, RotDir::Down);
}

}  // namespace vlasov
