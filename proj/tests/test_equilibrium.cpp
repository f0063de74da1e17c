#include <cmath>

#include "doctest.h"
#include "vlasov/equilibrium.hpp"
#include "vlasov/special_functions.hpp"

using namespace vlasov;

namespace {
constexpr double kTwoPi = 6.28318530717958647692;

// Dense-grid quadrature of int f0 d^3v with the 2 pi v_perp Jacobian.
double density_oracle(const EquilibriumDistribution& eq, double cut) {
    std::vector<double> xp, wp, xq, wq;
    gauss_legendre(160, 0.0, cut, xp, wp);
    gauss_legendre(320, -cut, cut, xq, wq);
    double acc = 0.0;
    for (std::size_t i = 0; i < xp.size(); ++i) {
        double col = 0.0;
        for (std::size_t j = 0; j < xq.size(); ++j) col += wq[j] * eval_f0(eq, xp[i], xq[j]);
        acc += wp[i] * xp[i] * col;
    }
    return kTwoPi * acc;
}

std::vector<EquilibriumDistribution> all_families() {
    return {EquilibriumDistribution::maxwellian(1.0),
            EquilibriumDistribution::bi_maxwellian(1.3, 0.8),
            EquilibriumDistribution::bump_on_tail(0.1, 3.0, 0.5),
            EquilibriumDistribution::two_stream(2.0, -2.0)};
}
}  // namespace

TEST_CASE("f0 at the origin and decay at infinity") {
    auto eq = EquilibriumDistribution::maxwellian(1.0);
    CHECK(eval_f0(eq, 0.0, 0.0) == doctest::Approx(std::pow(kTwoPi, -1.5)).epsilon(1e-14));
    for (const auto& fam : all_families()) {
        CHECK(eval_f0(fam, 0.5, 40.0) < 1e-200);
        CHECK(eval_f0(fam, 0.5, -40.0) < 1e-200);
    }
    CHECK_THROWS_AS(eval_f0(eq, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eval_f0(eq, 0.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("f0 is nonnegative and normalized for every family") {
    for (const auto& fam : all_families()) {
        double cut = 8.0 * fam.max_sigma() + fam.max_drift();
        CHECK(std::abs(density_oracle(fam, cut) - 1.0) < 1e-12);
        for (double vp : {0.0, 0.7, 2.5})
            for (double vz : {-3.0, 0.0, 1.7, 4.0}) CHECK(eval_f0(fam, vp, vz) >= 0.0);
    }
}

TEST_CASE("Maxwellian eta_par has the analytic Gaussian form") {
    auto eq = EquilibriumDistribution::maxwellian(1.0);
    WaveConfig wave{0.3, 0.4, 1.0, 0.0};
    double k2 = wave.k() * wave.k();
    for (double vp : {0.0, 1.1})
        for (double vz : {-2.0, 0.5, 3.0}) {
            EtaValues e = eval_eta_components(eq, wave, vp, vz);
            double expect = -(wave.omega_p * wave.omega_p / k2) * wave.k_par * vz * eval_f0(eq, vp, vz);
            CHECK(e.par == doctest::Approx(expect).epsilon(1e-13));
        }
}

TEST_CASE("eta_perp vanishes on the axis for every family") {
    WaveConfig wave{0.5, 0.5, 1.0, 1.0};
    for (const auto& fam : all_families())
        for (double vz : {-1.0, 0.0, 2.0})
            CHECK(eval_eta_components(fam, wave, 0.0, vz).perp == 0.0);
}

TEST_CASE("analytic gradients match centered differences at O(h^2)") {
    WaveConfig wave{0.4, 0.6, 1.0, 0.7};
    for (const auto& fam : all_families()) {
        for (auto [vp, vz] : {std::pair<double, double>{0.8, -1.2}, {1.6, 0.9}, {0.3, 2.2}}) {
            const double h = 1e-5;
            double fd_par = (eval_f0(fam, vp, vz + h) - eval_f0(fam, vp, vz - h)) / (2 * h);
            double fd_perp = (eval_f0(fam, vp + h, vz) - eval_f0(fam, vp - h, vz)) / (2 * h);
            CHECK(std::abs(df0_dvpar(fam, vp, vz) - fd_par) < 1e-8);
            CHECK(std::abs(df0_dvperp(fam, vp, vz) - fd_perp) < 1e-8);

            // Refinement: halving h shrinks the defect by ~4.
            double e1 = std::abs(df0_dvpar(fam, vp, vz) -
                                 (eval_f0(fam, vp, vz + 2 * h) - eval_f0(fam, vp, vz - 2 * h)) / (4 * h));
            double e2 = std::abs(df0_dvpar(fam, vp, vz) - fd_par);
            if (e1 > 1e-12) CHECK(e2 < 0.6 * e1);
        }
    }
}

TEST_CASE("eta integrates to zero over velocity space") {
    WaveConfig wave{0.5, 0.5, 1.0, 1.0};
    for (const auto& fam : all_families()) {
        double cut = 8.0 * fam.max_sigma() + fam.max_drift();
        std::vector<double> xp, wp, xq, wq;
        gauss_legendre(96, 0.0, cut, xp, wp);
        gauss_legendre(192, -cut, cut, xq, wq);
        // theta integral of eta_perp cos + eta_par leaves 2 pi eta_par.
        double acc = 0.0;
        for (std::size_t i = 0; i < xp.size(); ++i) {
            double col = 0.0;
            for (std::size_t j = 0; j < xq.size(); ++j)
                col += wq[j] * eval_eta_components(fam, wave, xp[i], xq[j]).par;
            acc += wp[i] * xp[i] * col;
        }
        CHECK(std::abs(kTwoPi * acc) < 1e-12);
    }
}

TEST_CASE("Maxwellian eta_par is odd in v_par") {
    auto eq = EquilibriumDistribution::maxwellian(1.0);
    WaveConfig wave{0.2, 0.9, 1.0, 0.0};
    for (double vz : {0.3, 1.1, 2.6}) {
        double plus = eval_eta_components(eq, wave, 0.8, vz).par;
        double minus = eval_eta_components(eq, wave, 0.8, -vz).par;
        CHECK(plus == doctest::Approx(-minus).epsilon(1e-13));
    }
}

TEST_CASE("1D reduction along k matches direct plane quadrature") {
    auto eq = EquilibriumDistribution::bi_maxwellian(1.4, 0.7);
    WaveConfig wave{0.6, 0.8, 1.0, 1.0};
    Reduced1D red = reduce_along_k(eq, wave);
    // Oracle: integrate f0 over the plane k.v = const. Parameterize velocity
    // space in Cartesian coordinates and integrate numerically.
    double khx = wave.k_perp / wave.k(), khz = wave.k_par / wave.k();
    for (double u : {-1.0, 0.0, 0.8, 2.1}) {
        std::vector<double> xa, wa, xb, wb;
        gauss_legendre(220, -9.0, 9.0, xa, wa);
        gauss_legendre(220, -9.0, 9.0, xb, wb);
        // Plane basis: e1 = (khz, 0, -khx), e2 = (0, 1, 0); point = u*khat + s e1 + t e2.
        double acc = 0.0;
        for (std::size_t i = 0; i < xa.size(); ++i)
            for (std::size_t j = 0; j < xb.size(); ++j) {
                double vx = u * khx + xa[i] * khz;
                double vy = xb[j];
                double vz = u * khz - xa[i] * khx;
                acc += wa[i] * wb[j] * eval_f0(eq, std::hypot(vx, vy), vz);
            }
        CHECK(std::abs(red.f(u) - acc) < 1e-10);
    }
}

TEST_CASE("etabar derivative consistency") {
    auto eq = EquilibriumDistribution::two_stream(2.0, -2.0);
    WaveConfig wave{0.0, 0.4, 1.0, 0.0};
    Reduced1D red = reduce_along_k(eq, wave);
    const double h = 1e-5;
    for (double v : {-2.5, 0.0, 1.2}) {
        double fd = (red.f(v + h) - red.f(v - h)) / (2 * h);
        CHECK(std::abs(red.df(v) - fd) < 1e-9);
        CHECK(eta_bar(red, wave, v) ==
              doctest::Approx(wave.omega_p * wave.omega_p / wave.k() * red.df(v)).epsilon(1e-13));
        // Complex continuation agrees on the real axis.
        CHECK(std::abs(eta_bar_c(red, wave, cdouble(v, 0.0)) - eta_bar(red, wave, v)) < 1e-15);
    }
}

TEST_CASE("wave config validation") {
    CHECK_THROWS_AS(WaveConfig{0.0, 0.0, 1.0, 0.0}.validate(), std::invalid_argument);
    CHECK_THROWS_AS((WaveConfig{0.5, 0.5, 1.0, -1.0}).validate(), std::invalid_argument);
    CHECK_NOTHROW((WaveConfig{0.5, 0.5, 1.0, 0.0}).validate());
    CHECK(WaveConfig{0.3, 0.4, 1.0, 0.0}.k() == doctest::Approx(0.5));
}

TEST_CASE("symmetry classification") {
    CHECK(EquilibriumDistribution::maxwellian().even_in_vpar());
    CHECK(EquilibriumDistribution::two_stream(2.0, -2.0).even_in_vpar());
    CHECK(!EquilibriumDistribution::two_stream(2.2, -1.8).even_in_vpar());
    CHECK(!EquilibriumDistribution::bump_on_tail(0.1, 3.0, 0.5).even_in_vpar());
}
