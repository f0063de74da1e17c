#include <cmath>

#include "doctest.h"
#include "vlasov/dispersion.hpp"
#include "vlasov/oracle.hpp"
#include "vlasov/special_functions.hpp"

using namespace vlasov;

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;

DispersionEvaluator maxwellian_ev(double kperp, double kpar, double omega0,
                                  Continuation cont = Continuation::None,
                                  DispersionMethod method = DispersionMethod::Auto) {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{kperp, kpar, 1.0, omega0};
    return DispersionEvaluator::make(eq, wave, {48, 192}, cont, method);
}
}  // namespace

TEST_CASE("epsilon0 is identically one for omega_p = 0") {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{0.0, 0.5, 0.0, 0.0};
    auto ev = DispersionEvaluator::make(eq, wave);
    CHECK(epsilon0(ev, cdouble(1.2, 0.5)) == cdouble(1.0));
    CHECK(epsilon0(ev, cdouble(-3.0, -2.0)) == cdouble(1.0));
}

TEST_CASE("epsilon0 approaches one high on the imaginary axis") {
    auto ev = maxwellian_ev(0.0, 0.5, 0.0);
    double prev = 1e9;
    for (double y : {5.0, 10.0, 20.0}) {
        double dev = std::abs(epsilon0(ev, cdouble(0.0, y)) - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("epsilon0 quadrature matches the Maxwellian closed form") {
    // z = 1.2 + 0.5i, k lambda_D = 0.5; oracle written out by hand:
    // 1 + (1/(k^2 lambda_D^2)) (1 + zeta Z(zeta)), zeta = z / (sqrt(2) k v_t).
    auto evq = maxwellian_ev(0.3, 0.4, 0.0, Continuation::None, DispersionMethod::Quadrature);
    auto evc = maxwellian_ev(0.3, 0.4, 0.0, Continuation::None, DispersionMethod::ClosedForm);
    cdouble z(1.2, 0.5);
    double k = 0.5;
    cdouble zeta = z / (kSqrt2 * k);
    cdouble oracle = 1.0 + (1.0 / (k * k)) * (1.0 + zeta * plasma_Z(zeta));
    CHECK(std::abs(epsilon0(evq, z) - oracle) < 1e-8);
    CHECK(std::abs(epsilon0(evc, z) - oracle) < 1e-12);
}

TEST_CASE("epsilon0 rejects the branch cut without continuation") {
    auto ev = maxwellian_ev(0.0, 0.5, 0.0);
    CHECK_THROWS_AS(epsilon0(ev, cdouble(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("plus-continued epsilon0 is continuous across the axis; the defining one is not") {
    auto plus = maxwellian_ev(0.0, 0.5, 0.0, Continuation::Plus);
    auto defn = maxwellian_ev(0.0, 0.5, 0.0, Continuation::None);
    double x = 1.1;
    double prev = 1e9;
    for (double d : {1e-4, 1e-6, 1e-8}) {
        double gap = std::abs(epsilon0(plus, cdouble(x, d)) - epsilon0(plus, cdouble(x, -d)));
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-9);
    double cut_gap =
        std::abs(epsilon0(defn, cdouble(x, 1e-8)) - epsilon0(defn, cdouble(x, -1e-8)));
    CHECK(cut_gap > 1e-2);  // 2 pi |etabar(x/k)| / k stays finite
}

TEST_CASE("quadrature route agrees with closed form off and below the axis") {
    for (auto cont : {Continuation::None, Continuation::Plus}) {
        auto evq = maxwellian_ev(0.0, 0.5, 0.0, cont, DispersionMethod::Quadrature);
        auto evc = maxwellian_ev(0.0, 0.5, 0.0, cont, DispersionMethod::ClosedForm);
        for (cdouble z : {cdouble(1.3, 0.8), cdouble(0.9, -0.4), cdouble(-1.7, 0.25),
                          cdouble(2.0, -0.15)}) {
            CHECK(std::abs(epsilon0(evq, z) - epsilon0(evc, z)) < 1e-7);
        }
        if (cont == Continuation::Plus) {
            for (double x : {-1.4, 0.7, 2.1})
                CHECK(std::abs(epsilon0(evq, cdouble(x, 0.0)) - epsilon0(evc, cdouble(x, 0.0))) <
                      1e-7);
        }
    }
}

TEST_CASE("Schwarz symmetry for the real-symmetric equilibrium") {
    auto ev = maxwellian_ev(0.0, 0.5, 0.0, Continuation::Plus);
    for (cdouble z : {cdouble(1.2, 0.4), cdouble(0.6, -0.3), cdouble(-2.0, 1.0)}) {
        cdouble a = epsilon0(ev, -std::conj(z));
        cdouble b = std::conj(epsilon0(ev, z));
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("magnetized epsilon is one for omega_p = 0 and reduces at k_perp = 0") {
    auto eq = EquilibriumDistribution::maxwellian();
    {
        WaveConfig wave{0.3, 0.4, 0.0, 1.0};
        auto ev = DispersionEvaluator::make(eq, wave);
        CHECK(epsilon(ev, cdouble(1.0, 0.5)) == cdouble(1.0));
    }
    {
        WaveConfig wave{0.0, 0.5, 1.0, 1.0};
        auto evm = DispersionEvaluator::make(eq, wave, {48, 192});
        auto ev0 = DispersionEvaluator::make(eq, wave, {48, 192});
        for (cdouble z : {cdouble(1.2, 0.5), cdouble(-0.7, 0.9)}) {
            // k_perp = 0 collapses the Bessel sum to n = 0: parallel dynamics only.
            CHECK(std::abs(epsilon(evm, z) - epsilon0(ev0, z)) < 1e-8);
        }
    }
}

TEST_CASE("magnetized epsilon: quadrature agrees with the Z-closed route") {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{0.5, 0.5, 1.0, 1.0};
    for (auto cont : {Continuation::None, Continuation::Plus}) {
        auto evq = DispersionEvaluator::make(eq, wave, {48, 192}, cont, DispersionMethod::Quadrature);
        auto evc = DispersionEvaluator::make(eq, wave, {48, 192}, cont, DispersionMethod::ClosedForm);
        for (cdouble z : {cdouble(1.3, 0.6), cdouble(0.4, -0.35), cdouble(2.2, 0.9)}) {
            cdouble a = epsilon(evq, z), b = epsilon(evc, z);
            CHECK(std::abs(a - b) < 2e-7);
        }
    }
}

TEST_CASE("unmagnetized limit of epsilon (small omega_0, small k_perp)") {
    auto eq = EquilibriumDistribution::maxwellian();
    double kperp = 0.01, kpar = std::sqrt(0.25 - kperp * kperp);
    WaveConfig wave_m{kperp, kpar, 1.0, 1e-3};
    WaveConfig wave_0{kperp, kpar, 1.0, 0.0};
    auto evm = DispersionEvaluator::make(eq, wave_m, {64, 192});
    auto ev0 = DispersionEvaluator::make(eq, wave_0, {64, 192});
    cdouble z(1.3, 0.4);
    CHECK(std::abs(epsilon(evm, z) - epsilon0(ev0, z)) < 1e-4);
    CHECK(last_auto_n_max() < kHarmonicCap);
}

TEST_CASE("Bernstein branch: real scan changes sign between harmonics") {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{0.8, 0.0, 1.0, 1.0};
    auto ev = DispersionEvaluator::make(eq, wave, {64, 64});
    for (int n = 1; n <= 3; ++n) {
        bool pos = false, neg = false;
        for (int i = 1; i < 40; ++i) {
            double w = n + i / 40.0;
            if (std::abs(w - n) < 0.02 || std::abs(w - (n + 1)) < 0.02) continue;
            double val = epsilon(ev, cdouble(w, 0.0)).real();
            (val > 0 ? pos : neg) = true;
        }
        CHECK(pos);
        CHECK(neg);
    }
}

TEST_CASE("find_roots returns nothing when omega_p = 0") {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{0.0, 0.5, 0.0, 0.0};
    auto ev = DispersionEvaluator::make(eq, wave);
    auto res = find_roots(ev, {0.0, 3.0, -1.0, 1.0});
    CHECK(res.roots.empty());
    CHECK(res.region_count == 0);
}

TEST_CASE("find_roots locates the Landau root and it matches the damping oracle") {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{0.0, 0.5, 1.0, 0.0};
    auto ev = DispersionEvaluator::make(eq, wave, {48, 192}, Continuation::Plus);
    auto res = find_roots(ev, {0.5, 2.5, -1.0, 0.5});
    REQUIRE(res.roots.size() == 1);
    CHECK(res.region_count == 1);
    CHECK(res.unconverged.empty());
    cdouble root = res.roots[0].z;
    CHECK(res.roots[0].residual < 1e-9);
    CHECK(root.imag() < 0.0);

    // Time-domain decay-fit oracle on the reduced problem.
    auto grid1 = Grid1D::make(384, 8.0);
    auto op = DiscreteOperator1D::make(eq, wave, grid1);
    Field1D f0(wave.k(), grid1);
    for (std::size_t j = 0; j < grid1->v.size(); ++j)
        f0.values[j] = std::exp(-0.5 * grid1->v[j] * grid1->v[j]);
    std::vector<double> times;
    for (int i = 0; i <= 150; ++i) times.push_back(0.1 * i);
    auto traj = integrate_direct(op, f0, times);
    std::vector<cdouble> moments;
    for (auto& p : traj) moments.push_back(p.moment);
    auto fit = fit_rate(times, moments, 2.0, 15.0);
    CHECK(std::abs(fit.rate.real() - root.real()) < 0.02 * std::abs(root.real()));
    CHECK(std::abs(fit.rate.imag() - root.imag()) < 0.02 * std::abs(root.imag()));
}

TEST_CASE("find_roots certifies the two-stream instability") {
    auto eq = EquilibriumDistribution::two_stream(2.0, -2.0);
    WaveConfig wave{0.0, 0.26, 1.0, 0.0};
    auto ev = DispersionEvaluator::make(eq, wave, {32, 256}, Continuation::Plus);
    auto res = find_roots(ev, {-1.0, 1.0, 0.02, 1.0});
    REQUIRE(!res.roots.empty());
    bool growing = false;
    for (auto& r : res.roots) {
        CHECK(r.residual < 1e-9);
        if (r.z.imag() > 0.0) growing = true;
    }
    CHECK(growing);
    CHECK(res.region_count == static_cast<int>(res.roots.size()));
}

TEST_CASE("root pairing z, -z* for the symmetric two-stream") {
    auto eq = EquilibriumDistribution::two_stream(2.0, -2.0);
    WaveConfig wave{0.0, 0.26, 1.0, 0.0};
    auto ev = DispersionEvaluator::make(eq, wave, {32, 256}, Continuation::Plus);
    auto res = find_roots(ev, {-1.5, 1.5, 0.02, 1.2});
    for (auto& r : res.roots) {
        cdouble mirror = -std::conj(r.z);
        bool found = false;
        for (auto& s : res.roots)
            if (std::abs(s.z - mirror) < 1e-6) found = true;
        CHECK(found);
    }
}

TEST_CASE("find_roots rejects regions straddling the cut without continuation") {
    auto eq = EquilibriumDistribution::maxwellian();
    WaveConfig wave{0.0, 0.5, 1.0, 0.0};
    auto ev = DispersionEvaluator::make(eq, wave, {32, 128}, Continuation::None);
    CHECK_THROWS_AS(find_roots(ev, {0.5, 2.5, -1.0, 0.5}), std::invalid_argument);
}
