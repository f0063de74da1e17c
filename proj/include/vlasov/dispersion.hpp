#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "vlasov/equilibrium.hpp"
#include "vlasov/grid.hpp"

namespace vlasov {

enum class Continuation { None, Plus };

// ClosedForm resolves every parallel-velocity integral through the plasma
// dispersion function (exact for the Gaussian-mixture families and
// automatically plus-continued); Quadrature integrates on the velocity grid
// with explicit Landau residue corrections. Auto = ClosedForm.
enum class DispersionMethod { Auto, ClosedForm, Quadrature };

struct DispersionEvaluator {
    EquilibriumDistribution equilibrium;
    WaveConfig wave;
    int n_max = 0;  // harmonic truncation; 0 = auto (grow until converged, cap 200)
    GridSpec grid_spec;
    Continuation continuation = Continuation::None;
    DispersionMethod method = DispersionMethod::Auto;

    std::shared_ptr<const VelocityGrid> grid;
    Reduced1D reduced;

    static DispersionEvaluator make(const EquilibriumDistribution& eq, const WaveConfig& wave,
                                    const GridSpec& spec = {},
                                    Continuation cont = Continuation::None,
                                    DispersionMethod method = DispersionMethod::Auto,
                                    int n_max = 0);
};

inline constexpr int kHarmonicCap = 200;

// epsilon_0(z) = 1 - int etabar(v) / (k v - z) dv.
// None: the defining integral; rejects real z (branch cut) and returns the
// cut function below the axis. Plus: the continuation from Im z > 0, entire
// across the axis.
cdouble epsilon0(const DispersionEvaluator& ev, cdouble z);

// Magnetized dispersion function,
//   epsilon(z) = 1 + pi sum_n int v dv_perp dv_par
//       [J_n J_{n-1} eta_perp + J_n J_{n+1} eta_perp + 2 J_n^2 eta_par]
//       / (z - n omega_0 - k_par v_par),
// J_n = J_n(k_perp v_perp / omega_0). omega_0 = 0 delegates to epsilon0;
// k_par = 0 is the perpendicular-propagation branch (no v_par continuum).
cdouble epsilon(const DispersionEvaluator& ev, cdouble z);

// Harmonic count the auto-truncation rule selected on the last epsilon call
// (diagnostic; not used for control flow).
int last_auto_n_max();

struct RootRegion {
    double re_lo, re_hi, im_lo, im_hi;
};

struct DispersionRoot {
    cdouble z;
    double residual = 0.0;
    int multiplicity_hint = 1;
};

struct RootSearchResult {
    std::vector<DispersionRoot> roots;      // sorted by Re, then Im
    std::vector<cdouble> unconverged;       // Newton failures, never dropped
    int region_count = 0;                   // argument-principle zero count
};

struct RootSearchOptions {
    double residual_tol = 1e-9;
    double boundary_tol = 1e-6;  // minimum |eps| allowed on the region boundary
    int max_newton_iter = 60;
    double dedup_distance = 1e-7;
};

// Argument-principle count on the region boundary, quadtree subdivision, and
// Newton polish (numerically differentiated eps). With Continuation::None the
// region must not straddle the real axis when a parallel continuum exists.
RootSearchResult find_roots(const DispersionEvaluator& ev, const RootRegion& region,
                            const RootSearchOptions& opts = {});

}  // namespace vlasov
