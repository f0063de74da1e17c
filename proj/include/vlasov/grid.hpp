#pragma once

#include <memory>
#include <vector>

#include "vlasov/equilibrium.hpp"

namespace vlasov {

// Gauss-Legendre velocity quadrature: v_par on [-cut_par, cut_par], v_perp on
// [0, cut_perp]. Gaussian tails beyond 8 sigma are below 1e-14, so the
// truncated integrals are exact to solver tolerance.
struct GridSpec {
    int n_perp = 48;
    int n_par = 96;
    double v_cut = 0.0;  // 0 = auto: 8 max_sigma + max |drift|
};

struct VelocityGrid {
    std::vector<double> vperp, wperp;
    std::vector<double> vpar, wpar;
    double cut_perp = 0.0;
    double cut_par = 0.0;

    std::size_t n_perp() const { return vperp.size(); }
    std::size_t n_par() const { return vpar.size(); }

    static std::shared_ptr<const VelocityGrid> make(const GridSpec& spec,
                                                    const EquilibriumDistribution& eq);
};

// 1D velocity quadrature on [-cut, cut] for the reduced problem.
struct Grid1D {
    std::vector<double> v, w;
    double cut = 0.0;

    static std::shared_ptr<const Grid1D> make(int n, double cut);
};

}  // namespace vlasov
