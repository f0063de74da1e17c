#include "vlasov/grid.hpp"

#include <stdexcept>

#include "vlasov/special_functions.hpp"

namespace vlasov {

std::shared_ptr<const VelocityGrid> VelocityGrid::make(const GridSpec& spec,
                                                       const EquilibriumDistribution& eq) {
    if (spec.n_perp < 2 || spec.n_par < 2) throw std::invalid_argument("GridSpec: too few nodes");
    auto g = std::make_shared<VelocityGrid>();
    double cut = spec.v_cut > 0.0 ? spec.v_cut : 8.0 * eq.max_sigma() + eq.max_drift();
    g->cut_perp = cut;
    g->cut_par = cut;
    gauss_legendre(spec.n_perp, 0.0, g->cut_perp, g->vperp, g->wperp);
    gauss_legendre(spec.n_par, -g->cut_par, g->cut_par, g->vpar, g->wpar);
    return g;
}

std::shared_ptr<const Grid1D> Grid1D::make(int n, double cut) {
    if (n < 2 || !(cut > 0.0)) throw std::invalid_argument("Grid1D: bad parameters");
    auto g = std::make_shared<Grid1D>();
    g->cut = cut;
    gauss_legendre(n, -cut, cut, g->v, g->w);
    return g;
}

}  // namespace vlasov
