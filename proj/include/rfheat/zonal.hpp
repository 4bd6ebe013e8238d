#pragma once

#include <span>
#include <vector>

#include "rfheat/geometry.hpp"

namespace rfheat {

/// Gauss-Legendre rule in the polar angle of the unit p-sphere, with the
/// zonal measure omega_{p-1} sin^{p-1}(theta) folded into the weights, so that
/// sum_j weight[j] f(theta[j]) approximates the integral of a zonal f over S^p.
struct ZonalQuadrature {
    int p = 2;
    std::vector<double> theta;
    std::vector<double> weight;

    double integrate(std::span<const double> values) const;
    std::size_t size() const noexcept { return theta.size(); }
};

ZonalQuadrature make_zonal_quadrature(int p, int nodes);

/// One zonal rule per factor of a product geometry.
class ProductQuadrature {
public:
    ProductQuadrature(const ProductGeometry& g, int nodes);

    const ZonalQuadrature& factor(std::size_t i) const { return rules_.at(i); }
    std::size_t factor_count() const noexcept { return rules_.size(); }
    int nodes() const noexcept { return nodes_; }

private:
    std::vector<ZonalQuadrature> rules_;
    int nodes_;
};

/// A zonal function on one factor, sampled at that factor's quadrature
/// nodes together with its polar-angle derivative.
struct ZonalSamples {
    std::vector<double> value;
    std::vector<double> dtheta;
};

/// Separable function v(x) = prod_i v_i(theta_i) on a product of spheres.
/// The heat kernel of a product geometry has exactly this form.
struct ProductField {
    std::vector<ZonalSamples> factors;
};

/// Integral of |v|^r against dmu(g(t)).
double field_power_integral(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                            const ProductField& v, double r);

/// Integral of |grad v|^2_{g(t)} against dmu(g(t)).
double field_gradient_integral(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                               const ProductField& v);

}  // namespace rfheat
