#include "rfheat/zonal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfheat/quadrature.hpp"

namespace rfheat {

double ZonalQuadrature::integrate(std::span<const double> values) const {
    if (values.size() != weight.size()) throw std::invalid_argument("ZonalQuadrature: size mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < weight.size(); ++j) sum += weight[j] * values[j];
    return sum;
}

ZonalQuadrature make_zonal_quadrature(int p, int nodes) {
    if (p < 1) throw std::invalid_argument("make_zonal_quadrature: p must be >= 1");
    const auto rule = quad::gauss_legendre(nodes, 0.0, std::numbers::pi);
    const double shell = unit_sphere_volume(p - 1);
    ZonalQuadrature zq;
    zq.p = p;
    zq.theta = rule.nodes;
    zq.weight.resize(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        zq.weight[j] = shell * std::pow(std::sin(rule.nodes[j]), p - 1) * rule.weights[j];
    }
    return zq;
}

ProductQuadrature::ProductQuadrature(const ProductGeometry& g, int nodes) : nodes_(nodes) {
    if (nodes < 2) throw ConfigError("quadrature.nodes", "must be >= 2");
    rules_.reserve(g.factor_count());
    for (const auto& f : g.factors()) rules_.push_back(make_zonal_quadrature(f.dim, nodes));
}

namespace {

void check_shape(const ProductGeometry& g, const ProductQuadrature& quad, const ProductField& v) {
    if (v.factors.size() != g.factor_count() || quad.factor_count() != g.factor_count()) {
        throw std::invalid_argument("ProductField: factor count mismatch");
    }
}

double factor_moment(const ZonalQuadrature& zq, const std::vector<double>& samples, double r) {
    double sum = 0.0;
    for (std::size_t j = 0; j < zq.size(); ++j) sum += zq.weight[j] * std::pow(std::abs(samples[j]), r);
    return sum;
}

}  // namespace

double field_power_integral(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                            const ProductField& v, double r) {
    check_shape(g, quad, v);
    double total = 1.0;
    for (std::size_t i = 0; i < g.factor_count(); ++i) {
        const auto& f = g.factors()[i];
        const double a2 = factor_radius_sq(f, t);
        total *= std::pow(a2, 0.5 * f.dim) * factor_moment(quad.factor(i), v.factors[i].value, r);
    }
    return total;
}

double field_gradient_integral(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                               const ProductField& v) {
    check_shape(g, quad, v);
    const std::size_t m = g.factor_count();
    std::vector<double> l2(m);
    std::vector<double> grad(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& f = g.factors()[i];
        const double a2 = factor_radius_sq(f, t);
        const double measure = std::pow(a2, 0.5 * f.dim);
        l2[i] = measure * factor_moment(quad.factor(i), v.factors[i].value, 2.0);
        grad[i] = measure / a2 * factor_moment(quad.factor(i), v.factors[i].dtheta, 2.0);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double term = grad[i];
        for (std::size_t k = 0; k < m; ++k) {
            if (k != i) term *= l2[k];
        }
        total += term;
    }
    return total;
}

}  // namespace rfheat
