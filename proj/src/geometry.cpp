#include "rfheat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rfheat {

double unit_sphere_volume(int p) {
    const double half = 0.5 * (p + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double factor_singular_time(const RoundFactor& f) {
    return f.radius0 * f.radius0 / (2.0 * (f.dim - 1));
}

double factor_radius_sq(const RoundFactor& f, double t) {
    if (!(t >= 0.0) || t >= factor_singular_time(f)) {
        std::ostringstream os;
        os << "factor_radius_sq: t=" << t << " outside [0, " << factor_singular_time(f) << ")";
        throw DomainError(os.str());
    }
    return f.radius0 * f.radius0 - 2.0 * (f.dim - 1) * t;
}

ProductGeometry::ProductGeometry(std::vector<RoundFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ConfigError("geometry", "at least one factor is required");
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = factors_[i];
        const std::string prefix = "geometry[" + std::to_string(i) + "]";
        if (f.dim < 2) throw ConfigError(prefix + ".dim", "sphere dimension must be >= 2");
        if (!(f.radius0 > 0.0) || !std::isfinite(f.radius0)) {
            throw ConfigError(prefix + ".radius0", "initial radius must be positive and finite");
        }
        n_ += f.dim;
    }
    if (n_ < 3) throw ConfigError("geometry", "total dimension must be >= 3");
}

std::string ProductGeometry::label() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << 'x';
        os << 'S' << factors_[i].dim << '(' << factors_[i].radius0 << ')';
    }
    return os.str();
}

double singular_time(const ProductGeometry& g) {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& f : g.factors()) t = std::min(t, factor_singular_time(f));
    return t;
}

void require_admissible_time(const ProductGeometry& g, double t, double margin) {
    const double limit = margin * singular_time(g);
    if (!(t >= 0.0) || !(t < limit)) {
        std::ostringstream os;
        os << "time " << t << " outside admissible interval [0, " << limit << ")";
        throw DomainError(os.str());
    }
}

double scalar_curvature(const ProductGeometry& g, double t) {
    double r = 0.0;
    for (const auto& f : g.factors()) r += f.dim * (f.dim - 1) / factor_radius_sq(f, t);
    return r;
}

double volume(const ProductGeometry& g, double t) {
    double v = 1.0;
    for (const auto& f : g.factors()) {
        v *= unit_sphere_volume(f.dim) * std::pow(factor_radius_sq(f, t), 0.5 * f.dim);
    }
    return v;
}

double CurvatureEnvelope::rho(double tau) const {
    if (!valid) return 0.0;
    const double d = m0 - c_n * tau;
    if (!(d > 0.0)) throw DomainError("curvature envelope: m0 - c_n*tau <= 0");
    return 1.0 / d;
}

double CurvatureEnvelope::chi(double t, double s) const {
    if (!valid) return 1.0;
    const double num = m0 - c_n * t;
    const double den = m0 - c_n * s;
    if (!(num > 0.0) || !(den > 0.0)) throw DomainError("chi: non-positive envelope denominator");
    return num / den;
}

double CurvatureEnvelope::blowup_time() const {
    return valid ? m0 / c_n : std::numeric_limits<double>::infinity();
}

CurvatureEnvelope envelope_from_infimum(double inf_r0, int n) {
    CurvatureEnvelope env;
    env.c_n = 2.0 / n;
    if (inf_r0 > 0.0) {
        env.m0 = 1.0 / inf_r0;
        env.valid = true;
    }
    return env;
}

CurvatureEnvelope curvature_envelope(const ProductGeometry& g) {
    return envelope_from_infimum(scalar_curvature(g, 0.0), g.dimension());
}

double chi(const ProductGeometry& g, double t, double s) {
    if (!(s >= 0.0) || s > t) throw DomainError("chi: requires 0 <= s <= t");
    require_admissible_time(g, t);
    return curvature_envelope(g).chi(t, s);
}

}  // namespace rfheat
