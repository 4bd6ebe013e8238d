#pragma once

#include <string>
#include <vector>

#include "rfheat/errors.hpp"

namespace rfheat {

/// Volume of the unit p-sphere, 2 pi^{(p+1)/2} / Gamma((p+1)/2). Valid for p >= 0
/// (the 0-sphere has "volume" 2).
double unit_sphere_volume(int p);

/// A round p-sphere factor of initial radius `radius0`.
struct RoundFactor {
    int dim = 2;
    double radius0 = 1.0;
};

/// Squared radius a(t)^2 = a0^2 - 2(p-1)t of a round factor under Ricci flow.
/// Throws DomainError for t outside [0, singular time).
double factor_radius_sq(const RoundFactor& f, double t);

/// First time at which the factor collapses, a0^2 / (2(p-1)).
double factor_singular_time(const RoundFactor& f);

/// Product of round spheres evolving homothetically factor by factor.
class ProductGeometry {
public:
    /// Throws ConfigError naming the offending factor field when the factor
    /// list is empty, a dimension is < 2, a radius is not positive, or the
    /// total dimension is < 3.
    explicit ProductGeometry(std::vector<RoundFactor> factors);

    const std::vector<RoundFactor>& factors() const noexcept { return factors_; }
    int dimension() const noexcept { return n_; }
    std::size_t factor_count() const noexcept { return factors_.size(); }
    bool is_single_sphere() const noexcept { return factors_.size() == 1; }

    /// Short label such as "S3(1)xS2(1)".
    std::string label() const;

private:
    std::vector<RoundFactor> factors_;
    int n_ = 0;
};

/// min over factors of the factor singular time.
double singular_time(const ProductGeometry& g);

/// Throws DomainError unless 0 <= t < margin * singular_time(g).
void require_admissible_time(const ProductGeometry& g, double t, double margin = 1.0);

/// R(t) = sum_i p_i (p_i - 1) / a_i(t)^2 (spatially constant on the models).
double scalar_curvature(const ProductGeometry& g, double t);

/// Total volume prod_i omega_{p_i} a_i(t)^{p_i}.
double volume(const ProductGeometry& g, double t);

/// Maximum-principle lower envelope rho(tau) = 1 / (m0 - c_n tau) for R,
/// built from m0 = 1 / inf R(., 0) and c_n = 2/n.
///
/// When inf R(., 0) <= 0 the envelope is marked invalid and every consumer
/// treats rho as identically zero (and chi as identically one).
struct CurvatureEnvelope {
    double m0 = 0.0;
    double c_n = 0.0;
    bool valid = false;

    /// rho(tau), or 0 for an invalid envelope. Throws DomainError if
    /// m0 - c_n tau <= 0.
    double rho(double tau) const;

    /// chi_{t,s} = (m0 - c_n t) / (m0 - c_n s); 1 for an invalid envelope.
    double chi(double t, double s) const;

    /// Time at which the envelope itself blows up (m0 / c_n), or +inf.
    double blowup_time() const;
};

CurvatureEnvelope curvature_envelope(const ProductGeometry& g);

/// Envelope from a raw infimum of the initial scalar curvature; used for the
/// clamp path where inf R(., 0) <= 0.
CurvatureEnvelope envelope_from_infimum(double inf_r0, int n);

/// chi_{t,s} of the geometry's envelope, validating 0 <= s <= t.
double chi(const ProductGeometry& g, double t, double s);

}  // namespace rfheat
