#include "rfheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rfheat/errors.hpp"
#include "rfheat/quadrature.hpp"

namespace rfheat {

double eigenvalue(int p, int k) { return static_cast<double>(k) * (k + p - 1); }

double harmonic_dimension(int p, int k) {
    // (2k+p-1)/(p-1) * binom(k+p-2, p-2)
    double binom = 1.0;
    for (int i = 1; i <= p - 2; ++i) binom *= static_cast<double>(k + i) / i;
    return (2.0 * k + p - 1) / (p - 1) * binom;
}

void zonal_harmonics(int p, double c, std::span<double> z, std::span<double> dz) {
    const double lam = 0.5 * (p - 1);
    const double inv_omega = 1.0 / unit_sphere_volume(p);
    const std::size_t n = z.size();
    double cm1 = 0.0;  // C_{k-1}^lam
    double ck = 1.0;   // C_k^lam
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = (k + lam) / lam * ck * inv_omega;
        const double next = (2.0 * (k + lam) * c * ck - (k + 2.0 * lam - 1.0) * cm1) / (k + 1.0);
        cm1 = ck;
        ck = next;
    }
    if (dz.empty()) return;
    const double mu = lam + 1.0;
    double em1 = 0.0;  // C_{j-1}^{lam+1}
    double ej = 1.0;   // C_j^{lam+1}
    for (std::size_t k = 0; k < dz.size(); ++k) {
        if (k == 0) {
            dz[0] = 0.0;
            continue;
        }
        const std::size_t j = k - 1;
        dz[k] = 2.0 * (k + lam) * ej * inv_omega;
        const double next = (2.0 * (j + mu) * c * ej - (j + 2.0 * mu - 1.0) * em1) / (j + 1.0);
        em1 = ej;
        ej = next;
    }
}

double zonal_harmonic(int p, int k, double c) {
    std::vector<double> z(static_cast<std::size_t>(k) + 1);
    zonal_harmonics(p, c, z);
    return z.back();
}

NormalizedGegenbauer normalized_gegenbauer(int p, int k, double c) {
    std::vector<double> z(static_cast<std::size_t>(k) + 1);
    std::vector<double> dz(z.size());
    zonal_harmonics(p, c, z, dz);
    const double at_one = harmonic_dimension(p, k) / unit_sphere_volume(p);
    return {z.back() / at_one, dz.back() / at_one};
}

double conformal_time(const RoundFactor& f, double s, double t) {
    if (!(s >= 0.0) || s > t) throw DomainError("conformal_time: requires 0 <= s <= t");
    const double as = factor_radius_sq(f, s);
    const double at = factor_radius_sq(f, t);
    return std::log(as / at) / (2.0 * (f.dim - 1));
}

FactorSeries::FactorSeries(const RoundFactor& f, double s, double t, const SeriesConfig& cfg)
    : factor_(f) {
    if (cfg.k_max < 0) throw ConfigError("series.k_max", "must be >= 0");
    if (!(cfg.tail_tol > 0.0)) throw ConfigError("series.tail_tol", "must be positive");
    sigma_ = conformal_time(f, s, t);
    if (cfg.enforce_tail && sigma_ < cfg.sigma_min) {
        std::ostringstream os;
        os << "kernel: conformal gap " << sigma_ << " below sigma_min " << cfg.sigma_min;
        throw ConvergenceError(os.str());
    }
    const int p = f.dim;
    const double inv_omega = 1.0 / unit_sphere_volume(p);
    scale_ = std::pow(factor_radius_sq(f, s), -0.5 * p);
    // Upper bounds on |term_k| and |d term_k / dc| uniformly in c.
    auto bound = [&](int k) {
        return scale_ * std::exp(-eigenvalue(p, k) * sigma_) * harmonic_dimension(p, k) * inv_omega;
    };
    auto dbound = [&](int k) { return bound(k) * eigenvalue(p, k) / p; };

    tail_ = std::numeric_limits<double>::infinity();
    bool converged = false;
    sum_scale_ = scale_ * inv_omega;
    for (int k = 0; k <= cfg.k_max; ++k) {
        weights_.push_back(std::exp(-eigenvalue(p, k) * sigma_));
        const double t1 = bound(k + 1);
        if (t1 == 0.0) {
            tail_ = 0.0;
            converged = true;
            break;
        }
        const double r = bound(k + 2) / t1;
        const double d1 = dbound(k + 1);
        const double rd = dbound(k + 2) / d1;
        if (r < 1.0 && rd < 1.0) {
            const double tail = t1 / (1.0 - r);
            const double dtail = d1 / (1.0 - rd);
            tail_ = tail;
            if (tail <= cfg.tail_tol && dtail <= cfg.tail_tol) {
                converged = true;
                break;
            }
        }
    }
    if (!converged && cfg.enforce_tail) {
        std::ostringstream os;
        os << "kernel: series not converged at k_max=" << cfg.k_max << " (tail bound " << tail_
           << ", tolerance " << cfg.tail_tol << ")";
        throw ConvergenceError(os.str());
    }
}

namespace {

// sin and cos of theta with exact zeros at the poles.
std::pair<double, double> polar(double theta) {
    if (theta <= 0.0) return {0.0, 1.0};
    if (theta >= std::numbers::pi) return {0.0, -1.0};
    const double s = theta > 0.5 * std::numbers::pi ? std::sin(std::numbers::pi - theta) : std::sin(theta);
    return {s, std::cos(theta)};
}

}  // namespace

namespace {

// sum_k w_k Z_k(c) and, optionally, sum_k w_k Z_k'(c) by running both
// Gegenbauer recurrences alongside the accumulation.
std::pair<double, double> accumulate(int p, const std::vector<double>& w, double c, bool deriv) {
    // Returned sums are still to be divided by the unit-sphere volume.
    const double lam = 0.5 * (p - 1);
    const double mu = lam + 1.0;
    double cm1 = 0.0, ck = 1.0;  // C_{k-1}^lam, C_k^lam
    double em1 = 0.0, ej = 1.0;  // C_{k-2}^{lam+1}, C_{k-1}^{lam+1}
    double sum = 0.0, dsum = 0.0;
    const std::size_t n = w.size();
    for (std::size_t k = 0; k < n; ++k) {
        sum += w[k] * (k + lam) / lam * ck;
        const double next = (2.0 * (k + lam) * c * ck - (k + 2.0 * lam - 1.0) * cm1) / (k + 1.0);
        cm1 = ck;
        ck = next;
        if (deriv && k >= 1) {
            const std::size_t j = k - 1;
            dsum += w[k] * 2.0 * (k + lam) * ej;
            const double enext = (2.0 * (j + mu) * c * ej - (j + 2.0 * mu - 1.0) * em1) / (j + 1.0);
            em1 = ej;
            ej = enext;
        }
    }
    return {sum, dsum};
}

}  // namespace

double FactorSeries::value(double theta) const {
    const auto [sn, c] = polar(theta);
    return sum_scale_ * accumulate(factor_.dim, weights_, c, false).first;
}

FactorSeries::Sample FactorSeries::sample(double theta) const {
    const auto [sn, c] = polar(theta);
    const auto [sum, dsum] = accumulate(factor_.dim, weights_, c, true);
    return {sum_scale_ * sum, -sn * sum_scale_ * dsum};
}

double FactorSeries::parseval_unit() const {
    const int p = factor_.dim;
    const double inv_omega = 1.0 / unit_sphere_volume(p);
    double sum = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        sum += weights_[k] * weights_[k] * harmonic_dimension(p, static_cast<int>(k)) * inv_omega;
    }
    return scale_ * scale_ * sum;
}

std::vector<FactorSeries> make_series(const ProductGeometry& g, double s, double t,
                                      const SeriesConfig& cfg) {
    if (!(t > s)) throw DomainError("kernel: requires s < t");
    std::vector<FactorSeries> out;
    out.reserve(g.factor_count());
    for (const auto& f : g.factors()) out.emplace_back(f, s, t, cfg);
    return out;
}

namespace {

void check_angles(const ProductGeometry& g, std::span<const double> angles) {
    if (angles.size() != g.factor_count()) {
        throw std::invalid_argument("kernel: expected one angle per factor");
    }
    for (double a : angles) {
        if (!(a >= 0.0 && a <= std::numbers::pi)) throw DomainError("kernel: angle outside [0, pi]");
    }
}

}  // namespace

KernelValue kernel(const ProductGeometry& g, const KernelQuery& q, const SeriesConfig& cfg) {
    check_angles(g, q.angles);
    const auto series = make_series(g, q.s, q.t, cfg);
    double value = 1.0;
    double upper = 1.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double v = series[i].value(q.angles[i]);
        value *= v;
        upper *= std::abs(v) + series[i].tail_bound();
    }
    return {value, upper - std::abs(value)};
}

double kernel_gradient_sq(const ProductGeometry& g, const KernelQuery& q, const SeriesConfig& cfg) {
    check_angles(g, q.angles);
    const auto series = make_series(g, q.s, q.t, cfg);
    const std::size_t m = series.size();
    std::vector<FactorSeries::Sample> samples;
    samples.reserve(m);
    for (std::size_t i = 0; i < m; ++i) samples.push_back(series[i].sample(q.angles[i]));
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double term = samples[i].dtheta * samples[i].dtheta / factor_radius_sq(g.factors()[i], q.t);
        for (std::size_t k = 0; k < m; ++k) {
            if (k != i) term *= samples[k].value * samples[k].value;
        }
        total += term;
    }
    return total;
}

ProductField kernel_snapshot(const ProductGeometry& g, double s, double t,
                             const ProductQuadrature& quad, const SeriesConfig& cfg) {
    const auto series = make_series(g, s, t, cfg);
    ProductField field;
    field.factors.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& zq = quad.factor(i);
        auto& out = field.factors[i];
        out.value.resize(zq.size());
        out.dtheta.resize(zq.size());
        for (std::size_t j = 0; j < zq.size(); ++j) {
            const auto smp = series[i].sample(zq.theta[j]);
            out.value[j] = smp.value;
            out.dtheta[j] = smp.dtheta;
        }
    }
    return field;
}

double mass_in_y(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
                 const SeriesConfig& cfg) {
    return field_power_integral(g, s, quad, kernel_snapshot(g, s, t, quad, cfg), 1.0);
}

double mass_in_x(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
                 const SeriesConfig& cfg) {
    return field_power_integral(g, t, quad, kernel_snapshot(g, s, t, quad, cfg), 1.0);
}

double alpha(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
             const SeriesConfig& cfg) {
    return field_power_integral(g, t, quad, kernel_snapshot(g, s, t, quad, cfg), 2.0);
}

double beta(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
            const SeriesConfig& cfg) {
    return field_power_integral(g, s, quad, kernel_snapshot(g, s, t, quad, cfg), 2.0);
}

namespace {

double parseval(const ProductGeometry& g, double s, double t, double measure_time,
                const SeriesConfig& cfg) {
    const auto series = make_series(g, s, t, cfg);
    double total = 1.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& f = g.factors()[i];
        total *= std::pow(factor_radius_sq(f, measure_time), 0.5 * f.dim) * series[i].parseval_unit();
    }
    return total;
}

}  // namespace

double alpha_parseval(const ProductGeometry& g, double s, double t, const SeriesConfig& cfg) {
    return parseval(g, s, t, t, cfg);
}

double beta_parseval(const ProductGeometry& g, double s, double t, const SeriesConfig& cfg) {
    return parseval(g, s, t, s, cfg);
}

double gradient_energy_in_x(const ProductGeometry& g, double s, double t,
                            const ProductQuadrature& quad, const SeriesConfig& cfg) {
    return field_gradient_integral(g, t, quad, kernel_snapshot(g, s, t, quad, cfg));
}

double semigroup_composition(const ProductGeometry& g, std::span<const double> angles, double s,
                             double m, double t, const SeriesConfig& cfg, int nodes) {
    check_angles(g, angles);
    if (!(s < m && m < t)) throw DomainError("semigroup_composition: requires s < m < t");
    const auto rule = quad::gauss_legendre(nodes, 0.0, std::numbers::pi);
    double total = 1.0;
    for (std::size_t i = 0; i < g.factor_count(); ++i) {
        const auto& f = g.factors()[i];
        const int p = f.dim;
        const FactorSeries late(f, m, t, cfg);   // G(x,t; z,m)
        const FactorSeries early(f, s, m, cfg);  // G(z,m; y,s)
        const auto [sin_x, cos_x] = polar(angles[i]);
        double integral = 0.0;
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
            const double phi = rule.nodes[a];
            const double g_early = early.value(phi);
            const double sp = std::sin(phi);
            const double cp = std::cos(phi);
            double inner = 0.0;
            for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
                const double psi = rule.nodes[b];
                const double c = std::clamp(cos_x * cp + sin_x * sp * std::cos(psi), -1.0, 1.0);
                const double g_late = late.value(std::acos(c));
                inner += rule.weights[b] * std::pow(std::sin(psi), p - 2) * g_late;
            }
            integral += rule.weights[a] * std::pow(sp, p - 1) * g_early * inner;
        }
        integral *= unit_sphere_volume(p - 2) * std::pow(factor_radius_sq(f, m), 0.5 * p);
        total *= integral;
    }
    return total;
}

}  // namespace rfheat
