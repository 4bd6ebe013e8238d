#include "rfheat/bounds.hpp"

#include <cmath>

namespace rfheat {

double bound_constant(int n) { return std::pow(2.0 / n, 0.5 * n); }

BoundInputs make_bound_inputs(const ProductGeometry& g, const SobolevProfile& prof, double s, double t,
                              AConvention convention) {
    if (!(s >= 0.0) || !(t > s)) throw DomainError("bound inputs: requires 0 <= s < t");
    require_admissible_time(g, t);
    BoundInputs inp;
    inp.n = g.dimension();
    inp.env = curvature_envelope(g);
    inp.prof = prof;
    inp.s = s;
    inp.t = t;
    inp.convention = convention;
    return inp;
}

double h_integrand(const BoundInputs& inp, double tau) {
    return inp.prof.B(tau) / inp.prof.A(tau) - 0.75 * inp.env.rho(tau);
}

double H(const BoundInputs& inp, double tau) {
    const auto cuts = inp.prof.breakpoints(inp.s, tau);
    return inp.h_offset +
           quad::integrate_piecewise([&](double u) { return h_integrand(inp, u); }, cuts, inp.quad);
}

double H_closed(const BoundInputs& inp, double tau) {
    if (!inp.prof.is_constant()) throw DomainError("H_closed: requires a constant profile");
    double h = inp.prof.B(inp.s) / inp.prof.A(inp.s) * (tau - inp.s);
    if (inp.env.valid) {
        const double num = inp.env.m0 - inp.env.c_n * inp.s;
        const double den = inp.env.m0 - inp.env.c_n * tau;
        if (!(den > 0.0)) throw DomainError("H_closed: m0 - c_n*tau <= 0");
        h -= 0.75 / inp.env.c_n * std::log(num / den);
    }
    return h + inp.h_offset;
}

namespace {

double first_integral(const BoundInputs& inp, double lo, double hi) {
    const double n = inp.n;
    const auto cuts = inp.prof.breakpoints(lo, hi);
    return quad::integrate_piecewise(
        [&](double tau) {
            const double chi = inp.env.chi(tau, inp.s);
            return std::exp(2.0 / n * H(inp, tau)) / (chi * chi * inp.prof.A(tau));
        },
        cuts, inp.quad);
}

double second_integral(const BoundInputs& inp, double lo, double hi) {
    const double n = inp.n;
    const auto cuts = inp.prof.breakpoints(lo, hi);
    return quad::integrate_piecewise(
        [&](double tau) { return std::exp(-2.0 / n * H(inp, tau)) / inp.prof.A(tau); }, cuts, inp.quad);
}

void require_integral(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + ": degenerate time integral");
    }
}

}  // namespace

double alpha_bound(const BoundInputs& inp) {
    const double integral = first_integral(inp, inp.s, inp.t);
    require_integral(integral, "alpha_bound");
    return bound_constant(inp.n) * std::exp(H(inp, inp.t)) / std::pow(integral, 0.5 * inp.n);
}

double beta_bound(const BoundInputs& inp) {
    const double integral = second_integral(inp, inp.s, inp.t);
    require_integral(integral, "beta_bound");
    return bound_constant(inp.n) * std::exp(-H(inp, inp.s)) / std::pow(integral, 0.5 * inp.n);
}

BoundReport kernel_bound(const BoundInputs& inp) {
    if (!(inp.t > inp.s)) throw DomainError("kernel_bound: requires s < t");
    const double mid = 0.5 * (inp.s + inp.t);
    BoundReport r;
    r.n = inp.n;
    r.s = inp.s;
    r.t = inp.t;
    r.m0 = inp.env.m0;
    r.c_n = inp.env.c_n;
    r.envelope_valid = inp.env.valid;
    r.chi_ts = inp.env.chi(inp.t, inp.s);
    r.A_s = inp.prof.A(inp.s);
    r.B_s = inp.prof.B(inp.s);
    r.convention = inp.convention;
    r.C_n = bound_constant(inp.n);
    r.H_mid = H(inp, mid);
    r.I1 = first_integral(inp, inp.s, mid);
    r.I2 = second_integral(inp, mid, inp.t);
    require_integral(r.I1, "kernel_bound");
    require_integral(r.I2, "kernel_bound");
    const double half_n = 0.5 * inp.n;
    r.alpha_bound = r.C_n * std::exp(r.H_mid) / std::pow(r.I1, half_n);
    r.beta_bound = r.C_n * std::exp(-r.H_mid) / std::pow(r.I2, half_n);
    r.kernel_bound = r.C_n / std::pow(r.I1 * r.I2, 0.25 * inp.n);
    if (inp.prof.is_constant() && inp.env.valid) {
        const auto cor = corollary_bound(inp);
        r.corollary_bound = cor.closed_form;
        r.corollary_power_law = cor.power_law;
        r.Ctilde_n = cor.Ctilde_n;
    }
    return r;
}

CorollaryBound corollary_bound(const BoundInputs& inp) {
    if (!inp.prof.is_constant()) throw DomainError("corollary_bound: requires a constant profile");
    if (!(inp.t > inp.s)) throw DomainError("corollary_bound: requires s < t");
    const double n = inp.n;
    const double a = inp.prof.A(inp.s);
    const double b = inp.prof.B(inp.s);
    const double gap = inp.t - inp.s;
    // (n/(2B)) (1 - e^{-x}) with x = (2B/(nA)) gap/2; tends to gap/(2A) as B -> 0.
    double root;
    if (b > 0.0) {
        const double x = 2.0 * b / (n * a) * 0.5 * gap;
        root = n / (2.0 * b) * -std::expm1(-x);
    } else {
        root = gap / (2.0 * a);
    }
    CorollaryBound out;
    out.closed_form = bound_constant(inp.n) / std::pow(root * root, 0.25 * n);
    out.Ctilde_n = bound_constant(inp.n) * std::pow(2.0 * a, 0.5 * n);
    out.power_law = out.Ctilde_n * std::pow(gap, -0.5 * n);
    return out;
}

}  // namespace rfheat
