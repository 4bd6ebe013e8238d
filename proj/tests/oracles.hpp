#pragma once

// Reference computations that share no code with the library. Each one is
// deliberately naive: fixed steps, plain loops, no caching.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

constexpr double pi = 3.14159265358979323846;

/// Classical RK4 for y' = f(t, y) on [t0, t1] with `steps` equal steps.
inline double rk4(const std::function<double(double, double)>& f, double y0, double t0, double t1, int steps) {
    const double h = (t1 - t0) / steps;
    double y = y0, t = t0;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(t, y);
        const double k2 = f(t + h / 2, y + h / 2 * k1);
        const double k3 = f(t + h / 2, y + h / 2 * k2);
        const double k4 = f(t + h, y + h * k3);
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return y;
}

/// Root of f on [lo, hi] by bisection, assuming a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3;
}

/// Exact rational arithmetic for small numerators and denominators.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
    friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
    friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
};

/// Scalar curvature of the warped metric dr^2 + f(r)^2 g_{S^{p-1}} at r,
/// R = -2(p-1) f''/f + (p-1)(p-2)(1 - f'^2)/f^2, with f', f'' by central
/// differences of step h.
inline double warped_scalar_curvature(const std::function<double(double)>& f, int p, double r, double h = 1e-4) {
    const double f0 = f(r);
    const double d1 = (f(r + h) - f(r - h)) / (2 * h);
    const double d2 = (f(r + h) - 2 * f0 + f(r - h)) / (h * h);
    return -2.0 * (p - 1) * d2 / f0 + (p - 1.0) * (p - 2.0) * (1 - d1 * d1) / (f0 * f0);
}

/// The k-th smallest eigenvalue (k = 0, 1, ...) of -Laplacian on zonal
/// functions of the unit p-sphere, from a second-order flux discretization on
/// N cells of [0, pi], symmetrized and solved by Sturm-sequence bisection.
inline double zonal_eigenvalue(int p, int k, int N = 2000) {
    const double h = pi / N;
    std::vector<double> vol(N + 1), face(N + 2, 0.0);
    for (int j = 0; j <= N; ++j) {
        const double lo = std::max(0.0, (j - 0.5) * h), hi = std::min(pi, (j + 0.5) * h);
        vol[j] = simpson([p](double x) { return std::pow(std::sin(x), p - 1); }, lo, hi, 16);
    }
    for (int j = 1; j <= N; ++j) face[j] = std::pow(std::sin((j - 0.5) * h), p - 1) / h;
    // Symmetric tridiagonal S = V^{-1/2} K V^{-1/2}.
    std::vector<double> diag(N + 1), off(N + 1, 0.0);
    for (int j = 0; j <= N; ++j) diag[j] = (face[j] + face[j + 1]) / vol[j];
    for (int j = 1; j <= N; ++j) off[j] = -face[j] / std::sqrt(vol[j - 1] * vol[j]);
    auto count_below = [&](double x) {
        int count = 0;
        double q = diag[0] - x;
        if (q < 0) ++count;
        for (int j = 1; j <= N; ++j) {
            if (q == 0.0) q = 1e-300;
            q = diag[j] - x - off[j] * off[j] / q;
            if (q < 0) ++count;
        }
        return count;
    };
    double lo = -1.0, hi = 1.0;
    while (count_below(hi) <= k) hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) <= k) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Chebyshev U_k(cos theta) = sin((k+1) theta) / sin(theta).
inline double chebyshev_u(int k, double theta) {
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-12) return theta < 1.0 ? k + 1.0 : (k % 2 ? -1.0 : 1.0) * (k + 1.0);
    return std::sin((k + 1) * theta) / s;
}

}  // namespace oracle
