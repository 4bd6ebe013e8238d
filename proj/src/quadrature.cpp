#include "rfheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>
#include <numbers>
#include <string>

namespace rfheat::quad {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (n == 1) return GaussRule{{0.0}, {2.0}};
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on the three-term recurrence.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

GaussRule gauss_legendre(int n, double a, double b) {
    GaussRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

namespace {

const GaussRule& low_rule() {
    static const GaussRule r = gauss_legendre(15);
    return r;
}
const GaussRule& high_rule() {
    static const GaussRule r = gauss_legendre(31);
    return r;
}

double apply(const GaussRule& r, const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return sum * half;
}

struct Panel {
    double a, b, value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel score(const std::function<double(double)>& f, double a, double b, int depth) {
    const double lo = apply(low_rule(), f, a, b);
    const double hi = apply(high_rule(), f, a, b);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw QuadratureError("integrate_adaptive: non-finite integrand on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "]");
    }
    return {a, b, hi, std::abs(hi - lo), depth};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const AdaptiveOptions& opts) {
    AdaptiveResult out;
    if (a == b) return out;
    if (b < a) {
        out = integrate_adaptive(f, b, a, opts);
        out.value = -out.value;
        return out;
    }
    // Global strategy: always bisect the panel with the largest error, so
    // integrable endpoint singularities converge.
    std::priority_queue<Panel> queue;
    queue.push(score(f, a, b, 0));
    double value = queue.top().value, error = queue.top().error;
    constexpr int max_panels = 1 << 16;
    while (error > opts.abs_tol && error > 1e-15 * std::abs(value)) {
        const Panel worst = queue.top();
        if (worst.depth >= opts.max_depth || static_cast<int>(queue.size()) >= max_panels) {
            throw QuadratureError("integrate_adaptive: max depth reached without convergence");
        }
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = score(f, worst.a, mid, worst.depth + 1);
        const Panel right = score(f, mid, worst.b, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    out.value = 0.0;
    out.error = 0.0;
    out.panels = static_cast<int>(queue.size());
    std::vector<Panel> panels;
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& pnl : panels) {
        out.value += pnl.value;
        out.error += pnl.error;
    }
    return out;
}

double integrate_piecewise(const std::function<double(double)>& f, std::span<const double> cuts,
                           const AdaptiveOptions& opts) {
    double total = 0.0;
    const std::size_t pieces = cuts.size() > 1 ? cuts.size() - 1 : 0;
    AdaptiveOptions piece_opts = opts;
    if (pieces > 0) piece_opts.abs_tol = opts.abs_tol / static_cast<double>(pieces);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate_adaptive(f, cuts[i], cuts[i + 1], piece_opts).value;
    }
    return total;
}

}  // namespace rfheat::quad
