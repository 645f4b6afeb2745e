#include "chebproxy/cheb_core.hpp"

#include "chebproxy/error.hpp"
#include "chebproxy/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chebproxy {

namespace {

// cos(j*pi/n) written as sin(pi*(n-2j)/(2n)): exactly symmetric, exact 0 at
// the midpoint and exact +-1 at the ends. The ratio is formed first so that
// grids n and 2n produce bit-identical values at shared points.
double chebyshev_point(std::size_t j, std::size_t n) {
    const double ratio = (static_cast<double>(n) - 2.0 * static_cast<double>(j)) /
                         (2.0 * static_cast<double>(n));
    return std::sin(std::numbers::pi * ratio);
}

void check_finite_value(double v, double x, std::size_t j) {
    if (!std::isfinite(v))
        fail(ErrorKind::non_finite, "oracle returned " + to_shortest(v) + " at anchor " +
                                        std::to_string(j) + " (x = " + to_shortest(x) + ")");
}

}  // namespace

std::vector<double> chebyshev_points(std::size_t n) {
    if (n == 0) return {1.0};
    std::vector<double> pts(n + 1);
    for (std::size_t j = 0; j <= n; ++j) pts[j] = chebyshev_point(j, n);
    return pts;
}

double cheb_T(std::size_t k, double x) {
    if (!(std::abs(x) <= 1.0))
        fail(ErrorKind::domain, "cheb_T argument " + to_shortest(x) + " outside [-1, 1]");
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (std::size_t i = 1; i < k; ++i) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

DctPlan::DctPlan(std::size_t degree) : n_(degree) {
    if (n_ == 0) return;
    cos_.resize(2 * n_);
    for (std::size_t m = 0; m <= n_; ++m) cos_[m] = chebyshev_point(m, n_);
    for (std::size_t m = n_ + 1; m < 2 * n_; ++m) cos_[m] = cos_[2 * n_ - m];
}

void DctPlan::apply(std::span<const double> values, std::span<double> coeffs) const {
    if (values.size() != n_ + 1 || coeffs.size() != n_ + 1)
        fail(ErrorKind::invalid_argument, "DCT size mismatch: plan degree " + std::to_string(n_) +
                                              ", got " + std::to_string(values.size()) + " values");
    if (n_ == 0) {
        coeffs[0] = values[0];
        return;
    }
    const std::size_t period = 2 * n_;
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k <= n_; ++k) {
        double sum = 0.5 * (values[0] + (k % 2 == 0 ? values[n_] : -values[n_]));
        std::size_t m = k;  // j*k mod 2n, advanced incrementally
        for (std::size_t j = 1; j < n_; ++j, m += k) {
            if (m >= period) m %= period;
            sum += values[j] * cos_[m];
        }
        const double weight = (k == 0 || k == n_) ? 1.0 : 2.0;
        coeffs[k] = weight * scale * sum;
    }
}

std::vector<double> DctPlan::apply(std::span<const double> values) const {
    std::vector<double> coeffs(n_ + 1);
    apply(values, coeffs);
    return coeffs;
}

double clenshaw(std::span<const double> coeffs, double t) noexcept {
    double b1 = 0.0;
    double b2 = 0.0;
    const double two_t = 2.0 * t;
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
        const double b0 = coeffs[k] + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coeffs[0] + t * b1 - b2;
}

std::vector<double> derivative_coefficients(std::span<const double> coeffs) {
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) return {0.0};
    std::vector<double> d(n + 2, 0.0);
    for (std::size_t k = n; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * static_cast<double>(k) * coeffs[k];
    d[0] *= 0.5;
    d.resize(n);
    return d;
}

Interpolant1D::Interpolant1D(Interval domain, std::vector<double> coeffs, EvalPolicy policy,
                             BuildInfo info)
    : domain_(domain), coeffs_(std::move(coeffs)), policy_(policy), info_(info) {
    if (coeffs_.empty()) fail(ErrorKind::invalid_argument, "interpolant needs at least one coefficient");
}

Interpolant1D Interpolant1D::with_policy(EvalPolicy policy) const {
    return Interpolant1D(domain_, coeffs_, policy, info_);
}

double Interpolant1D::operator()(double x) const {
    return clenshaw(coeffs_, domain_.canonical_checked(x, policy_));
}

AnchorGrid1D sample_anchor_grid(const ScalarFunction& f, const Interval& domain, std::size_t n,
                                Execution exec) {
    AnchorGrid1D grid{domain, chebyshev_points(n), std::vector<double>(n + 1)};
    for (auto& p : grid.points) p = domain.from_canonical(p);
    parallel_for(n + 1, exec, [&](std::size_t j) { grid.values[j] = f(grid.points[j]); });
    for (std::size_t j = 0; j <= n; ++j) check_finite_value(grid.values[j], grid.points[j], j);
    return grid;
}

Interpolant1D interpolant_from_values(const Interval& domain, std::span<const double> values,
                                      EvalPolicy policy, BuildInfo info) {
    if (values.empty()) fail(ErrorKind::invalid_argument, "no anchor values");
    const DctPlan plan(values.size() - 1);
    return Interpolant1D(domain, plan.apply(values), policy, info);
}

Interpolant1D build_interpolant(const ScalarFunction& f, const Interval& domain, std::size_t n,
                                Execution exec) {
    const auto grid = sample_anchor_grid(f, domain, n, exec);
    return interpolant_from_values(domain, grid.values, EvalPolicy::strict,
                                   BuildInfo{std::nullopt, n + 1});
}

double evaluate(const Interpolant1D& p, double x) { return p(x); }

Interpolant1D differentiate(const Interpolant1D& p) {
    auto d = derivative_coefficients(p.coeffs());
    const double chain = 2.0 / p.domain().width();
    for (auto& c : d) c *= chain;
    return Interpolant1D(p.domain(), std::move(d), p.policy());
}

ErrorReport ex_ante_error(const Interpolant1D& p, std::size_t tail_len) {
    const auto c = p.coeffs();
    if (tail_len < 1 || tail_len > c.size())
        fail(ErrorKind::invalid_argument, "tail length " + std::to_string(tail_len) +
                                              " outside [1, " + std::to_string(c.size()) + "]");
    ErrorReport report;
    report.degree_used = p.degree();
    for (std::size_t k = c.size() - tail_len; k < c.size(); ++k) {
        report.trailing_tail.push_back(std::abs(c[k]));
        report.ex_ante_estimate = std::max(report.ex_ante_estimate, std::abs(c[k]));
    }
    const auto& tol = p.build_info().tolerance;
    report.converged = tol.has_value() && report.ex_ante_estimate < *tol;
    return report;
}

Interpolant1D build_adaptive(const ScalarFunction& f, const Interval& domain, double tol,
                             std::size_t max_degree) {
    if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "adaptive tolerance must be positive");
    if (max_degree < 4) fail(ErrorKind::invalid_argument, "adaptive max_degree must be at least 4");

    std::size_t calls = 0;
    auto sample = [&](std::size_t j, std::size_t n) {
        const double x = domain.from_canonical(chebyshev_point(j, n));
        const double v = f(x);
        ++calls;
        check_finite_value(v, x, j);
        return v;
    };

    std::size_t n = 4;
    std::vector<double> values(n + 1);
    for (std::size_t j = 0; j <= n; ++j) values[j] = sample(j, n);

    while (true) {
        auto p = interpolant_from_values(domain, values, EvalPolicy::strict, BuildInfo{tol, calls});
        if (ex_ante_error(p).converged || 2 * n > max_degree) return p;
        // Grid n sits at the even indices of grid 2n.
        std::vector<double> next(2 * n + 1);
        for (std::size_t j = 0; j <= 2 * n; ++j)
            next[j] = (j % 2 == 0) ? values[j / 2] : sample(j, 2 * n);
        values = std::move(next);
        n *= 2;
    }
}

EquispacedInterpolant::EquispacedInterpolant(const ScalarFunction& f, const Interval& domain,
                                             std::size_t n)
    : domain_(domain) {
    if (n < 1) fail(ErrorKind::invalid_argument, "equispaced interpolation needs n >= 1");
    nodes_.resize(n + 1);
    values_.resize(n + 1);
    weights_.resize(n + 1);
    double w = 1.0;
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > 0) w = -w * static_cast<double>(n - j + 1) / static_cast<double>(j);
        weights_[j] = w;
        nodes_[j] = j == n ? domain.hi()
                           : domain.lo() + domain.width() * static_cast<double>(j) / static_cast<double>(n);
        values_[j] = f(nodes_[j]);
        check_finite_value(values_[j], nodes_[j], j);
    }
}

double EquispacedInterpolant::operator()(double x) const {
    domain_.canonical_checked(x, EvalPolicy::strict);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double diff = x - nodes_[j];
        if (diff == 0.0) return values_[j];
        const double q = weights_[j] / diff;
        num += q * values_[j];
        den += q;
    }
    return num / den;
}

EquispacedInterpolant equidistant_interpolant(const ScalarFunction& f, const Interval& domain,
                                              std::size_t n) {
    return EquispacedInterpolant(f, domain, n);
}

}  // namespace chebproxy
