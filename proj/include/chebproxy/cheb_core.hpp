#pragma once

#include "chebproxy/interval.hpp"
#include "chebproxy/parallel.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace chebproxy {

using ScalarFunction = std::function<double(double)>;

/// Chebyshev points of the second kind, x_j = cos(j*pi/n) for j = 0..n,
/// in descending order. n = 0 yields the single point {1}.
std::vector<double> chebyshev_points(std::size_t n);

/// T_k(x) by the three-term recurrence. Rejects |x| > 1.
double cheb_T(std::size_t k, double x);

/// Type-I DCT taking values at the n+1 Chebyshev points (descending order)
/// to the coefficients c_0..c_n of the interpolating Chebyshev sum.
/// Direct O(n^2) summation over a precomputed cosine table.
class DctPlan {
public:
    explicit DctPlan(std::size_t degree);

    std::size_t degree() const noexcept { return n_; }

    void apply(std::span<const double> values, std::span<double> coeffs) const;
    std::vector<double> apply(std::span<const double> values) const;

private:
    std::size_t n_;
    std::vector<double> cos_;  // cos(pi*m/n), m in [0, 2n)
};

/// Clenshaw evaluation of sum_k c_k T_k(t) on the canonical variable.
double clenshaw(std::span<const double> coeffs, double t) noexcept;

/// Coefficients of d/dt sum_k c_k T_k(t). Output length is max(1, n).
std::vector<double> derivative_coefficients(std::span<const double> coeffs);

struct BuildInfo {
    std::optional<double> tolerance;  ///< set by adaptive builds only
    std::size_t oracle_calls = 0;
};

/// p(x) = sum_k c_k T_k(to_canonical(x)) over a fixed domain. Immutable.
class Interpolant1D {
public:
    Interpolant1D(Interval domain, std::vector<double> coeffs,
                  EvalPolicy policy = EvalPolicy::strict, BuildInfo info = {});

    const Interval& domain() const noexcept { return domain_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    EvalPolicy policy() const noexcept { return policy_; }
    const BuildInfo& build_info() const noexcept { return info_; }

    Interpolant1D with_policy(EvalPolicy policy) const;

    double operator()(double x) const;

private:
    Interval domain_;
    std::vector<double> coeffs_;
    EvalPolicy policy_;
    BuildInfo info_;
};

/// Anchor points (domain units) and the oracle values at them.
struct AnchorGrid1D {
    Interval domain;
    std::vector<double> points;
    std::vector<double> values;
};

/// Calls f exactly n+1 times. Non-finite values raise ErrorKind::non_finite.
AnchorGrid1D sample_anchor_grid(const ScalarFunction& f, const Interval& domain, std::size_t n,
                                Execution exec = Execution::sequential);

Interpolant1D interpolant_from_values(const Interval& domain, std::span<const double> values,
                                      EvalPolicy policy = EvalPolicy::strict, BuildInfo info = {});

Interpolant1D build_interpolant(const ScalarFunction& f, const Interval& domain, std::size_t n,
                                Execution exec = Execution::sequential);

double evaluate(const Interpolant1D& p, double x);

/// Exact derivative, chain-rule factor 2/(hi-lo) included. Degree drops by one;
/// a constant differentiates to the zero constant.
Interpolant1D differentiate(const Interpolant1D& p);

inline constexpr std::size_t default_tail_length = 2;

struct ErrorReport {
    double ex_ante_estimate = 0.0;
    std::vector<double> trailing_tail;
    bool converged = false;
    std::size_t degree_used = 0;
};

/// Max |c_k| over the last `tail_len` coefficients. `converged` compares the
/// estimate against the tolerance recorded by an adaptive build.
ErrorReport ex_ante_error(const Interpolant1D& p, std::size_t tail_len = default_tail_length);

/// Doubling schedule n = 4, 8, 16, ... up to max_degree. Values at nested
/// points are reused, so f is called at most max_degree+1 times. If the tail
/// never drops below tol the last interpolant is returned unconverged.
Interpolant1D build_adaptive(const ScalarFunction& f, const Interval& domain, double tol,
                             std::size_t max_degree);

/// Degree-n polynomial through n+1 equispaced points, barycentric form.
/// Exists to demonstrate the Runge phenomenon.
class EquispacedInterpolant {
public:
    EquispacedInterpolant(const ScalarFunction& f, const Interval& domain, std::size_t n);

    std::size_t degree() const noexcept { return nodes_.size() - 1; }
    double operator()(double x) const;

private:
    Interval domain_;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> weights_;
};

EquispacedInterpolant equidistant_interpolant(const ScalarFunction& f, const Interval& domain,
                                              std::size_t n);

}  // namespace chebproxy
