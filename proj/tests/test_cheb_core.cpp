#include "chebproxy/cheb_core.hpp"
#include "chebproxy/error.hpp"
#include "chebproxy/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace chebproxy {
namespace {

std::vector<double> probes(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

// T_k via the trigonometric definition, independent of the recurrence.
double t_trig(std::size_t k, double x) { return std::cos(static_cast<double>(k) * std::acos(x)); }

double naive_sum(std::span<const double> c, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * t_trig(k, t);
    return s;
}

double sup_error(const Interpolant1D& p, double (*f)(double), std::size_t n = 1001) {
    double worst = 0.0;
    for (double x : probes(p.domain().lo(), p.domain().hi(), n)) worst = std::max(worst, std::abs(p(x) - f(x)));
    return worst;
}

double runge(double x) { return 1.0 / (1.0 + 25.0 * x * x); }

// ---------------------------------------------------------------------------

TEST(Interval, RejectsDegenerateAndNonFinite) {
    EXPECT_THROW(Interval(1.0, 1.0), Error);
    EXPECT_THROW(Interval(2.0, 1.0), Error);
    EXPECT_THROW(Interval(0.0, INFINITY), Error);
    EXPECT_THROW(Interval(NAN, 1.0), Error);
}

TEST(Interval, CanonicalMapRoundTrips) {
    const Interval iv(-3.0, 7.5);
    EXPECT_EQ(iv.to_canonical(-3.0), -1.0);
    EXPECT_EQ(iv.to_canonical(7.5), 1.0);
    EXPECT_EQ(iv.from_canonical(-1.0), -3.0);
    EXPECT_EQ(iv.from_canonical(1.0), 7.5);
    for (double t : probes(-1.0, 1.0, 101)) EXPECT_NEAR(iv.to_canonical(iv.from_canonical(t)), t, 4e-16);
}

TEST(Interval, StrictPolicyNamesTheBound) {
    const Interval iv(0.0, 2.0);
    try {
        iv.canonical_checked(2.5, EvalPolicy::strict);
        FAIL() << "expected a domain error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
        EXPECT_NE(std::string(e.what()).find("upper bound"), std::string::npos);
    }
    EXPECT_EQ(iv.canonical_checked(2.5, EvalPolicy::clamp), 1.0);
    EXPECT_EQ(iv.canonical_checked(-1.0, EvalPolicy::clamp), -1.0);
}

// ---------------------------------------------------------------------------

TEST(ChebyshevPoints, SmallCases) {
    EXPECT_EQ(chebyshev_points(0), std::vector<double>{1.0});
    EXPECT_EQ(chebyshev_points(1), (std::vector<double>{1.0, -1.0}));
    EXPECT_EQ(chebyshev_points(2), (std::vector<double>{1.0, 0.0, -1.0}));
    const auto p4 = chebyshev_points(4);
    ASSERT_EQ(p4.size(), 5u);
    EXPECT_NEAR(p4[1], std::cos(std::numbers::pi / 4), 2e-16);
    EXPECT_EQ(p4[2], 0.0);
    EXPECT_NEAR(p4[3], -std::cos(std::numbers::pi / 4), 2e-16);
}

TEST(ChebyshevPoints, DecreasingSymmetricAndNested) {
    for (std::size_t n : {3, 8, 17, 64, 255}) {
        const auto x = chebyshev_points(n);
        ASSERT_EQ(x.size(), n + 1);
        EXPECT_EQ(x.front(), 1.0);
        EXPECT_EQ(x.back(), -1.0);
        for (std::size_t j = 0; j < n; ++j) EXPECT_GT(x[j], x[j + 1]);
        for (std::size_t j = 0; j <= n; ++j) {
            EXPECT_EQ(x[j], -x[n - j]);
            EXPECT_NEAR(x[j], std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n)), 1e-15);
        }
        const auto x2 = chebyshev_points(2 * n);
        for (std::size_t j = 0; j <= n; ++j) EXPECT_EQ(x2[2 * j], x[j]);
    }
}

TEST(ChebyshevT, ValuesAndDomain) {
    EXPECT_EQ(cheb_T(0, 0.77), 1.0);
    EXPECT_EQ(cheb_T(1, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(cheb_T(2, 0.5), -0.5);
    for (std::size_t k = 0; k < 40; ++k)
        for (double x : probes(-1.0, 1.0, 41)) EXPECT_NEAR(cheb_T(k, x), t_trig(k, x), 1e-12);
    try {
        cheb_T(3, 1.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

// ---------------------------------------------------------------------------

TEST(BuildInterpolant, ReproducesBasisPolynomials) {
    const Interval dom(-1.0, 1.0);
    const auto p = build_interpolant([](double x) { return x; }, dom, 3);
    ASSERT_EQ(p.degree(), 3u);
    const double expect1[] = {0.0, 1.0, 0.0, 0.0};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(p.coeffs()[k], expect1[k], 1e-15);

    const auto q = build_interpolant([](double x) { return 2 * x * x - 1; }, dom, 2);
    const double expect2[] = {0.0, 0.0, 1.0};
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(q.coeffs()[k], expect2[k], 1e-15);
}

TEST(BuildInterpolant, CallsOracleExactlyNPlusOneTimes) {
    for (std::size_t n : {0, 1, 7, 20, 100}) {
        std::size_t calls = 0;
        build_interpolant(
            [&calls](double x) {
                ++calls;
                return std::sin(x);
            },
            Interval(0.0, 3.0), n);
        EXPECT_EQ(calls, n + 1);
    }
}

TEST(BuildInterpolant, ExpConvergesToMachinePrecision) {
    const auto p = build_interpolant([](double x) { return std::exp(x); }, Interval(-1.0, 1.0), 20);
    EXPECT_LE(sup_error(p, [](double x) { return std::exp(x); }), 1e-12);
    EXPECT_NEAR(p(0.5), std::exp(0.5), 1e-12);
}

TEST(BuildInterpolant, InterpolatesAnchorValues) {
    auto f = [](double x) { return std::log(2.0 + x) * std::cos(3.0 * x); };
    const Interval dom(-1.5, 4.0);
    for (std::size_t n : {1, 5, 16, 33}) {
        const auto grid = sample_anchor_grid(f, dom, n);
        const auto p = interpolant_from_values(dom, grid.values);
        for (std::size_t j = 0; j <= n; ++j)
            EXPECT_LE(std::abs(p(grid.points[j]) - grid.values[j]), 1e-12 * std::max(1.0, std::abs(grid.values[j])));
    }
}

TEST(BuildInterpolant, AnchorGridIsMappedChebyshevPoints) {
    const auto grid = sample_anchor_grid([](double x) { return x; }, Interval(0.0, 2.0), 2);
    EXPECT_EQ(grid.points, (std::vector<double>{2.0, 1.0, 0.0}));
}

TEST(BuildInterpolant, NonFiniteOracleNamesThePoint) {
    try {
        build_interpolant([](double x) { return x < 0.0 ? NAN : x; }, Interval(-1.0, 1.0), 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_finite);
        EXPECT_NE(std::string(e.what()).find("anchor"), std::string::npos);
    }
}

TEST(BuildInterpolant, PolynomialExactness) {
    // 1 - 2x + 0.5x^3 - x^5 has degree 5.
    auto f = [](double x) { return 1 - 2 * x + 0.5 * x * x * x - std::pow(x, 5); };
    for (std::size_t n : {5, 6, 12}) {
        const auto p = build_interpolant(f, Interval(-2.0, 3.0), n);
        double worst = 0.0;
        for (double x : probes(-2.0, 3.0, 1001)) worst = std::max(worst, std::abs(p(x) - f(x)) / std::max(1.0, std::abs(f(x))));
        EXPECT_LE(worst, 1e-12) << "n=" << n;
    }
}

TEST(BuildInterpolant, LinearInCoefficients) {
    auto f = [](double x) { return std::exp(x); };
    auto g = [](double x) { return std::sin(5 * x); };
    const double a = 2.5;
    const double b = -0.75;
    const Interval dom(-1.0, 2.0);
    const auto pf = build_interpolant(f, dom, 24);
    const auto pg = build_interpolant(g, dom, 24);
    const auto ph = build_interpolant([&](double x) { return a * f(x) + b * g(x); }, dom, 24);
    for (std::size_t k = 0; k <= 24; ++k)
        EXPECT_NEAR(ph.coeffs()[k], a * pf.coeffs()[k] + b * pg.coeffs()[k], 1e-13);
}

TEST(BuildInterpolant, DctMatchesDirectCosineSum) {
    const std::size_t n = 13;
    std::vector<double> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = CounterRng::uniform(3, 0, j) - 0.5;
    const auto c = DctPlan(n).apply(v);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            s += w * v[j] * std::cos(std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n));
        }
        s *= (k == 0 || k == n) ? 1.0 / n : 2.0 / n;
        EXPECT_NEAR(c[k], s, 1e-15);
    }
}

// ---------------------------------------------------------------------------

TEST(Evaluate, ClenshawMatchesNaiveSum) {
    for (std::size_t trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + trial % 40;
        std::vector<double> c(n + 1);
        for (std::size_t k = 0; k <= n; ++k) c[k] = 2.0 * CounterRng::uniform(17, trial, k) - 1.0;
        const double t = 2.0 * CounterRng::uniform(18, trial, 0) - 1.0;
        const double naive = naive_sum(c, t);
        double scale = 0.0;
        for (double ck : c) scale += std::abs(ck);
        EXPECT_LE(std::abs(clenshaw(c, t) - naive), 1e-13 * scale);
    }
}

TEST(Evaluate, StrictAndClampPolicies) {
    const auto p = build_interpolant([](double x) { return x; }, Interval(-1.0, 1.0), 1);
    EXPECT_DOUBLE_EQ(evaluate(p, 0.37), 0.37);
    EXPECT_THROW(p(1.0 + 1e-12), Error);
    EXPECT_DOUBLE_EQ(p.with_policy(EvalPolicy::clamp)(3.0), 1.0);
}

TEST(Evaluate, AliasingFoldsHighDegreesOntoLowOnes) {
    for (std::size_t n : {2, 5, 16}) {
        const auto p2 = build_interpolant([n](double x) { return t_trig(2 * n, x); }, Interval(-1, 1), n);
        const auto p3 = build_interpolant([n](double x) { return t_trig(3 * n, x); }, Interval(-1, 1), n);
        for (double x : probes(-1.0, 1.0, 1001)) {
            EXPECT_NEAR(p2(x), 1.0, 1e-12);
            EXPECT_NEAR(p3(x), t_trig(n, x), 1e-12);
        }
    }
    const auto p = build_interpolant([](double x) { return t_trig(4, x); }, Interval(-1, 1), 2);
    EXPECT_NEAR(p(0.123), 1.0, 1e-14);
}

// ---------------------------------------------------------------------------

TEST(Differentiate, ExactForLowDegree) {
    const auto d1 = differentiate(build_interpolant([](double x) { return x; }, Interval(-1, 1), 1));
    ASSERT_EQ(d1.degree(), 0u);
    EXPECT_NEAR(d1.coeffs()[0], 1.0, 1e-15);

    const auto d2 = differentiate(build_interpolant([](double x) { return 2 * x * x - 1; }, Interval(-1, 1), 2));
    ASSERT_EQ(d2.degree(), 1u);
    EXPECT_NEAR(d2.coeffs()[0], 0.0, 1e-15);
    EXPECT_NEAR(d2.coeffs()[1], 4.0, 1e-14);

    const auto d0 = differentiate(build_interpolant([](double) { return 3.0; }, Interval(-1, 1), 0));
    EXPECT_EQ(d0.degree(), 0u);
    EXPECT_EQ(d0.coeffs()[0], 0.0);
}

TEST(Differentiate, SinDerivativeIsCos) {
    const auto d = differentiate(build_interpolant([](double x) { return std::sin(x); }, Interval(-1, 1), 20));
    EXPECT_LE(sup_error(d, [](double x) { return std::cos(x); }), 1e-10);
}

TEST(Differentiate, IncludesChainRuleFactor) {
    // d/dx exp(x/3) on [0, 6].
    const auto d = differentiate(build_interpolant([](double x) { return std::exp(x / 3); }, Interval(0, 6), 30));
    EXPECT_LE(sup_error(d, [](double x) { return std::exp(x / 3) / 3; }), 1e-11);
}

TEST(Differentiate, MatchesCenteredDifferences) {
    auto f = [](double x) { return std::atan(3 * x) + x * x; };
    const auto p = build_interpolant(f, Interval(-2, 1), 40);
    const auto d = differentiate(p);
    const double h = 1e-6;
    for (double x : probes(-1.9, 0.9, 201)) EXPECT_NEAR(d(x), (p(x + h) - p(x - h)) / (2 * h), 1e-5);
}

// ---------------------------------------------------------------------------

TEST(ExAnteError, VanishingTailForExactPolynomial) {
    const auto p = build_interpolant([](double x) { return 2 * x * x - 1; }, Interval(-1, 1), 10);
    const auto r = ex_ante_error(p, 3);
    EXPECT_LE(r.ex_ante_estimate, 1e-15);
    EXPECT_EQ(r.trailing_tail.size(), 3u);
    EXPECT_FALSE(r.converged);  // fixed-degree build records no tolerance
    EXPECT_EQ(r.degree_used, 10u);
}

TEST(ExAnteError, ExpEstimateOrdersTrueError) {
    const auto p = build_interpolant([](double x) { return std::exp(x); }, Interval(-1, 1), 20);
    const auto r = ex_ante_error(p, 2);
    EXPECT_LE(r.ex_ante_estimate, 1e-12);
    // At this degree both numbers sit at rounding level; the ordering is
    // checked against a floor of a few ulps of max|f| = e.
    const double floor = 8 * std::numeric_limits<double>::epsilon() * std::numbers::e;
    EXPECT_LE(sup_error(p, [](double x) { return std::exp(x); }), 10 * std::max(r.ex_ante_estimate, floor));
}

TEST(ExAnteError, RungeTailAtDegreeThirty) {
    const auto p = build_interpolant(runge, Interval(-1, 1), 30);
    const auto r = ex_ante_error(p, 2);
    EXPECT_GT(r.ex_ante_estimate, 1e-4);
    EXPECT_LT(r.ex_ante_estimate, 1e-1);
    EXPECT_GE(r.ex_ante_estimate, *std::max_element(r.trailing_tail.begin(), r.trailing_tail.end()));
}

TEST(ExAnteError, RejectsBadTailLength) {
    const auto p = build_interpolant(runge, Interval(-1, 1), 4);
    EXPECT_THROW(ex_ante_error(p, 0), Error);
    EXPECT_THROW(ex_ante_error(p, 6), Error);
    EXPECT_NO_THROW(ex_ante_error(p, 5));
}

// ---------------------------------------------------------------------------

TEST(BuildAdaptive, CubicConvergesOnSecondDoubling) {
    // With a two-coefficient tail, degree 4 still sees c_3 = 1 in its tail;
    // degree 8 is the first whose tail is zero.
    std::size_t calls = 0;
    const auto p = build_adaptive(
        [&calls](double x) {
            ++calls;
            return 4 * x * x * x - 3 * x;
        },
        Interval(-1, 1), 1e-10, 64);
    EXPECT_EQ(p.degree(), 8u);
    EXPECT_TRUE(ex_ante_error(p).converged);
    EXPECT_EQ(calls, 9u);
}

TEST(BuildAdaptive, ExpConvergesByDegree32) {
    const auto p = build_adaptive([](double x) { return std::exp(x); }, Interval(-1, 1), 1e-13, 256);
    EXPECT_LE(p.degree(), 32u);
    EXPECT_TRUE(ex_ante_error(p).converged);
    EXPECT_EQ(p.build_info().tolerance, 1e-13);
}

TEST(BuildAdaptive, ReusesNestedValues) {
    std::size_t calls = 0;
    const auto p = build_adaptive(
        [&calls](double x) {
            ++calls;
            return runge(x);
        },
        Interval(-1, 1), 1e-6, 512);
    EXPECT_TRUE(ex_ante_error(p).converged);
    EXPECT_LE(p.degree(), 128u);
    EXPECT_EQ(calls, p.degree() + 1);
    EXPECT_EQ(p.build_info().oracle_calls, calls);
}

TEST(BuildAdaptive, AbsStallsUnconverged) {
    std::size_t calls = 0;
    const auto p = build_adaptive(
        [&calls](double x) {
            ++calls;
            return std::abs(x);
        },
        Interval(-1, 1), 1e-10, 256);
    EXPECT_FALSE(ex_ante_error(p).converged);
    EXPECT_EQ(p.degree(), 256u);
    EXPECT_LE(calls, 257u);
    EXPECT_GT(ex_ante_error(p).ex_ante_estimate, 1e-10);
}

TEST(BuildAdaptive, RejectsBadArguments) {
    auto f = [](double x) { return x; };
    EXPECT_THROW(build_adaptive(f, Interval(-1, 1), 0.0, 64), Error);
    EXPECT_THROW(build_adaptive(f, Interval(-1, 1), 1e-6, 3), Error);
}

// ---------------------------------------------------------------------------

TEST(Equidistant, ReproducesLinear) {
    const auto p = equidistant_interpolant([](double x) { return x; }, Interval(-1, 1), 5);
    for (double x : probes(-1, 1, 1001)) EXPECT_NEAR(p(x), x, 1e-12);
}

TEST(Equidistant, RungeDiverges) {
    auto sup = [](std::size_t n) {
        const auto p = equidistant_interpolant(runge, Interval(-1, 1), n);
        double worst = 0.0;
        for (double x : probes(-1, 1, 10000)) worst = std::max(worst, std::abs(p(x) - runge(x)));
        return worst;
    };
    EXPECT_GT(sup(20), sup(10));
    EXPECT_GT(sup(40), 10.0);
}

}  // namespace
}  // namespace chebproxy
