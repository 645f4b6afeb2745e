#include "chebproxy/error.hpp"
#include "chebproxy/pricers.hpp"
#include "chebproxy/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace chebproxy::pricers {
namespace {

// Independent oracle: Black-Scholes on Boost's normal CDF.
double boost_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<double>(), x); }

double boost_bs_call(double s, double k, double vol, double r, double t) {
    const double d1 = (std::log(s / k) + (r + 0.5 * vol * vol) * t) / (vol * std::sqrt(t));
    const double d2 = d1 - vol * std::sqrt(t);
    return s * boost_cdf(d1) - k * std::exp(-r * t) * boost_cdf(d2);
}

VanillaSpec call(double s, double k, double vol, double r, double t) { return {s, k, vol, r, t, OptionKind::call}; }
VanillaSpec put(double s, double k, double vol, double r, double t) { return {s, k, vol, r, t, OptionKind::put}; }

TEST(NormalCdf, MatchesBoostToRounding) {
    for (double x = -8.0; x <= 8.0; x += 0.01) EXPECT_NEAR(norm_cdf(x), boost_cdf(x), 1e-15) << x;
}

TEST(BlackScholes, MatchesIndependentOracle) {
    for (double s : {0.5, 0.9, 1.0, 1.3})
        for (double vol : {0.1, 0.2, 0.45})
            for (double r : {-0.01, 0.0, 0.05})
                EXPECT_NEAR(bs_price(call(s, 1.0, vol, r, 1.5)), boost_bs_call(s, 1.0, vol, r, 1.5), 1e-14);
}

TEST(BlackScholes, AtTheMoneyReference) {
    // 2 N(0.1) - 1 at spot = strike = 1, vol 0.2, one year.
    EXPECT_NEAR(bs_price(call(1, 1, 0.2, 0, 1)), 2.0 * boost_cdf(0.1) - 1.0, 1e-15);
    EXPECT_NEAR(bs_price(call(1, 1, 0.2, 0, 1)), 0.07965567455405798, 1e-15);
}

TEST(BlackScholes, ZeroVolLimits) {
    EXPECT_NEAR(bs_price(call(1, 1, 1e-8, 0, 1)), 0.0, 1e-8);
    EXPECT_NEAR(bs_price(call(2, 1, 1e-8, 0, 1)), 1.0, 1e-12);
}

TEST(BlackScholes, PutCallParity) {
    for (double s : {0.6, 1.0, 1.7})
        for (double r : {0.0, 0.03}) {
            const double lhs = bs_price(call(s, 1.1, 0.25, r, 2.0)) - bs_price(put(s, 1.1, 0.25, r, 2.0));
            EXPECT_NEAR(lhs, s - 1.1 * std::exp(-r * 2.0), 1e-12);
        }
}

TEST(BlackScholes, BoundsAndMonotonicity) {
    double prev = 0.0;
    for (double vol = 0.05; vol < 1.0; vol += 0.05) {
        const double v = bs_price(call(1.2, 1.0, vol, 0.02, 1.0));
        EXPECT_GE(v, std::max(0.0, 1.2 - std::exp(-0.02)));
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(BlackScholes, RejectsInvalidSpecs) {
    EXPECT_THROW(bs_price(call(0, 1, 0.2, 0, 1)), Error);
    EXPECT_THROW(bs_price(call(1, -1, 0.2, 0, 1)), Error);
    EXPECT_THROW(bs_price(call(1, 1, 0, 0, 1)), Error);
    EXPECT_THROW(bs_price(call(1, 1, 0.2, 0, 0)), Error);
    EXPECT_THROW(bs_price(call(1, 1, 0.2, NAN, 1)), Error);
}

TEST(Greeks, MatchFiniteDifferences) {
    const double h = 1e-6;
    for (double s : {0.7, 1.0, 1.4})
        for (double vol : {0.15, 0.3}) {
            const auto spec = call(s, 1.0, vol, 0.01, 1.0);
            const double fd_delta =
                (bs_price(call(s + h, 1.0, vol, 0.01, 1.0)) - bs_price(call(s - h, 1.0, vol, 0.01, 1.0))) / (2 * h);
            const double fd_vega =
                (bs_price(call(s, 1.0, vol + h, 0.01, 1.0)) - bs_price(call(s, 1.0, vol - h, 0.01, 1.0))) / (2 * h);
            EXPECT_NEAR(bs_delta(spec), fd_delta, 1e-6);
            EXPECT_NEAR(bs_vega(spec), fd_vega, 1e-6);
            EXPECT_GE(bs_delta(spec), 0.0);
            EXPECT_LE(bs_delta(spec), 1.0);
            EXPECT_GE(bs_vega(spec), 0.0);
        }
}

TEST(Greeks, SymmetryAndDeepOutOfTheMoney) {
    EXPECT_NEAR(bs_delta(call(1, 1, 0.2, 0, 1)), 0.5, 0.05);
    EXPECT_NEAR(bs_vega(call(0.2, 1, 0.2, 0, 1)), 0.0, 1e-10);
    EXPECT_NEAR(bs_delta(put(1, 1, 0.2, 0, 1)), bs_delta(call(1, 1, 0.2, 0, 1)) - 1.0, 1e-15);
}

// ---------------------------------------------------------------------------

/// Up-and-out by simulation with a Brownian-bridge crossing probability per
/// step: each step survives with 1 - exp(-2 ln(H/S0) ln(H/S1) / (vol^2 dt)).
struct McResult {
    double mean;
    double se;
};

McResult bridge_mc_up_and_out(const BarrierSpec& b, std::size_t paths, std::size_t steps, std::uint64_t seed) {
    const auto& v = b.vanilla;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    const double dt = v.expiry / static_cast<double>(steps);
    const double drift = (v.rate - 0.5 * v.vol * v.vol) * dt;
    const double sd = v.vol * std::sqrt(dt);
    const double lh = std::log(b.barrier);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        double x = std::log(v.spot);
        double survive = 1.0;
        for (std::size_t s = 0; s < steps && survive > 0.0; ++s) {
            const double next = x + drift + sd * z(gen);
            if (next >= lh) {
                survive = 0.0;
                break;
            }
            survive *= 1.0 - std::exp(-2.0 * (lh - x) * (lh - next) / (v.vol * v.vol * dt));
            x = next;
        }
        const double st = std::exp(x);
        const double payoff =
            survive * std::max(0.0, v.kind == OptionKind::call ? st - v.strike : v.strike - st);
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    const double n = static_cast<double>(paths);
    const double mean = sum / n;
    const double df = std::exp(-v.rate * v.expiry);
    return {df * mean, df * std::sqrt((sum_sq / n - mean * mean) / (n - 1.0))};
}

TEST(Barrier, KnockedOutAtOrAboveBarrier) {
    EXPECT_EQ(barrier_price({call(1.5, 1, 0.2, 0, 1), 1.5}), 0.0);
    EXPECT_EQ(barrier_price({call(2.0, 1, 0.2, 0, 1), 1.5}), 0.0);
}

TEST(Barrier, FarBarrierRecoversVanilla) {
    for (auto spec : {call(1, 1, 0.2, 0.01, 1), put(1, 1.1, 0.25, 0.0, 2)})
        EXPECT_NEAR(barrier_price({spec, 1e4}), bs_price(spec), 1e-8);
}

TEST(Barrier, DominatedByVanilla) {
    for (double s = 0.5; s < 1.5; s += 0.05)
        for (double h : {1.2, 1.5, 2.0}) {
            EXPECT_LE(barrier_price({call(s, 1.0, 0.2, 0.01, 1.0), h}), bs_price(call(s, 1.0, 0.2, 0.01, 1.0)) + 1e-15);
            EXPECT_LE(barrier_price({put(s, 1.0, 0.2, 0.01, 1.0), h}), bs_price(put(s, 1.0, 0.2, 0.01, 1.0)) + 1e-15);
        }
}

TEST(Barrier, MatchesBridgeMonteCarlo) {
    for (const BarrierSpec b : {BarrierSpec{call(1.0, 1.0, 0.2, 0.02, 1.0), 1.4}, BarrierSpec{put(1.0, 1.1, 0.3, 0.0, 1.0), 1.25},
                                BarrierSpec{put(1.0, 0.9, 0.2, 0.01, 0.5), 1.2}}) {
        const auto mc = bridge_mc_up_and_out(b, 1000000, 50, 77);
        EXPECT_NEAR(barrier_price(b), mc.mean, 3.0 * mc.se) << "strike " << b.vanilla.strike;
    }
}

// ---------------------------------------------------------------------------

TEST(Swap, ParRateGivesZeroValue) {
    SwapSpec s;
    s.payment_times = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    s.flat_zero_rate = 0.035;
    s.fixed_rate = swap_par_rate(s);
    EXPECT_NEAR(swap_pv(s), 0.0, 1e-15);
}

TEST(Swap, LinearInNotional) {
    SwapSpec s;
    s.payment_times = {1.0, 2.0, 3.0};
    s.flat_zero_rate = 0.02;
    s.fixed_rate = 0.03;
    const double one = swap_pv(s);
    s.notional = 2.0;
    EXPECT_DOUBLE_EQ(swap_pv(s), 2.0 * one);
}

TEST(Swap, MatchesDiscountBondReplication) {
    // Floating leg = 1 - P(T_last); fixed leg = K * sum tau_i P(T_i).
    SwapSpec s;
    s.payment_times = {0.25, 0.75, 1.0, 2.0};
    s.flat_zero_rate = 0.04;
    s.fixed_rate = 0.025;
    s.notional = 3.0;
    double fixed = 0.0;
    double prev = 0.0;
    for (double t : s.payment_times) {
        fixed += (t - prev) * std::exp(-0.04 * t);
        prev = t;
    }
    const double expected = 3.0 * ((1.0 - std::exp(-0.04 * 2.0)) - 0.025 * fixed);
    EXPECT_NEAR(swap_pv(s), expected, 1e-15);
}

TEST(Swap, RejectsBadSchedules) {
    SwapSpec s;
    EXPECT_THROW(swap_pv(s), Error);
    s.payment_times = {1.0, 0.5};
    EXPECT_THROW(swap_pv(s), Error);
    s.payment_times = {0.0, 1.0};
    EXPECT_THROW(swap_pv(s), Error);
}

TEST(TestFunctions, ClosedForms) {
    EXPECT_EQ(runge(0.0), 1.0);
    EXPECT_DOUBLE_EQ(runge(1.0), 1.0 / 26.0);
    EXPECT_DOUBLE_EQ(runge(-1.0), 1.0 / 26.0);
    EXPECT_EQ(expx(0.0), 1.0);
}

// ---------------------------------------------------------------------------

TEST(MonteCarlo, DeterministicForFixedSeed) {
    const auto a = slow_mc_price(call(1, 1, 0.2, 0, 1), 5000, 42);
    const auto b = slow_mc_price(call(1, 1, 0.2, 0, 1), 5000, 42);
    EXPECT_EQ(a.price, b.price);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(slow_mc_price(call(1, 1, 0.2, 0, 1), 5000, 43).price, a.price);
}

TEST(MonteCarlo, ZeroVolIsDiscountedIntrinsic) {
    const auto est = slow_mc_price(call(1.3, 1.0, 1e-8, 0.02, 1.0), 1000, 1);
    EXPECT_NEAR(est.price, 1.3 - std::exp(-0.02), 1e-6);
}

TEST(MonteCarlo, WithinFourStandardErrors) {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto spec = call(1, 1, 0.2, 0, 1);
        const auto est = slow_mc_price(spec, 100000, seed);
        EXPECT_NEAR(est.price, bs_price(spec), 4 * est.std_error);
    }
    const auto spec = put(1.1, 1.0, 0.3, 0.02, 2.0);
    const auto big = slow_mc_price(spec, 1000000, 9);
    EXPECT_NEAR(big.price, bs_price(spec), 4 * big.std_error);
}

TEST(MonteCarlo, StandardErrorShrinksWithPaths) {
    const auto spec = call(1, 1, 0.2, 0, 1);
    const auto a = slow_mc_price(spec, 200000, 5);
    const auto b = slow_mc_price(spec, 400000, 5);
    EXPECT_NEAR(b.std_error / a.std_error, 1.0 / std::sqrt(2.0), 0.1 / std::sqrt(2.0));
}

TEST(MonteCarlo, RejectsTooFewPaths) { EXPECT_THROW(slow_mc_price(call(1, 1, 0.2, 0, 1), 999, 1), Error); }

TEST(CounterRng, UniformsAndNormalsLookRight) {
    double sum = 0.0;
    double sum_sq = 0.0;
    const std::size_t n = 200000;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = CounterRng::uniform(1, 0, i);
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double z = CounterRng::normal(1, 1, i);
        sum += z;
        sum_sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(sum_sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace chebproxy::pricers
