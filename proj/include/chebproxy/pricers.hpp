#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace chebproxy {

/// Reference pricing functions. These play the "original pricer" role that
/// proxies replace: analytic (Black-Scholes, swap), piecewise analytic
/// (barrier) and noisy (Monte Carlo).
namespace pricers {

enum class OptionKind { call, put };

struct VanillaSpec {
    double spot = 1.0;
    double strike = 1.0;
    double vol = 0.2;
    double rate = 0.0;
    double expiry = 1.0;
    OptionKind kind = OptionKind::call;

    void validate() const;
};

/// Up-and-out only.
struct BarrierSpec {
    VanillaSpec vanilla;
    double barrier = 1.5;

    void validate() const;
};

struct SwapSpec {
    double notional = 1.0;
    double fixed_rate = 0.0;
    std::vector<double> payment_times;
    double flat_zero_rate = 0.0;

    void validate() const;
};

/// Phi(x) = erfc(-x/sqrt(2))/2 via the C library erfc (glibc: < 1 ulp in
/// double), giving absolute error well under 1e-15.
double norm_cdf(double x) noexcept;
double norm_pdf(double x) noexcept;

double bs_price(const VanillaSpec& spec);
double bs_delta(const VanillaSpec& spec);
double bs_vega(const VanillaSpec& spec);

/// Continuously monitored up-and-out option, Reiner-Rubinstein closed form
/// with no rebate. Zero once spot >= barrier.
double barrier_price(const BarrierSpec& spec);

/// Payer swap (receive float, pay fixed) on a flat continuously compounded
/// zero curve; accrual periods run between consecutive payment times, the
/// first one starting at 0.
double swap_pv(const SwapSpec& spec);
double swap_par_rate(const SwapSpec& spec);

double runge(double x) noexcept;
double expx(double x) noexcept;

struct McEstimate {
    double price = 0.0;
    double std_error = 0.0;
};

/// Terminal-payoff GBM estimator with `paths` draws. Paths 2i and 2i+1 share
/// Box-Muller pair i (stream 0, counters 2i and 2i+1 under `seed`), so a fixed
/// seed gives common random numbers across calls with different specs.
McEstimate slow_mc_price(const VanillaSpec& spec, std::size_t paths, std::uint64_t seed);

}  // namespace pricers
}  // namespace chebproxy
