#include "chebproxy/pricers.hpp"

#include "chebproxy/error.hpp"
#include "chebproxy/rng.hpp"
#include "chebproxy/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chebproxy::pricers {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        fail(ErrorKind::invalid_argument, std::string(name) + " must be positive and finite, got " + to_shortest(v));
}

double sign(OptionKind kind) { return kind == OptionKind::call ? 1.0 : -1.0; }

struct D12 {
    double d1;
    double d2;
};

D12 d12(const VanillaSpec& s) {
    const double sst = s.vol * std::sqrt(s.expiry);
    const double d1 = (std::log(s.spot / s.strike) + (s.rate + 0.5 * s.vol * s.vol) * s.expiry) / sst;
    return {d1, d1 - sst};
}

}  // namespace

void VanillaSpec::validate() const {
    require_positive(spot, "spot");
    require_positive(strike, "strike");
    require_positive(vol, "vol");
    require_positive(expiry, "expiry");
    if (!std::isfinite(rate)) fail(ErrorKind::invalid_argument, "rate must be finite");
}

void BarrierSpec::validate() const {
    vanilla.validate();
    require_positive(barrier, "barrier");
}

void SwapSpec::validate() const {
    if (!std::isfinite(notional) || !std::isfinite(fixed_rate) || !std::isfinite(flat_zero_rate))
        fail(ErrorKind::invalid_argument, "swap fields must be finite");
    if (payment_times.empty()) fail(ErrorKind::invalid_argument, "swap needs at least one payment time");
    double prev = 0.0;
    for (double t : payment_times) {
        if (!(t > prev) || !std::isfinite(t))
            fail(ErrorKind::invalid_argument, "swap payment times must be positive and strictly increasing");
        prev = t;
    }
}

double norm_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double bs_price(const VanillaSpec& s) {
    s.validate();
    const auto [d1, d2] = d12(s);
    const double phi = sign(s.kind);
    const double df = std::exp(-s.rate * s.expiry);
    return std::max(0.0, phi * (s.spot * norm_cdf(phi * d1) - s.strike * df * norm_cdf(phi * d2)));
}

double bs_delta(const VanillaSpec& s) {
    s.validate();
    const double n1 = norm_cdf(d12(s).d1);
    return s.kind == OptionKind::call ? n1 : n1 - 1.0;
}

double bs_vega(const VanillaSpec& s) {
    s.validate();
    return s.spot * norm_pdf(d12(s).d1) * std::sqrt(s.expiry);
}

double barrier_price(const BarrierSpec& spec) {
    spec.validate();
    const auto& v = spec.vanilla;
    const double S = v.spot;
    const double K = v.strike;
    const double H = spec.barrier;
    if (S >= H) return 0.0;

    const double sst = v.vol * std::sqrt(v.expiry);
    const double mu = (v.rate - 0.5 * v.vol * v.vol) / (v.vol * v.vol);
    const double df = std::exp(-v.rate * v.expiry);
    const double phi = sign(v.kind);
    const double eta = -1.0;  // barrier above spot

    const double x1 = std::log(S / K) / sst + (1.0 + mu) * sst;
    const double x2 = std::log(S / H) / sst + (1.0 + mu) * sst;
    const double y1 = std::log(H * H / (S * K)) / sst + (1.0 + mu) * sst;
    const double y2 = std::log(H / S) / sst + (1.0 + mu) * sst;
    const double hs_a = std::pow(H / S, 2.0 * (mu + 1.0));
    const double hs_b = std::pow(H / S, 2.0 * mu);

    const double A = phi * S * norm_cdf(phi * x1) - phi * K * df * norm_cdf(phi * x1 - phi * sst);
    const double B = phi * S * norm_cdf(phi * x2) - phi * K * df * norm_cdf(phi * x2 - phi * sst);
    const double C = phi * S * hs_a * norm_cdf(eta * y1) - phi * K * df * hs_b * norm_cdf(eta * y1 - eta * sst);
    const double D = phi * S * hs_a * norm_cdf(eta * y2) - phi * K * df * hs_b * norm_cdf(eta * y2 - eta * sst);

    double value = 0.0;
    if (v.kind == OptionKind::call)
        value = K >= H ? 0.0 : A - B + C - D;
    else
        value = K >= H ? B - D : A - C;
    return std::max(0.0, value);
}

double swap_pv(const SwapSpec& spec) {
    spec.validate();
    const double r = spec.flat_zero_rate;
    double pv = 0.0;
    double prev = 0.0;
    for (double t : spec.payment_times) {
        const double tau = t - prev;
        const double forward = std::expm1(r * tau) / tau;
        pv += (forward - spec.fixed_rate) * tau * std::exp(-r * t);
        prev = t;
    }
    return spec.notional * pv;
}

double swap_par_rate(const SwapSpec& spec) {
    spec.validate();
    const double r = spec.flat_zero_rate;
    double annuity = 0.0;
    double prev = 0.0;
    for (double t : spec.payment_times) {
        annuity += (t - prev) * std::exp(-r * t);
        prev = t;
    }
    return -std::expm1(-r * spec.payment_times.back()) / annuity;
}

double runge(double x) noexcept { return 1.0 / (1.0 + 25.0 * x * x); }

double expx(double x) noexcept { return std::exp(x); }

McEstimate slow_mc_price(const VanillaSpec& spec, std::size_t paths, std::uint64_t seed) {
    spec.validate();
    if (paths < 1000) fail(ErrorKind::invalid_argument, "Monte Carlo pricer needs at least 1000 paths");

    const double sst = spec.vol * std::sqrt(spec.expiry);
    const double drift = (spec.rate - 0.5 * spec.vol * spec.vol) * spec.expiry;
    const double forward_base = spec.spot * std::exp(drift);
    const double df = std::exp(-spec.rate * spec.expiry);
    const double phi = sign(spec.kind);

    // Paths 2i and 2i+1 take the two outputs of Box-Muller pair i.
    double sum = 0.0;
    double sum_sq = 0.0;
    auto accumulate = [&](double z) {
        const double st = forward_base * std::exp(sst * z);
        const double payoff = std::max(0.0, phi * (st - spec.strike));
        sum += payoff;
        sum_sq += payoff * payoff;
    };
    for (std::size_t p = 0; 2 * p < paths; ++p) {
        double z0 = 0.0;
        double z1 = 0.0;
        CounterRng::normal_pair(seed, 0, p, z0, z1);
        accumulate(z0);
        if (2 * p + 1 < paths) accumulate(z1);
    }
    const double n = static_cast<double>(paths);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
    return {df * mean, df * std::sqrt(var / n)};
}

}  // namespace chebproxy::pricers
