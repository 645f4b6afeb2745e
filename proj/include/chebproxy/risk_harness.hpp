#pragma once

#include "chebproxy/cheb_core.hpp"
#include "chebproxy/parallel.hpp"
#include "chebproxy/tensor.hpp"

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chebproxy::risk {

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// lognormal: dX = mu X dt + sigma X dW (stays positive).
/// normal:    dX = mu dt + sigma dW.
enum class FactorModel { lognormal, normal };

struct FactorSpec {
    std::string name;
    FactorModel model = FactorModel::lognormal;
    double initial = 1.0;
    double drift = 0.0;
    double vol = 0.0;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::vector<double> times;  ///< nondecreasing, >= 0
    std::size_t paths = 0;
    std::vector<FactorSpec> factors;

    void validate() const;
};

/// Factors are independent. Path p draws from CounterRng stream p, so the
/// array does not depend on thread count.
class ScenarioSet {
public:
    ScenarioSet(ScenarioConfig config, std::vector<double> values);

    const ScenarioConfig& config() const noexcept { return config_; }
    std::size_t paths() const noexcept { return config_.paths; }
    std::size_t steps() const noexcept { return config_.times.size(); }
    std::size_t factors() const noexcept { return config_.factors.size(); }
    double time(std::size_t step) const { return config_.times[step]; }

    double value(std::size_t path, std::size_t step, std::size_t factor) const {
        return values_[(path * steps() + step) * factors() + factor];
    }
    /// All factors of one path at one step.
    std::span<const double> state(std::size_t path, std::size_t step) const {
        return std::span<const double>(values_).subspan((path * steps() + step) * factors(), factors());
    }
    std::span<const double> raw() const noexcept { return values_; }

private:
    ScenarioConfig config_;
    std::vector<double> values_;  // [path][step][factor]
};

ScenarioSet generate_scenarios(const ScenarioConfig& config, Execution exec = Execution::sequential);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Closed-form mean and variance of a factor at time t.
Moments factor_moments(const FactorSpec& factor, double t);

/// Two-sided quantile band of a factor at time t at standard-normal level z.
Interval factor_envelope(const FactorSpec& factor, double t, double z);

/// z for a two-sided 99.99% band.
inline constexpr double envelope_z_9999 = 3.890591886413094;

// ---------------------------------------------------------------------------
// Portfolio
// ---------------------------------------------------------------------------

/// Value of one trade at time t given the scenario values of its factors
/// (in the order listed in `factors`).
using TradePricer = std::function<double(double t, std::span<const double> x)>;

struct Trade {
    std::string name;
    std::vector<std::size_t> factors;
    std::vector<std::size_t> degrees;
    TradePricer price;
    /// Up-and-out on the first listed factor, monitored at scenario dates:
    /// the trade is worth zero from the first date the factor is at or above
    /// this level.
    std::optional<double> knock_out_above;
};

/// Every call into a trade pricer goes through `price`, which counts it.
class Portfolio {
public:
    explicit Portfolio(std::vector<Trade> trades);

    std::span<const Trade> trades() const noexcept { return trades_; }
    double price(std::size_t trade, double t, std::span<const double> x) const;

    std::size_t oracle_calls() const noexcept { return calls_->load(); }
    void reset_oracle_calls() const noexcept { calls_->store(0); }

    /// Throws unless every trade's factor indices exist in `scenarios`.
    void check_against(const ScenarioSet& scenarios) const;

private:
    std::vector<Trade> trades_;
    std::unique_ptr<std::atomic<std::size_t>> calls_;
};

/// Per time step, per trade proxy. A trade has no proxy at a step when all of
/// its box lies in the knocked-out region.
struct PortfolioProxies {
    std::vector<std::vector<std::optional<TensorProxy>>> by_step;
    std::size_t oracle_calls = 0;

    /// Sum over trades of the tensor ex-ante estimates at one step.
    double ex_ante(std::size_t step) const;
};

/// Boxes cover the union of the closed-form envelope at level z and the
/// observed scenario range, so every scenario is inside its box.
PortfolioProxies build_portfolio_proxies(const Portfolio& portfolio, const ScenarioSet& scenarios,
                                         double z = envelope_z_9999, Execution exec = Execution::sequential);

enum class PricingMode { full_reval, proxy };

std::string to_string(PricingMode mode);

/// Portfolio value per [step][path]. Proxy mode needs `proxies` and makes
/// no oracle calls; a scenario outside a proxy box raises a domain error.
std::vector<double> portfolio_values(const Portfolio& portfolio, const ScenarioSet& scenarios, PricingMode mode,
                                     const PortfolioProxies* proxies = nullptr,
                                     Execution exec = Execution::sequential);

struct ExposureProfile {
    std::vector<double> times;
    std::vector<double> epe;
    std::vector<double> pfe_95;
    PricingMode method = PricingMode::full_reval;
};

/// EPE = mean of max(V, 0); PFE95 = nearest-rank 95th percentile of max(V, 0).
ExposureProfile exposure_profile(const Portfolio& portfolio, const ScenarioSet& scenarios, PricingMode mode,
                                 const PortfolioProxies* proxies = nullptr, Execution exec = Execution::sequential);

ExposureProfile exposure_from_values(std::span<const double> values, const ScenarioSet& scenarios,
                                     PricingMode mode);

/// Nearest-rank percentile: the ceil(q*N)-th smallest value, q in (0, 1].
double nearest_rank_percentile(std::span<const double> data, double q);

/// Portfolio sensitivity to one factor, per [step][path], from proxy
/// partial derivatives only.
std::vector<double> sensitivity_profile(const Portfolio& portfolio, const PortfolioProxies& proxies,
                                        const ScenarioSet& scenarios, std::size_t factor);

// ---------------------------------------------------------------------------
// PnL correlation
// ---------------------------------------------------------------------------

/// Pearson correlation. Fails on fewer than 2 points or zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// One-day PnL f(shock) - f(base) per shock, for the original pricer and the
/// proxy, and their correlation. At least 100 shocks.
double pnl_correlation(const VectorFunction& original, const VectorFunction& proxy, std::span<const double> base,
                       std::span<const std::vector<double>> shocks);

/// One-day lognormal shocks of every coordinate around `base`, with annual
/// vols `vols` and 252 days a year.
std::vector<std::vector<double>> one_day_shocks(std::span<const double> base, std::span<const double> vols,
                                                std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

enum class Scheme { chebyshev, linear, equidistant };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Multilinear interpolation on an equispaced tensor mesh with `points`
/// nodes per dimension (>= 2).
class MultilinearInterpolant {
public:
    MultilinearInterpolant(const VectorFunction& f, const DomainBox& box, std::size_t points);

    double operator()(std::span<const double> x) const;

private:
    DomainBox box_;
    std::size_t points_;
    std::vector<double> values_;  // dimension 0 fastest
};

struct ConvergenceReport {
    Scheme scheme = Scheme::chebyshev;
    std::vector<std::size_t> points_per_dim;
    std::vector<std::size_t> anchor_counts;  ///< total oracle calls per build
    std::vector<double> sup_errors;
    /// Least-squares slope of log(sup error) against the per-dimension degree.
    double fitted_slope = 0.0;
    std::optional<double> rho;
    std::optional<double> bound_m;
};

/// Probe grid of about 10^4 points: a full tensor grid with
/// round(10^(4/d)) equispaced points per dimension.
std::vector<std::vector<double>> probe_grid(const DomainBox& box, std::size_t total = 10000);

/// One build per budget (points per dimension, strictly increasing); sup
/// error against f over probe_grid(box). The equidistant scheme is 1-D only.
ConvergenceReport convergence_study(const VectorFunction& f, const DomainBox& box, Scheme scheme,
                                    std::span<const std::size_t> points_per_dim);

/// Least-squares slope of log(max(y, floor)) against x.
double fitted_log_slope(std::span<const double> x, std::span<const double> y, double floor = 1e-300);

/// Bernstein ellipse parameter through a singularity z: |z + sqrt(z^2 - 1)|
/// on the branch giving a value >= 1.
double bernstein_rho(std::complex<double> singularity);

/// 4 M rho^-n / (rho - 1).
double chebyshev_error_bound(double m, double rho, std::size_t n);

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

struct SpeedReport {
    std::size_t probes = 0;
    std::size_t oracle_probes = 0;
    double build_seconds = 0.0;
    double oracle_seconds = 0.0;  ///< all oracle_probes
    double proxy_seconds = 0.0;   ///< all probes
    double oracle_per_eval = 0.0;
    double proxy_per_eval = 0.0;
    double multiplier = 0.0;  ///< oracle_per_eval / proxy_per_eval

    /// Building plus Evaluation cost of the proxy route.
    double proxy_total() const noexcept { return build_seconds + proxy_seconds; }
    /// Full revaluation of all probes.
    double full_total() const noexcept { return oracle_per_eval * static_cast<double>(probes); }
};

using ProxyBuilder = std::function<VectorFunction()>;

/// Wall-clock medians over `repeats` (>= 5) runs, single-threaded. The
/// oracle is timed on the first `oracle_probes` probes (0 = all), which keeps
/// studies with very slow oracles short; per-eval times are what compare.
SpeedReport speed_multiplier(const VectorFunction& oracle, const ProxyBuilder& build,
                             std::span<const std::vector<double>> probes, std::size_t repeats = 5,
                             std::size_t oracle_probes = 0);

double median(std::vector<double> data);

// ---------------------------------------------------------------------------
// Desk fixtures and CSV output
// ---------------------------------------------------------------------------

/// Spot (lognormal), implied vol and short rate (both normal).
ScenarioConfig desk_scenarios(std::uint64_t seed, std::size_t paths);

/// Call on (spot, vol), payer swap on rate, up-and-out call on spot and a
/// short put on spot. `notional_scale` multiplies every trade.
Portfolio desk_portfolio(double notional_scale = 1.0);

void write_profile_csv(std::span<const ExposureProfile> profiles, std::ostream& out);
void write_convergence_csv(std::span<const ConvergenceReport> reports, std::ostream& out);
void write_speed_csv(std::span<const SpeedReport> reports, std::ostream& out);

}  // namespace chebproxy::risk
