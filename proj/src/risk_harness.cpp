#include "chebproxy/risk_harness.hpp"

#include "chebproxy/error.hpp"
#include "chebproxy/pricers.hpp"
#include "chebproxy/rng.hpp"
#include "chebproxy/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

namespace chebproxy::risk {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) fail(ErrorKind::invalid_argument, message);
}

/// Widens a zero-width band (t = 0, zero vol) so it can carry a mesh.
Interval padded(double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double scale = mid != 0.0 ? std::abs(mid) : 1.0;
    if (hi - lo < 1e-9 * scale) {
        lo = mid - 1e-3 * scale;
        hi = mid + 1e-3 * scale;
    }
    return Interval(lo, hi);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

void ScenarioConfig::validate() const {
    require(paths >= 1, "scenario set needs at least one path");
    require(!times.empty(), "scenario set needs at least one time step");
    require(!factors.empty(), "scenario set needs at least one factor");
    double prev = 0.0;
    for (double t : times) {
        require(std::isfinite(t) && t >= prev, "scenario times must be finite, nonnegative and nondecreasing");
        prev = t;
    }
    for (const auto& f : factors) {
        require(std::isfinite(f.initial) && std::isfinite(f.drift) && std::isfinite(f.vol) && f.vol >= 0.0,
                "factor '" + f.name + "' needs finite parameters and vol >= 0");
        if (f.model == FactorModel::lognormal)
            require(f.initial > 0.0, "lognormal factor '" + f.name + "' needs a positive initial value");
    }
}

ScenarioSet::ScenarioSet(ScenarioConfig config, std::vector<double> values)
    : config_(std::move(config)), values_(std::move(values)) {
    config_.validate();
    if (values_.size() != config_.paths * config_.times.size() * config_.factors.size())
        fail(ErrorKind::count_mismatch, "scenario array size does not match paths x steps x factors");
    for (double v : values_)
        if (!std::isfinite(v)) fail(ErrorKind::non_finite, "scenario array holds a non-finite value");
}

ScenarioSet generate_scenarios(const ScenarioConfig& config, Execution exec) {
    config.validate();
    const std::size_t steps = config.times.size();
    const std::size_t nf = config.factors.size();
    std::vector<double> values(config.paths * steps * nf);
    parallel_for(config.paths, exec, [&](std::size_t p) {
        double prev_t = 0.0;
        for (std::size_t s = 0; s < steps; ++s) {
            const double dt = config.times[s] - prev_t;
            const double sq = std::sqrt(dt);
            for (std::size_t f = 0; f < nf; ++f) {
                const auto& spec = config.factors[f];
                const double x = s == 0 ? spec.initial : values[(p * steps + s - 1) * nf + f];
                const double z = CounterRng::normal(config.seed, p, s * nf + f);
                double next = x;
                if (spec.model == FactorModel::lognormal)
                    next = x * std::exp((spec.drift - 0.5 * spec.vol * spec.vol) * dt + spec.vol * sq * z);
                else
                    next = x + spec.drift * dt + spec.vol * sq * z;
                values[(p * steps + s) * nf + f] = next;
            }
            prev_t = config.times[s];
        }
    });
    return ScenarioSet(config, std::move(values));
}

Moments factor_moments(const FactorSpec& f, double t) {
    if (f.model == FactorModel::lognormal) {
        const double mean = f.initial * std::exp(f.drift * t);
        return {mean, mean * mean * std::expm1(f.vol * f.vol * t)};
    }
    return {f.initial + f.drift * t, f.vol * f.vol * t};
}

Interval factor_envelope(const FactorSpec& f, double t, double z) {
    const double width = z * f.vol * std::sqrt(t);
    if (f.model == FactorModel::lognormal) {
        const double center = (f.drift - 0.5 * f.vol * f.vol) * t;
        return padded(f.initial * std::exp(center - width), f.initial * std::exp(center + width));
    }
    const double center = f.initial + f.drift * t;
    return padded(center - width, center + width);
}

// ---------------------------------------------------------------------------
// Portfolio
// ---------------------------------------------------------------------------

Portfolio::Portfolio(std::vector<Trade> trades)
    : trades_(std::move(trades)), calls_(std::make_unique<std::atomic<std::size_t>>(0)) {
    for (const auto& t : trades_) {
        require(!t.factors.empty() && t.factors.size() == t.degrees.size(),
                "trade '" + t.name + "' needs one degree per factor");
        require(static_cast<bool>(t.price), "trade '" + t.name + "' has no pricer");
    }
}

double Portfolio::price(std::size_t trade, double t, std::span<const double> x) const {
    calls_->fetch_add(1, std::memory_order_relaxed);
    return trades_[trade].price(t, x);
}

void Portfolio::check_against(const ScenarioSet& scenarios) const {
    for (const auto& t : trades_)
        for (auto f : t.factors)
            if (f >= scenarios.factors())
                fail(ErrorKind::invalid_argument, "trade '" + t.name + "' refers to factor " + std::to_string(f) +
                                                      " but scenarios have " + std::to_string(scenarios.factors()));
}

double PortfolioProxies::ex_ante(std::size_t step) const {
    double sum = 0.0;
    for (const auto& p : by_step.at(step))
        if (p) sum += tensor_ex_ante_error(*p);
    return sum;
}

PortfolioProxies build_portfolio_proxies(const Portfolio& portfolio, const ScenarioSet& scenarios, double z,
                                         Execution exec) {
    portfolio.check_against(scenarios);
    const auto& factors = scenarios.config().factors;
    PortfolioProxies out;
    out.by_step.resize(scenarios.steps());
    for (std::size_t s = 0; s < scenarios.steps(); ++s) {
        const double t = scenarios.time(s);
        for (std::size_t i = 0; i < portfolio.trades().size(); ++i) {
            const auto& trade = portfolio.trades()[i];
            std::vector<Interval> box;
            bool dead = false;
            for (std::size_t j = 0; j < trade.factors.size(); ++j) {
                const auto f = trade.factors[j];
                const auto env = factor_envelope(factors[f], t, z);
                double lo = env.lo();
                double hi = env.hi();
                for (std::size_t p = 0; p < scenarios.paths(); ++p) {
                    lo = std::min(lo, scenarios.value(p, s, f));
                    hi = std::max(hi, scenarios.value(p, s, f));
                }
                if (j == 0 && trade.knock_out_above) {
                    hi = std::min(hi, *trade.knock_out_above);
                    if (lo >= hi) {
                        dead = true;
                        break;
                    }
                }
                box.push_back(padded(lo, hi));
            }
            if (dead) {
                out.by_step[s].emplace_back(std::nullopt);
                continue;
            }
            auto f = [&portfolio, i, t](std::span<const double> x) { return portfolio.price(i, t, x); };
            auto proxy = build_tensor(f, DomainBox(std::move(box)), trade.degrees, exec);
            out.oracle_calls += proxy.mesh().node_count();
            out.by_step[s].emplace_back(std::move(proxy));
        }
    }
    return out;
}

std::string to_string(PricingMode mode) { return mode == PricingMode::proxy ? "proxy" : "full-reval"; }

std::vector<double> portfolio_values(const Portfolio& portfolio, const ScenarioSet& scenarios, PricingMode mode,
                                     const PortfolioProxies* proxies, Execution exec) {
    portfolio.check_against(scenarios);
    if (mode == PricingMode::proxy) {
        if (proxies == nullptr) fail(ErrorKind::invalid_argument, "proxy mode needs built proxies");
        if (proxies->by_step.size() != scenarios.steps())
            fail(ErrorKind::incompatible, "proxies were built for a different number of time steps");
        for (const auto& row : proxies->by_step)
            if (row.size() != portfolio.trades().size())
                fail(ErrorKind::incompatible, "proxies were built for a different portfolio");
    }
    const auto trades = portfolio.trades();
    const std::size_t paths = scenarios.paths();
    std::vector<double> values(scenarios.steps() * paths);
    parallel_for(paths, exec, [&](std::size_t p) {
        std::vector<char> knocked(trades.size(), 0);
        std::vector<double> x;
        for (std::size_t s = 0; s < scenarios.steps(); ++s) {
            const auto state = scenarios.state(p, s);
            double v = 0.0;
            for (std::size_t i = 0; i < trades.size(); ++i) {
                const auto& trade = trades[i];
                x.clear();
                for (auto f : trade.factors) x.push_back(state[f]);
                if (trade.knock_out_above && x[0] >= *trade.knock_out_above) knocked[i] = 1;
                if (knocked[i]) continue;
                if (mode == PricingMode::full_reval) {
                    v += portfolio.price(i, scenarios.time(s), x);
                } else {
                    const auto& proxy = proxies->by_step[s][i];
                    if (!proxy)
                        fail(ErrorKind::domain, "trade '" + trade.name + "' has no proxy at step " +
                                                    std::to_string(s) + " for a live scenario");
                    v += (*proxy)(x);
                }
            }
            values[s * paths + p] = v;
        }
    });
    return values;
}

double nearest_rank_percentile(std::span<const double> data, double q) {
    require(!data.empty(), "percentile of an empty sample");
    require(q > 0.0 && q <= 1.0, "percentile level must lie in (0, 1]");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::max<std::size_t>(rank, 1) - 1];
}

ExposureProfile exposure_from_values(std::span<const double> values, const ScenarioSet& scenarios, PricingMode mode) {
    const std::size_t paths = scenarios.paths();
    if (values.size() != scenarios.steps() * paths)
        fail(ErrorKind::count_mismatch, "value array does not match the scenario set");
    ExposureProfile out;
    out.method = mode;
    out.times = scenarios.config().times;
    std::vector<double> exposure(paths);
    for (std::size_t s = 0; s < scenarios.steps(); ++s) {
        for (std::size_t p = 0; p < paths; ++p) exposure[p] = std::max(0.0, values[s * paths + p]);
        // Summing deviations from the first sample keeps the mean of a
        // constant sample exact, so it cannot exceed its own percentile.
        const double shift = exposure[0];
        double sum = 0.0;
        for (double e : exposure) sum += e - shift;
        out.epe.push_back(shift + sum / static_cast<double>(paths));
        out.pfe_95.push_back(nearest_rank_percentile(exposure, 0.95));
    }
    return out;
}

ExposureProfile exposure_profile(const Portfolio& portfolio, const ScenarioSet& scenarios, PricingMode mode,
                                 const PortfolioProxies* proxies, Execution exec) {
    const auto values = portfolio_values(portfolio, scenarios, mode, proxies, exec);
    return exposure_from_values(values, scenarios, mode);
}

std::vector<double> sensitivity_profile(const Portfolio& portfolio, const PortfolioProxies& proxies,
                                        const ScenarioSet& scenarios, std::size_t factor) {
    portfolio.check_against(scenarios);
    if (factor >= scenarios.factors()) fail(ErrorKind::invalid_argument, "no such factor");
    const auto trades = portfolio.trades();
    const std::size_t paths = scenarios.paths();
    std::vector<double> out(scenarios.steps() * paths, 0.0);
    std::vector<double> x;
    for (std::size_t p = 0; p < paths; ++p) {
        std::vector<char> knocked(trades.size(), 0);
        for (std::size_t s = 0; s < scenarios.steps(); ++s) {
            const auto state = scenarios.state(p, s);
            double g = 0.0;
            for (std::size_t i = 0; i < trades.size(); ++i) {
                const auto& trade = trades[i];
                x.clear();
                for (auto f : trade.factors) x.push_back(state[f]);
                if (trade.knock_out_above && x[0] >= *trade.knock_out_above) knocked[i] = 1;
                if (knocked[i]) continue;
                const auto pos = std::find(trade.factors.begin(), trade.factors.end(), factor);
                if (pos == trade.factors.end()) continue;
                const auto& proxy = proxies.by_step.at(s).at(i);
                if (!proxy) fail(ErrorKind::domain, "trade '" + trade.name + "' has no proxy at step " + std::to_string(s));
                g += proxy->partial(static_cast<std::size_t>(pos - trade.factors.begin()), x);
            }
            out[s * paths + p] = g;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PnL correlation
// ---------------------------------------------------------------------------

double pearson(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size() && a.size() >= 2, "correlation needs two samples of equal length >= 2");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0))
        fail(ErrorKind::invalid_argument, "degenerate PnL: zero variance, correlation undefined");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double pnl_correlation(const VectorFunction& original, const VectorFunction& proxy, std::span<const double> base,
                       std::span<const std::vector<double>> shocks) {
    require(shocks.size() >= 100, "PnL correlation needs at least 100 shocks");
    const double o0 = original(base);
    const double p0 = proxy(base);
    std::vector<double> po;
    std::vector<double> pp;
    po.reserve(shocks.size());
    pp.reserve(shocks.size());
    for (const auto& s : shocks) {
        po.push_back(original(s) - o0);
        pp.push_back(proxy(s) - p0);
    }
    return pearson(po, pp);
}

std::vector<std::vector<double>> one_day_shocks(std::span<const double> base, std::span<const double> vols,
                                                std::size_t count, std::uint64_t seed) {
    require(base.size() == vols.size(), "one vol per coordinate");
    const double dt = 1.0 / 252.0;
    std::vector<std::vector<double>> out(count, std::vector<double>(base.size()));
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t i = 0; i < base.size(); ++i) {
            const double z = CounterRng::normal(seed, k, i);
            out[k][i] = base[i] * std::exp(-0.5 * vols[i] * vols[i] * dt + vols[i] * std::sqrt(dt) * z);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::chebyshev: return "chebyshev";
        case Scheme::linear: return "linear";
        case Scheme::equidistant: return "equidistant";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "chebyshev") return Scheme::chebyshev;
    if (name == "linear") return Scheme::linear;
    if (name == "equidistant") return Scheme::equidistant;
    fail(ErrorKind::invalid_argument, "unknown scheme '" + name + "' (chebyshev, linear, equidistant)");
}

MultilinearInterpolant::MultilinearInterpolant(const VectorFunction& f, const DomainBox& box, std::size_t points)
    : box_(box), points_(points) {
    require(points >= 2, "multilinear interpolation needs at least 2 points per dimension");
    const std::size_t d = box.dims();
    std::size_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= points;
    values_.resize(count);
    std::vector<double> x(d);
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t rem = k;
        for (std::size_t i = 0; i < d; ++i) {
            const auto j = rem % points;
            rem /= points;
            x[i] = box[i].lo() + box[i].width() * static_cast<double>(j) / static_cast<double>(points - 1);
        }
        values_[k] = f(x);
    }
}

double MultilinearInterpolant::operator()(std::span<const double> x) const {
    const std::size_t d = box_.dims();
    if (x.size() != d) fail(ErrorKind::invalid_argument, "point has the wrong dimension");
    if (!box_.contains(x)) fail(ErrorKind::domain, "point outside the interpolation box");
    std::vector<std::size_t> cell(d);
    std::vector<double> w(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double u = (x[i] - box_[i].lo()) / box_[i].width() * static_cast<double>(points_ - 1);
        cell[i] = std::min(static_cast<std::size_t>(u), points_ - 2);
        w[i] = u - static_cast<double>(cell[i]);
    }
    double sum = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
        double weight = 1.0;
        std::size_t flat = 0;
        std::size_t stride = 1;
        for (std::size_t i = 0; i < d; ++i) {
            const bool up = (corner >> i) & 1U;
            weight *= up ? w[i] : 1.0 - w[i];
            flat += (cell[i] + (up ? 1 : 0)) * stride;
            stride *= points_;
        }
        sum += weight * values_[flat];
    }
    return sum;
}

std::vector<std::vector<double>> probe_grid(const DomainBox& box, std::size_t total) {
    const std::size_t d = box.dims();
    const auto m = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(std::pow(static_cast<double>(total), 1.0 / static_cast<double>(d)))));
    std::size_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= m;
    std::vector<std::vector<double>> out(count, std::vector<double>(d));
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t rem = k;
        for (std::size_t i = 0; i < d; ++i) {
            const auto j = rem % m;
            rem /= m;
            out[k][i] = j + 1 == m ? box[i].hi()
                                   : box[i].lo() + box[i].width() * static_cast<double>(j) / static_cast<double>(m - 1);
        }
    }
    return out;
}

double fitted_log_slope(std::span<const double> x, std::span<const double> y, double floor) {
    require(x.size() == y.size() && x.size() >= 2, "slope fit needs two samples of equal length >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        ly[i] = std::log(std::max(y[i], floor));
        mx += x[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (ly[i] - my);
    }
    require(sxx > 0.0, "slope fit needs distinct abscissae");
    return sxy / sxx;
}

ConvergenceReport convergence_study(const VectorFunction& f, const DomainBox& box, Scheme scheme,
                                    std::span<const std::size_t> points_per_dim) {
    require(!points_per_dim.empty(), "convergence study needs at least one budget");
    for (std::size_t i = 0; i < points_per_dim.size(); ++i) {
        require(points_per_dim[i] >= 2, "each budget needs at least 2 points per dimension");
        if (i > 0) require(points_per_dim[i] > points_per_dim[i - 1], "budgets must be strictly increasing");
    }
    const std::size_t d = box.dims();
    if (scheme == Scheme::equidistant) require(d == 1, "equidistant polynomial interpolation is one-dimensional only");

    const auto probes = probe_grid(box);
    std::vector<double> exact(probes.size());
    for (std::size_t k = 0; k < probes.size(); ++k) exact[k] = f(probes[k]);

    ConvergenceReport report;
    report.scheme = scheme;
    std::vector<double> degrees;
    for (auto n : points_per_dim) {
        std::size_t calls = 1;
        for (std::size_t i = 0; i < d; ++i) calls *= n;
        std::function<double(std::span<const double>)> approx;
        if (scheme == Scheme::chebyshev) {
            auto p = std::make_shared<TensorProxy>(build_tensor(f, box, std::vector<std::size_t>(d, n - 1)));
            approx = [p](std::span<const double> x) { return (*p)(x); };
        } else if (scheme == Scheme::linear) {
            auto p = std::make_shared<MultilinearInterpolant>(f, box, n);
            approx = [p](std::span<const double> x) { return (*p)(x); };
        } else {
            auto g = [&f](double x) { return f(std::span<const double>(&x, 1)); };
            auto p = std::make_shared<EquispacedInterpolant>(g, box[0], n - 1);
            approx = [p](std::span<const double> x) { return (*p)(x[0]); };
        }
        double sup = 0.0;
        for (std::size_t k = 0; k < probes.size(); ++k) sup = std::max(sup, std::abs(approx(probes[k]) - exact[k]));
        report.points_per_dim.push_back(n);
        report.anchor_counts.push_back(calls);
        report.sup_errors.push_back(sup);
        degrees.push_back(static_cast<double>(n - 1));
    }
    if (degrees.size() >= 2) report.fitted_slope = fitted_log_slope(degrees, report.sup_errors);
    return report;
}

double bernstein_rho(std::complex<double> z) {
    const auto r = std::sqrt(z * z - 1.0);
    return std::max(std::abs(z + r), std::abs(z - r));
}

double chebyshev_error_bound(double m, double rho, std::size_t n) {
    require(rho > 1.0, "Bernstein parameter must exceed 1");
    return 4.0 * m * std::pow(rho, -static_cast<double>(n)) / (rho - 1.0);
}

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

double median(std::vector<double> data) {
    require(!data.empty(), "median of an empty sample");
    std::sort(data.begin(), data.end());
    const std::size_t n = data.size();
    return n % 2 == 1 ? data[n / 2] : 0.5 * (data[n / 2 - 1] + data[n / 2]);
}

SpeedReport speed_multiplier(const VectorFunction& oracle, const ProxyBuilder& build,
                             std::span<const std::vector<double>> probes, std::size_t repeats,
                             std::size_t oracle_probes) {
    require(probes.size() >= 1000, "timing needs at least 1000 probes");
    require(repeats >= 5, "timing needs at least 5 repeats");
    const std::size_t n_oracle = oracle_probes == 0 ? probes.size() : std::min(oracle_probes, probes.size());

    std::vector<double> build_t;
    std::vector<double> proxy_t;
    std::vector<double> oracle_t;
    volatile double sink = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
        auto start = Clock::now();
        const auto proxy = build();
        build_t.push_back(seconds_since(start));

        start = Clock::now();
        double acc = 0.0;
        for (const auto& x : probes) acc += proxy(x);
        proxy_t.push_back(seconds_since(start));
        sink = sink + acc;

        start = Clock::now();
        acc = 0.0;
        for (std::size_t k = 0; k < n_oracle; ++k) acc += oracle(probes[k]);
        oracle_t.push_back(seconds_since(start));
        sink = sink + acc;
    }

    SpeedReport rep;
    rep.probes = probes.size();
    rep.oracle_probes = n_oracle;
    rep.build_seconds = median(build_t);
    rep.proxy_seconds = median(proxy_t);
    rep.oracle_seconds = median(oracle_t);
    rep.proxy_per_eval = rep.proxy_seconds / static_cast<double>(rep.probes);
    rep.oracle_per_eval = rep.oracle_seconds / static_cast<double>(n_oracle);
    rep.multiplier = rep.proxy_per_eval > 0.0 ? rep.oracle_per_eval / rep.proxy_per_eval : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Desk fixtures and CSV output
// ---------------------------------------------------------------------------

ScenarioConfig desk_scenarios(std::uint64_t seed, std::size_t paths) {
    ScenarioConfig c;
    c.seed = seed;
    c.paths = paths;
    for (int i = 0; i <= 8; ++i) c.times.push_back(0.125 * i);
    c.factors = {
        {"spot", FactorModel::lognormal, 1.0, 0.0, 0.2},
        {"vol", FactorModel::normal, 0.2, 0.0, 0.02},
        {"rate", FactorModel::normal, 0.02, 0.0, 0.01},
    };
    return c;
}

Portfolio desk_portfolio(double scale) {
    using namespace pricers;
    std::vector<Trade> trades;

    trades.push_back({"call_spot_vol", {0, 1}, {32, 12},
                      [scale](double t, std::span<const double> x) {
                          VanillaSpec s{x[0], 1.0, x[1], 0.0, 2.0 - t, OptionKind::call};
                          return scale * bs_price(s);
                      },
                      std::nullopt});

    trades.push_back({"payer_swap", {2}, {8},
                      [scale](double t, std::span<const double> x) {
                          SwapSpec s;
                          s.fixed_rate = 0.02;
                          s.flat_zero_rate = x[0];
                          // Remaining periods restart at t; accrued interest is ignored.
                          for (int k = 1; k <= 10; ++k)
                              if (0.5 * k > t) s.payment_times.push_back(0.5 * k - t);
                          return s.payment_times.empty() ? 0.0 : scale * swap_pv(s);
                      },
                      std::nullopt});

    trades.push_back({"up_and_out_call", {0}, {32},
                      [scale](double t, std::span<const double> x) {
                          BarrierSpec b{{x[0], 1.0, 0.2, 0.0, 1.5 - t, OptionKind::call}, 1.4};
                          return scale * barrier_price(b);
                      },
                      1.4});

    trades.push_back({"short_put", {0}, {40},
                      [scale](double t, std::span<const double> x) {
                          VanillaSpec s{x[0], 0.9, 0.2, 0.0, 1.25 - t, OptionKind::put};
                          return -scale * bs_price(s);
                      },
                      std::nullopt});
    return Portfolio(std::move(trades));
}

void write_profile_csv(std::span<const ExposureProfile> profiles, std::ostream& out) {
    out << "time,method,epe,pfe95\n";
    for (const auto& p : profiles)
        for (std::size_t s = 0; s < p.times.size(); ++s)
            out << to_shortest(p.times[s]) << ',' << to_string(p.method) << ',' << to_shortest(p.epe[s]) << ','
                << to_shortest(p.pfe_95[s]) << '\n';
}

void write_convergence_csv(std::span<const ConvergenceReport> reports, std::ostream& out) {
    out << "scheme,nodes,sup_error\n";
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.anchor_counts.size(); ++i)
            out << to_string(r.scheme) << ',' << r.anchor_counts[i] << ',' << to_shortest(r.sup_errors[i]) << '\n';
}

void write_speed_csv(std::span<const SpeedReport> reports, std::ostream& out) {
    out << "probes,oracle_probes,build_seconds,oracle_per_eval,proxy_per_eval,multiplier,proxy_total,full_total\n";
    for (const auto& r : reports)
        out << r.probes << ',' << r.oracle_probes << ',' << to_shortest(r.build_seconds) << ','
            << to_shortest(r.oracle_per_eval) << ',' << to_shortest(r.proxy_per_eval) << ','
            << to_shortest(r.multiplier) << ',' << to_shortest(r.proxy_total()) << ',' << to_shortest(r.full_total())
            << '\n';
}

}  // namespace chebproxy::risk
