#include "cli.hpp"

#include "chebproxy/cheb_core.hpp"
#include "chebproxy/clone_protocol.hpp"
#include "chebproxy/pricers.hpp"
#include "chebproxy/risk_harness.hpp"
#include "chebproxy/tensor.hpp"
#include "chebproxy/text.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace chebproxy::cli {

namespace fs = std::filesystem;
namespace pr = chebproxy::pricers;

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return exit_usage;
        case ErrorKind::convergence: return exit_convergence;
        case ErrorKind::domain: return exit_domain;
        case ErrorKind::io: return exit_io;
        case ErrorKind::non_finite:
        case ErrorKind::incompatible:
        case ErrorKind::id_mismatch:
        case ErrorKind::count_mismatch:
        case ErrorKind::format: return exit_format;
    }
    return exit_usage;
}

namespace {

// ---------------------------------------------------------------------------
// Oracle registry
// ---------------------------------------------------------------------------

using Params = std::map<std::string, double>;

struct OracleSpec {
    std::size_t dims;
    std::string axes;
    Params defaults;
    bool needs_seed = false;
    std::function<VectorFunction(const Params&, std::uint64_t)> make;
};

const std::map<std::string, OracleSpec>& registry() {
    static const std::map<std::string, OracleSpec> table = [] {
        std::map<std::string, OracleSpec> t;
        auto scalar = [](double (*f)(double)) {
            return [f](const Params&, std::uint64_t) {
                return VectorFunction([f](std::span<const double> x) { return f(x[0]); });
            };
        };
        t["exp"] = {1, "x", {}, false, scalar(pr::expx)};
        t["runge"] = {1, "x", {}, false, scalar(pr::runge)};
        t["abs"] = {1, "x", {}, false, scalar([](double x) { return std::abs(x); })};
        t["identity"] = {1, "x", {}, false, scalar([](double x) { return x; })};
        t["bs_call"] = {2, "spot,vol", {{"strike", 1.0}, {"rate", 0.0}, {"expiry", 1.0}}, false,
                        [](const Params& p, std::uint64_t) {
                            return VectorFunction([p](std::span<const double> x) {
                                return pr::bs_price({x[0], p.at("strike"), x[1], p.at("rate"), p.at("expiry"),
                                                     pr::OptionKind::call});
                            });
                        }};
        t["bs_call_spot"] = {1, "spot", {{"strike", 1.0}, {"vol", 0.2}, {"rate", 0.0}, {"expiry", 1.0}}, false,
                             [](const Params& p, std::uint64_t) {
                                 return VectorFunction([p](std::span<const double> x) {
                                     return pr::bs_price({x[0], p.at("strike"), p.at("vol"), p.at("rate"),
                                                          p.at("expiry"), pr::OptionKind::call});
                                 });
                             }};
        t["barrier_call"] = {1, "spot",
                             {{"strike", 1.0}, {"vol", 0.2}, {"rate", 0.0}, {"expiry", 1.0}, {"barrier", 1.5}},
                             false,
                             [](const Params& p, std::uint64_t) {
                                 return VectorFunction([p](std::span<const double> x) {
                                     return pr::barrier_price({{x[0], p.at("strike"), p.at("vol"), p.at("rate"),
                                                                p.at("expiry"), pr::OptionKind::call},
                                                               p.at("barrier")});
                                 });
                             }};
        t["swap"] = {1, "rate", {{"fixed_rate", 0.02}, {"tenor", 5.0}, {"frequency", 2.0}, {"notional", 1.0}}, false,
                     [](const Params& p, std::uint64_t) {
                         const auto periods = static_cast<long>(std::lround(p.at("tenor") * p.at("frequency")));
                         if (periods < 1 || p.at("frequency") <= 0.0)
                             fail(ErrorKind::invalid_argument, "swap needs tenor * frequency >= 1");
                         pr::SwapSpec base;
                         base.notional = p.at("notional");
                         base.fixed_rate = p.at("fixed_rate");
                         for (long k = 1; k <= periods; ++k)
                             base.payment_times.push_back(static_cast<double>(k) / p.at("frequency"));
                         return VectorFunction([base](std::span<const double> x) {
                             auto s = base;
                             s.flat_zero_rate = x[0];
                             return pr::swap_pv(s);
                         });
                     }};
        t["mc_call"] = {1, "spot",
                        {{"strike", 1.0}, {"vol", 0.2}, {"rate", 0.0}, {"expiry", 1.0}, {"paths", 100000.0}},
                        true,
                        [](const Params& p, std::uint64_t seed) {
                            const auto paths = static_cast<std::size_t>(p.at("paths"));
                            return VectorFunction([p, paths, seed](std::span<const double> x) {
                                return pr::slow_mc_price({x[0], p.at("strike"), p.at("vol"), p.at("rate"),
                                                          p.at("expiry"), pr::OptionKind::call},
                                                         paths, seed)
                                    .price;
                            });
                        }};
        return t;
    }();
    return table;
}

struct OracleChoice {
    std::string name;
    std::vector<std::string> params;  // key=value
    std::optional<std::uint64_t> seed;
};

struct ResolvedOracle {
    const OracleSpec* spec;
    VectorFunction f;
};

ResolvedOracle resolve_oracle(const OracleChoice& choice) {
    const auto it = registry().find(choice.name);
    if (it == registry().end()) {
        std::string known;
        for (const auto& [name, _] : registry()) known += (known.empty() ? "" : ", ") + name;
        fail(ErrorKind::invalid_argument, "unknown oracle '" + choice.name + "' (known: " + known + ")");
    }
    const auto& spec = it->second;
    Params params = spec.defaults;
    for (const auto& kv : choice.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) fail(ErrorKind::invalid_argument, "--param expects key=value, got '" + kv + "'");
        const auto key = kv.substr(0, eq);
        if (!params.count(key))
            fail(ErrorKind::invalid_argument, "oracle '" + choice.name + "' has no parameter '" + key + "'");
        try {
            params[key] = parse_double(std::string_view(kv).substr(eq + 1), key);
        } catch (const Error& e) {
            fail(ErrorKind::invalid_argument, e.what());
        }
    }
    if (spec.needs_seed && !choice.seed)
        fail(ErrorKind::invalid_argument, "oracle '" + choice.name + "' is random; pass --seed");
    return {&spec, spec.make(params, choice.seed.value_or(0))};
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

DomainBox parse_box(const std::vector<std::string>& specs) {
    if (specs.empty()) fail(ErrorKind::invalid_argument, "--box is required (one lo:hi per dimension)");
    std::vector<Interval> intervals;
    for (const auto& s : specs) {
        const auto colon = s.find(':', 1);
        if (colon == std::string::npos) fail(ErrorKind::invalid_argument, "--box expects lo:hi, got '" + s + "'");
        try {
            intervals.emplace_back(parse_double(std::string_view(s).substr(0, colon), "box lower bound"),
                                   parse_double(std::string_view(s).substr(colon + 1), "box upper bound"));
        } catch (const Error& e) {
            fail(ErrorKind::invalid_argument, std::string("bad box '") + s + "': " + e.what());
        }
    }
    return DomainBox(std::move(intervals));
}

fs::path output_path(const std::string& flag, const std::string& default_name) {
    fs::path p = flag;
    if (flag.empty()) {
        const char* dir = std::getenv("CHEBPROXY_OUT_DIR");
        p = fs::path(dir != nullptr && *dir != '\0' ? dir : ".") / default_name;
    }
    const auto parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) fail(ErrorKind::io, "output directory " + parent.string() + " does not exist");
    return p;
}

void require_file(const fs::path& p) {
    if (!fs::is_regular_file(p)) fail(ErrorKind::io, "cannot read " + p.string());
}

std::string read_text(const fs::path& p) {
    require_file(p);
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorKind::io, "read failed for " + p.string());
    return ss.str();
}

/// Rows of comma-separated reals; blank lines, '#' comments and a
/// non-numeric first line (a header) are skipped.
std::vector<std::vector<double>> read_points(const fs::path& p) {
    std::istringstream in(read_text(p));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<double> row;
        try {
            for (const auto& cell : split(t, ',')) row.push_back(parse_double(trim(cell), "coordinate"));
        } catch (const Error&) {
            if (rows.empty() && line_no == 1) continue;
            fail(ErrorKind::format, p.string() + " line " + std::to_string(line_no) + ": not a row of numbers");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> parse_inline_point(const std::string& s) {
    std::vector<double> x;
    try {
        for (const auto& cell : split(s, ',')) x.push_back(parse_double(trim(cell), "coordinate"));
    } catch (const Error& e) {
        fail(ErrorKind::invalid_argument, std::string("bad --point '") + s + "': " + e.what());
    }
    return x;
}

void emit(const std::string& flag, const std::string& text, std::ostream& out) {
    if (flag.empty()) {
        out << text;
        return;
    }
    write_file_atomically(output_path(flag, ""), text);
}

std::string converged_text(const BuildInfo& info, bool converged) {
    return info.tolerance ? (converged ? "true" : "false") : "n/a";
}

const BuildInfo& info_of(const Proxy& p) {
    if (const auto* q = std::get_if<Interpolant1D>(&p)) return q->build_info();
    return std::get<TensorProxy>(p).build_info();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct BuildArgs {
    OracleChoice oracle;
    std::vector<std::string> box;
    std::vector<std::size_t> degrees;
    double tol = 0.0;
    std::size_t max_degree = 256;
    std::string id;
    std::string policy = "strict";
    std::string out;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    const auto oracle = resolve_oracle(a.oracle);
    const auto box = parse_box(a.box);
    if (box.dims() != oracle.spec->dims)
        fail(ErrorKind::invalid_argument, "oracle '" + a.oracle.name + "' takes " + std::to_string(oracle.spec->dims) +
                                              " coordinates (" + oracle.spec->axes + "), box has " +
                                              std::to_string(box.dims()));
    const bool adaptive = a.tol > 0.0;
    if (!adaptive && a.degrees.size() != box.dims())
        fail(ErrorKind::invalid_argument, "pass --degrees with one entry per dimension, or --tol");
    const EvalPolicy policy = a.policy == "clamp" ? EvalPolicy::clamp : EvalPolicy::strict;
    const std::string id = a.id.empty() ? a.oracle.name : a.id;
    const auto path = output_path(a.out, id + ".cbp");

    std::size_t calls = 0;
    VectorFunction counted = [&](std::span<const double> x) {
        ++calls;
        return oracle.f(x);
    };
    auto scalar = [&](double x) { return counted(std::span<const double>(&x, 1)); };

    Proxy proxy = Interpolant1D(box[0], {0.0});
    bool converged = false;
    if (box.dims() == 1) {
        auto p = adaptive ? build_adaptive(scalar, box[0], a.tol, a.max_degree)
                          : build_interpolant(scalar, box[0], a.degrees[0]);
        converged = ex_ante_error(p).converged;
        proxy = p.with_policy(policy);
    } else if (adaptive) {
        auto r = build_tensor_adaptive(counted, box, a.tol, a.max_degree);
        converged = r.converged;
        proxy = r.proxy.with_policy(policy);
    } else {
        proxy = build_tensor(counted, box, a.degrees).with_policy(policy);
    }

    std::vector<std::string> labels = split(oracle.spec->axes, ',');
    save_archive({id, proxy, labels, build_timestamp()}, path);

    out << "proxy_id " << id << '\n'
        << "archive " << path.string() << '\n'
        << "oracle_calls " << calls << '\n'
        << "ex_ante_error " << to_shortest(proxy_ex_ante_error(proxy)) << '\n'
        << "converged " << converged_text(info_of(proxy), converged) << '\n';
    if (adaptive && !converged) {
        err << "error: adaptive build did not reach tolerance " << to_shortest(a.tol) << " within degree "
            << a.max_degree << '\n';
        return exit_convergence;
    }
    return exit_ok;
}

struct EvalArgs {
    std::string archive;
    std::vector<std::string> points;
    std::string points_file;
    std::size_t dim = 0;  // 1-based, diff only
    std::string out;
};

int cmd_eval(const EvalArgs& a, bool derivative, std::ostream& out) {
    require_file(a.archive);
    if (!a.points_file.empty()) require_file(a.points_file);
    if (!a.out.empty()) output_path(a.out, "");
    if (a.points.empty() == a.points_file.empty())
        fail(ErrorKind::invalid_argument, "pass either --point (repeatable) or --points FILE");

    const auto archive = load_archive(a.archive);
    const std::size_t d = proxy_dims(archive.proxy);
    if (derivative && (a.dim < 1 || a.dim > d))
        fail(ErrorKind::invalid_argument, "--dim must lie in 1.." + std::to_string(d));

    std::vector<std::vector<double>> points;
    if (a.points_file.empty())
        for (const auto& s : a.points) points.push_back(parse_inline_point(s));
    else
        points = read_points(a.points_file);

    std::ostringstream csv;
    csv << (derivative ? "derivative\n" : "value\n");
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].size() != d)
            fail(ErrorKind::invalid_argument, "point " + std::to_string(k + 1) + " has " +
                                                  std::to_string(points[k].size()) + " coordinates, proxy has " +
                                                  std::to_string(d));
        const double v = derivative ? differentiate_proxy(archive.proxy, a.dim - 1, points[k])
                                    : evaluate_proxy(archive.proxy, points[k]);
        csv << to_shortest(v) << '\n';
    }
    emit(a.out, csv.str(), out);
    return exit_ok;
}

struct CompressArgs {
    std::vector<std::string> inputs;
    std::string id = "portfolio";
    std::string out;
};

int cmd_compress(const CompressArgs& a, std::ostream& out) {
    for (const auto& p : a.inputs) require_file(p);
    const auto path = output_path(a.out, a.id + ".cbp");
    std::vector<ProxyArchive> archives;
    for (const auto& p : a.inputs) archives.push_back(load_archive(p));

    Proxy compressed = Interpolant1D(Interval(0.0, 1.0), {0.0});
    if (std::holds_alternative<Interpolant1D>(archives.front().proxy)) {
        std::vector<Interpolant1D> book;
        for (const auto& ar : archives) {
            if (!std::holds_alternative<Interpolant1D>(ar.proxy))
                fail(ErrorKind::incompatible, "cannot compress 1-D and tensor proxies together");
            book.push_back(std::get<Interpolant1D>(ar.proxy));
        }
        compressed = compress(book);
    } else {
        std::vector<TensorProxy> book;
        for (const auto& ar : archives) {
            if (!std::holds_alternative<TensorProxy>(ar.proxy))
                fail(ErrorKind::incompatible, "cannot compress 1-D and tensor proxies together");
            book.push_back(std::get<TensorProxy>(ar.proxy));
        }
        compressed = compress_tensor(book);
    }
    save_archive({a.id, compressed, archives.front().labels, build_timestamp()}, path);
    out << "proxy_id " << a.id << '\n' << "archive " << path.string() << '\n' << "trades " << archives.size() << '\n';
    return exit_ok;
}

struct CloneRequestArgs {
    std::string id;
    std::vector<std::string> box;
    std::vector<std::size_t> degrees;
    std::vector<std::string> labels;
    std::string out;
};

int cmd_clone_request(const CloneRequestArgs& a, std::ostream& out) {
    const auto box = parse_box(a.box);
    const auto path = output_path(a.out, a.id + ".request.csv");
    const auto request = make_request(a.id, box, a.degrees, a.labels);
    emit_request(request, path);
    out << "proxy_id " << a.id << '\n' << "request " << path.string() << '\n'
        << "nodes " << request.mesh.node_count() << '\n';
    return exit_ok;
}

struct CloneRespondArgs {
    std::string request;
    OracleChoice oracle;
    std::string out;
};

int cmd_clone_respond(const CloneRespondArgs& a, std::ostream& out) {
    require_file(a.request);
    const auto oracle = resolve_oracle(a.oracle);
    const auto request = load_request(a.request);
    const auto path = output_path(a.out, request.proxy_id + ".response.csv");
    if (request.mesh.dims() != oracle.spec->dims)
        fail(ErrorKind::invalid_argument, "request has " + std::to_string(request.mesh.dims()) +
                                              " dimensions, oracle '" + a.oracle.name + "' takes " +
                                              std::to_string(oracle.spec->dims));
    save_response(answer_request(request, oracle.f), path);
    out << "proxy_id " << request.proxy_id << '\n' << "response " << path.string() << '\n'
        << "oracle_calls " << request.mesh.node_count() << '\n';
    return exit_ok;
}

struct CloneBuildArgs {
    std::string request;
    std::string response;
    std::string out;
};

int cmd_clone_build(const CloneBuildArgs& a, std::ostream& out) {
    require_file(a.request);
    require_file(a.response);
    const auto request = load_request(a.request);
    const auto path = output_path(a.out, request.proxy_id + ".cbp");
    auto proxy = ingest_response(request, load_response(a.response));
    save_archive({request.proxy_id, proxy, request.labels, build_timestamp()}, path);
    out << "proxy_id " << request.proxy_id << '\n' << "archive " << path.string() << '\n'
        << "oracle_calls " << proxy.build_info().oracle_calls << '\n'
        << "ex_ante_error " << to_shortest(tensor_ex_ante_error(proxy)) << '\n';
    return exit_ok;
}

struct BenchArgs {
    std::string study = "convergence";
    OracleChoice oracle;
    std::vector<std::string> box;
    std::vector<std::string> schemes{"chebyshev", "linear"};
    std::vector<std::size_t> budgets{4, 8, 16, 32};
    std::vector<std::size_t> degrees;
    std::size_t probes = 1000;
    std::size_t repeats = 5;
    std::size_t oracle_probes = 0;
    std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    const auto oracle = resolve_oracle(a.oracle);
    const auto box = parse_box(a.box);
    if (!a.out.empty()) output_path(a.out, "");
    if (box.dims() != oracle.spec->dims)
        fail(ErrorKind::invalid_argument, "oracle '" + a.oracle.name + "' takes " +
                                              std::to_string(oracle.spec->dims) + " coordinates");
    std::ostringstream csv;
    if (a.study == "convergence") {
        std::vector<risk::ConvergenceReport> reports;
        for (const auto& s : a.schemes)
            reports.push_back(risk::convergence_study(oracle.f, box, risk::scheme_from_string(s), a.budgets));
        risk::write_convergence_csv(reports, csv);
    } else {
        if (a.degrees.size() != box.dims())
            fail(ErrorKind::invalid_argument, "timing study needs --degrees with one entry per dimension");
        const auto probes = risk::probe_grid(box, a.probes);
        auto build = [&] {
            auto p = std::make_shared<TensorProxy>(build_tensor(oracle.f, box, a.degrees));
            return VectorFunction([p](std::span<const double> x) { return (*p)(x); });
        };
        const auto rep = risk::speed_multiplier(oracle.f, build, probes, a.repeats, a.oracle_probes);
        risk::write_speed_csv(std::span(&rep, 1), csv);
    }
    emit(a.out, csv.str(), out);
    return exit_ok;
}

struct RiskArgs {
    std::size_t paths = 1000;
    std::optional<std::uint64_t> seed;
    std::string mode = "both";
    double notional_scale = 1.0;
    std::string out;
};

int cmd_risk(const RiskArgs& a, std::ostream& out) {
    if (!a.seed) fail(ErrorKind::invalid_argument, "risk needs an explicit --seed");
    const auto path = output_path(a.out, "profile.csv");
    const auto book = risk::desk_portfolio(a.notional_scale);
    const auto scenarios = risk::generate_scenarios(risk::desk_scenarios(*a.seed, a.paths));

    std::vector<risk::ExposureProfile> profiles;
    std::ostringstream summary;
    std::optional<risk::PortfolioProxies> proxies;
    if (a.mode == "full" || a.mode == "both") {
        book.reset_oracle_calls();
        profiles.push_back(risk::exposure_profile(book, scenarios, risk::PricingMode::full_reval));
        summary << "full_reval_oracle_calls " << book.oracle_calls() << '\n';
    }
    if (a.mode == "proxy" || a.mode == "both") {
        book.reset_oracle_calls();
        proxies = risk::build_portfolio_proxies(book, scenarios);
        summary << "proxy_build_oracle_calls " << book.oracle_calls() << '\n';
        book.reset_oracle_calls();
        profiles.push_back(risk::exposure_profile(book, scenarios, risk::PricingMode::proxy, &*proxies));
        summary << "proxy_eval_oracle_calls " << book.oracle_calls() << '\n';
    }
    if (profiles.size() == 2) {
        double worst = 0.0;
        bool agree = true;
        for (std::size_t s = 0; s < scenarios.steps(); ++s) {
            const double gap = std::max(std::abs(profiles[0].epe[s] - profiles[1].epe[s]),
                                        std::abs(profiles[0].pfe_95[s] - profiles[1].pfe_95[s]));
            worst = std::max(worst, gap);
            agree = agree && gap <= 10.0 * proxies->ex_ante(s);
        }
        summary << "max_profile_gap " << to_shortest(worst) << '\n'
                << "within_ex_ante_x10 " << (agree ? "true" : "false") << '\n';
    }
    std::ostringstream csv;
    risk::write_profile_csv(profiles, csv);
    write_file_atomically(path, csv.str());
    out << "profile " << path.string() << '\n' << summary.str();
    return exit_ok;
}

void add_oracle_options(CLI::App* cmd, OracleChoice& o) {
    cmd->add_option("--oracle", o.name, "Pricing function: exp, runge, abs, identity, bs_call, bs_call_spot, "
                                        "barrier_call, swap, mc_call")
        ->required();
    cmd->add_option("--param", o.params, "Oracle parameter key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Seed for random oracles");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chebyshev proxies for pricing functions"};
    app.name(args.empty() ? "chebproxy" : fs::path(args[0]).filename().string());
    app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags win");
    app.require_subcommand(1);

    BuildArgs build;
    auto* c_build = app.add_subcommand("build", "Sample an oracle and save a proxy archive");
    add_oracle_options(c_build, build.oracle);
    c_build->add_option("--box", build.box, "lo:hi per dimension, e.g. --box=-1:1")->required();
    auto* deg = c_build->add_option("--degrees", build.degrees, "Fixed degree per dimension")->delimiter(',');
    auto* tol = c_build->add_option("--tol", build.tol, "Adaptive build to this tail tolerance")
                    ->check(CLI::PositiveNumber);
    deg->excludes(tol);
    c_build->add_option("--max-degree", build.max_degree, "Adaptive degree cap")->check(CLI::Range(4, 1 << 16));
    c_build->add_option("--id", build.id, "Proxy id (default: oracle name)");
    c_build->add_option("--policy", build.policy, "Out-of-box evaluation")
        ->check(CLI::IsMember({"strict", "clamp"}));
    c_build->add_option("--out", build.out, "Archive path (default: $CHEBPROXY_OUT_DIR/<id>.cbp)");

    EvalArgs eval;
    auto* c_eval = app.add_subcommand("eval", "Evaluate a proxy archive");
    EvalArgs diff;
    auto* c_diff = app.add_subcommand("diff", "Differentiate a proxy archive along one dimension");
    for (auto [cmd, a] : {std::pair{c_eval, &eval}, std::pair{c_diff, &diff}}) {
        cmd->add_option("--archive", a->archive, "Proxy archive")->required();
        cmd->add_option("--point", a->points, "Comma-separated coordinates (repeatable)");
        cmd->add_option("--points", a->points_file, "CSV file, one point per row");
        cmd->add_option("--out", a->out, "Output CSV (default: stdout)");
    }
    c_diff->add_option("--dim", diff.dim, "Dimension to differentiate, 1-based")->required();

    CompressArgs comp;
    auto* c_comp = app.add_subcommand("compress", "Sum same-mesh proxies into one portfolio proxy");
    c_comp->add_option("--in", comp.inputs, "Input archives")->required()->expected(1, -1);
    c_comp->add_option("--id", comp.id, "Proxy id of the result");
    c_comp->add_option("--out", comp.out, "Archive path");

    CloneRequestArgs creq;
    auto* c_creq = app.add_subcommand("clone-request", "Write the anchor-point request CSV");
    c_creq->add_option("--id", creq.id, "Proxy id")->required();
    c_creq->add_option("--box", creq.box, "lo:hi per dimension")->required();
    c_creq->add_option("--degrees", creq.degrees, "Degree per dimension")->required()->delimiter(',');
    c_creq->add_option("--labels", creq.labels, "Axis names")->delimiter(',');
    c_creq->add_option("--out", creq.out, "Request path");

    CloneRespondArgs cresp;
    auto* c_cresp = app.add_subcommand("clone-respond", "Price a request with a built-in oracle");
    c_cresp->add_option("--request", cresp.request, "Request CSV")->required();
    add_oracle_options(c_cresp, cresp.oracle);
    c_cresp->add_option("--out", cresp.out, "Response path");

    CloneBuildArgs cbuild;
    auto* c_cbuild = app.add_subcommand("clone-build", "Build a proxy archive from request and response");
    c_cbuild->add_option("--request", cbuild.request, "Request CSV")->required();
    c_cbuild->add_option("--response", cbuild.response, "Response CSV")->required();
    c_cbuild->add_option("--out", cbuild.out, "Archive path");

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Convergence or timing study, written as CSV");
    c_bench->add_option("--study", bench.study, "convergence or timing")
        ->check(CLI::IsMember({"convergence", "timing"}));
    add_oracle_options(c_bench, bench.oracle);
    c_bench->add_option("--box", bench.box, "lo:hi per dimension")->required();
    c_bench->add_option("--schemes", bench.schemes, "chebyshev,linear,equidistant")->delimiter(',');
    c_bench->add_option("--budgets", bench.budgets, "Points per dimension, increasing")->delimiter(',');
    c_bench->add_option("--degrees", bench.degrees, "Proxy degrees for the timing study")->delimiter(',');
    c_bench->add_option("--probes", bench.probes, "Probe count for the timing study");
    c_bench->add_option("--repeats", bench.repeats, "Timing repeats (median)");
    c_bench->add_option("--oracle-probes", bench.oracle_probes, "Time the oracle on this many probes (0 = all)");
    c_bench->add_option("--out", bench.out, "Output CSV (default: stdout)");

    RiskArgs riskargs;
    auto* c_risk = app.add_subcommand("risk", "EPE/PFE95 profiles of the desk portfolio");
    c_risk->add_option("--paths", riskargs.paths, "Scenario paths")->check(CLI::PositiveNumber);
    c_risk->add_option("--seed", riskargs.seed, "Scenario seed")->required();
    c_risk->add_option("--mode", riskargs.mode, "full, proxy or both")->check(CLI::IsMember({"full", "proxy", "both"}));
    c_risk->add_option("--notional-scale", riskargs.notional_scale, "Multiplies every trade");
    c_risk->add_option("--out", riskargs.out, "Profile CSV (default: $CHEBPROXY_OUT_DIR/profile.csv)");

    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (c_build->parsed()) return cmd_build(build, out, err);
        if (c_eval->parsed()) return cmd_eval(eval, false, out);
        if (c_diff->parsed()) return cmd_eval(diff, true, out);
        if (c_comp->parsed()) return cmd_compress(comp, out);
        if (c_creq->parsed()) return cmd_clone_request(creq, out);
        if (c_cresp->parsed()) return cmd_clone_respond(cresp, out);
        if (c_cbuild->parsed()) return cmd_clone_build(cbuild, out);
        if (c_bench->parsed()) return cmd_bench(bench, out);
        if (c_risk->parsed()) return cmd_risk(riskargs, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace chebproxy::cli
