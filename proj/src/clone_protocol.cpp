#include "chebproxy/clone_protocol.hpp"

#include "chebproxy/error.hpp"
#include "chebproxy/text.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace chebproxy {

namespace {

void check_token(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_of(" \t\r\n,#") != std::string::npos)
        fail(ErrorKind::invalid_argument, std::string(what) + " '" + s + "' must be a non-empty token without spaces, commas or '#'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorKind::io, "read failed for " + path.string());
    return ss.str();
}

/// "# key rest of line" -> (key, rest). Returns false for non-comment lines.
bool parse_comment(std::string_view line, std::string& key, std::string& rest) {
    line = trim(line);
    if (line.empty() || line.front() != '#') return false;
    line = trim(line.substr(1));
    const auto sp = line.find_first_of(" \t");
    key = std::string(line.substr(0, sp));
    rest = sp == std::string_view::npos ? std::string() : std::string(trim(line.substr(sp)));
    return true;
}

std::size_t dim_suffix(const std::string& key, const std::string& prefix, std::size_t dims) {
    const auto i = parse_unsigned(std::string_view(key).substr(prefix.size()), key);
    if (i < 1 || i > dims) fail(ErrorKind::format, "header '" + key + "' refers to a dimension outside 1.." + std::to_string(dims));
    return static_cast<std::size_t>(i - 1);
}

double parse_finite(std::string_view text, std::string_view what) {
    const double v = parse_double(text, what);
    if (!std::isfinite(v)) fail(ErrorKind::format, std::string(what) + " must be finite");
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Requests and responses
// ---------------------------------------------------------------------------

AnchorRequest make_request(std::string proxy_id, const DomainBox& box, std::vector<std::size_t> degrees,
                           std::vector<std::string> labels) {
    check_token(proxy_id, "proxy id");
    TensorMesh mesh(box, std::move(degrees));
    if (labels.empty())
        for (std::size_t i = 0; i < mesh.dims(); ++i) labels.push_back("x" + std::to_string(i + 1));
    if (labels.size() != mesh.dims())
        fail(ErrorKind::invalid_argument, "need one label per dimension");
    for (const auto& l : labels) check_token(l, "label");
    return AnchorRequest{std::move(proxy_id), std::move(mesh), std::move(labels)};
}

void write_request(const AnchorRequest& request, std::ostream& out) {
    const auto& mesh = request.mesh;
    const std::size_t d = mesh.dims();
    out << "# proxy_id " << request.proxy_id << '\n';
    out << "# dims " << d << '\n';
    out << "# ordering " << node_ordering << '\n';
    for (std::size_t i = 0; i < d; ++i) out << "# label_" << i + 1 << ' ' << request.labels[i] << '\n';
    for (std::size_t i = 0; i < d; ++i)
        out << "# interval_" << i + 1 << ' ' << to_shortest(mesh.box()[i].lo()) << ' '
            << to_shortest(mesh.box()[i].hi()) << '\n';
    for (std::size_t i = 0; i < d; ++i) out << "# degree_" << i + 1 << ' ' << mesh.degrees()[i] << '\n';
    for (std::size_t i = 0; i < d; ++i) out << "index_" << i + 1 << ',';
    for (std::size_t i = 0; i < d; ++i) out << "coord_" << i + 1 << (i + 1 < d ? "," : "\n");
    for (std::size_t k = 0; k < mesh.node_count(); ++k) {
        const auto idx = mesh.multi_index(k);
        const auto x = mesh.node(k);
        for (auto j : idx) out << j << ',';
        for (std::size_t i = 0; i < d; ++i) out << to_shortest(x[i]) << (i + 1 < d ? "," : "\n");
    }
}

AnchorRequest read_request(std::istream& in) {
    std::string line;
    std::string key;
    std::string rest;
    std::optional<std::string> id;
    std::optional<std::size_t> dims;
    std::map<std::size_t, std::string> labels;
    std::map<std::size_t, std::pair<double, double>> intervals;
    std::map<std::size_t, std::size_t> degrees;
    std::size_t rows = 0;
    bool saw_columns = false;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (parse_comment(line, key, rest)) {
            if (key == "proxy_id") {
                id = rest;
            } else if (key == "dims") {
                dims = parse_unsigned(rest, "dims");
                if (*dims == 0) fail(ErrorKind::format, "request declares zero dimensions");
            } else if (key == "ordering") {
                if (rest != node_ordering) fail(ErrorKind::format, "unsupported node ordering '" + rest + "'");
            } else if (!dims) {
                fail(ErrorKind::format, "request header '" + key + "' before '# dims'");
            } else if (key.starts_with("label_")) {
                labels[dim_suffix(key, "label_", *dims)] = rest;
            } else if (key.starts_with("interval_")) {
                const auto parts = split(rest, ' ');
                if (parts.size() != 2) fail(ErrorKind::format, "'" + key + "' needs two bounds");
                intervals[dim_suffix(key, "interval_", *dims)] = {parse_finite(parts[0], key), parse_finite(parts[1], key)};
            } else if (key.starts_with("degree_")) {
                degrees[dim_suffix(key, "degree_", *dims)] = parse_unsigned(rest, key);
            } else {
                fail(ErrorKind::format, "unknown request header '" + key + "'");
            }
            continue;
        }
        if (!saw_columns && trim(line).starts_with("index_")) {
            saw_columns = true;
            continue;
        }
        if (!dims) fail(ErrorKind::format, "data row before request header");
        if (split(trim(line), ',').size() != 2 * *dims)
            fail(ErrorKind::format, "request row at line " + std::to_string(line_no) + " has the wrong number of columns");
        ++rows;
    }
    if (!id || !dims) fail(ErrorKind::format, "request is missing '# proxy_id' or '# dims'");
    if (intervals.size() != *dims || degrees.size() != *dims)
        fail(ErrorKind::format, "request must declare an interval and a degree for every dimension");

    std::vector<Interval> ivs;
    std::vector<std::size_t> degs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < *dims; ++i) {
        ivs.emplace_back(intervals[i].first, intervals[i].second);
        degs.push_back(degrees[i]);
        names.push_back(labels.count(i) ? labels[i] : "x" + std::to_string(i + 1));
    }
    auto request = make_request(*id, DomainBox(std::move(ivs)), std::move(degs), std::move(names));
    if (rows != request.mesh.node_count())
        fail(ErrorKind::count_mismatch, "request lists " + std::to_string(rows) + " nodes, header implies " +
                                            std::to_string(request.mesh.node_count()));
    return request;
}

void emit_request(const AnchorRequest& request, const std::filesystem::path& path) {
    std::ostringstream out;
    write_request(request, out);
    write_file_atomically(path, out.str());
}

AnchorRequest load_request(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return read_request(in);
}

AnchorResponse answer_request(const AnchorRequest& request, const VectorFunction& oracle) {
    const auto& mesh = request.mesh;
    AnchorResponse response{request.proxy_id, mesh.dims(), {}, {}};
    response.indices.reserve(mesh.node_count() * mesh.dims());
    response.values.reserve(mesh.node_count());
    for (std::size_t k = 0; k < mesh.node_count(); ++k) {
        const auto idx = mesh.multi_index(k);
        response.indices.insert(response.indices.end(), idx.begin(), idx.end());
        response.values.push_back(oracle(mesh.node(k)));
    }
    return response;
}

void write_response(const AnchorResponse& response, std::ostream& out) {
    const std::size_t d = response.dims;
    out << "# proxy_id " << response.proxy_id << '\n';
    for (std::size_t i = 0; i < d; ++i) out << "index_" << i + 1 << ',';
    out << "value\n";
    for (std::size_t k = 0; k < response.values.size(); ++k) {
        for (std::size_t i = 0; i < d; ++i) out << response.indices[k * d + i] << ',';
        out << to_shortest(response.values[k]) << '\n';
    }
}

AnchorResponse read_response(std::istream& in) {
    AnchorResponse response;
    std::string line;
    std::string key;
    std::string rest;
    bool have_id = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (parse_comment(line, key, rest)) {
            if (key == "proxy_id") {
                response.proxy_id = rest;
                have_id = true;
            }
            continue;
        }
        const auto cols = split(trim(line), ',');
        if (cols.front().starts_with("index_") || cols.front() == "value") {
            if (cols.back() != "value") fail(ErrorKind::format, "response column header must end with 'value'");
            response.dims = cols.size() - 1;
            continue;
        }
        if (response.dims == 0) response.dims = cols.size() - 1;
        if (cols.size() != response.dims + 1)
            fail(ErrorKind::format, "response row at line " + std::to_string(line_no) + " has " +
                                        std::to_string(cols.size()) + " columns, expected " +
                                        std::to_string(response.dims + 1));
        for (std::size_t i = 0; i < response.dims; ++i)
            response.indices.push_back(parse_unsigned(cols[i], "node index"));
        // Non-finite values are parsed here and rejected by ingest_response.
        response.values.push_back(parse_double(cols.back(), "response value"));
    }
    if (!have_id) fail(ErrorKind::format, "response is missing '# proxy_id'");
    return response;
}

void save_response(const AnchorResponse& response, const std::filesystem::path& path) {
    std::ostringstream out;
    write_response(response, out);
    write_file_atomically(path, out.str());
}

AnchorResponse load_response(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return read_response(in);
}

TensorProxy ingest_response(const AnchorRequest& request, const AnchorResponse& response) {
    const auto& mesh = request.mesh;
    if (response.proxy_id != request.proxy_id)
        fail(ErrorKind::id_mismatch, "response proxy_id '" + response.proxy_id + "' does not match request '" +
                                         request.proxy_id + "'");
    if (response.values.size() != mesh.node_count())
        fail(ErrorKind::count_mismatch, "response has " + std::to_string(response.values.size()) +
                                            " values, request has " + std::to_string(mesh.node_count()) + " nodes");
    if (response.dims != mesh.dims())
        fail(ErrorKind::format, "response has " + std::to_string(response.dims) + " index columns, request has " +
                                    std::to_string(mesh.dims()) + " dimensions");
    for (std::size_t k = 0; k < mesh.node_count(); ++k) {
        const auto idx = mesh.multi_index(k);
        for (std::size_t i = 0; i < mesh.dims(); ++i)
            if (response.indices[k * mesh.dims() + i] != idx[i])
                fail(ErrorKind::format, "response row " + std::to_string(k + 1) + " is out of request order");
        if (!std::isfinite(response.values[k]))
            fail(ErrorKind::non_finite, "response row " + std::to_string(k + 1) + " holds non-finite value " +
                                            to_shortest(response.values[k]));
    }
    return TensorProxy(mesh, response.values, EvalPolicy::strict, BuildInfo{std::nullopt, mesh.node_count()});
}

// ---------------------------------------------------------------------------
// Compression
// ---------------------------------------------------------------------------

Interpolant1D compress(std::span<const Interpolant1D> proxies) {
    if (proxies.empty()) fail(ErrorKind::invalid_argument, "nothing to compress");
    const auto& first = proxies.front();
    std::vector<double> sum(first.coeffs().begin(), first.coeffs().end());
    for (std::size_t t = 1; t < proxies.size(); ++t) {
        const auto& p = proxies[t];
        if (!(p.domain() == first.domain()))
            fail(ErrorKind::incompatible, "trade " + std::to_string(t) + " has a different domain");
        if (p.degree() != first.degree())
            fail(ErrorKind::incompatible, "trade " + std::to_string(t) + " has degree " +
                                              std::to_string(p.degree()) + ", expected " +
                                              std::to_string(first.degree()));
        const auto c = p.coeffs();
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += c[k];
    }
    return Interpolant1D(first.domain(), std::move(sum), first.policy());
}

TensorProxy compress_tensor(std::span<const TensorProxy> proxies) {
    if (proxies.empty()) fail(ErrorKind::invalid_argument, "nothing to compress");
    const auto& first = proxies.front();
    std::vector<double> sum(first.values().begin(), first.values().end());
    for (std::size_t t = 1; t < proxies.size(); ++t) {
        if (!(proxies[t].mesh() == first.mesh()))
            fail(ErrorKind::incompatible, "trade " + std::to_string(t) + " lives on a different mesh");
        const auto v = proxies[t].values();
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
    }
    return TensorProxy(first.mesh(), std::move(sum), first.policy());
}

// ---------------------------------------------------------------------------
// Archives
// ---------------------------------------------------------------------------

std::string build_timestamp() {
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(parse_unsigned(epoch, "SOURCE_DATE_EPOCH"));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool proxy_converged(const Proxy& proxy) {
    if (const auto* p = std::get_if<Interpolant1D>(&proxy)) return ex_ante_error(*p).converged;
    return tensor_converged(std::get<TensorProxy>(proxy));
}

double proxy_ex_ante_error(const Proxy& proxy) {
    if (const auto* p = std::get_if<Interpolant1D>(&proxy))
        return ex_ante_error(*p, std::min(default_tail_length, p->degree() + 1)).ex_ante_estimate;
    return tensor_ex_ante_error(std::get<TensorProxy>(proxy));
}

std::size_t proxy_dims(const Proxy& proxy) {
    if (std::holds_alternative<Interpolant1D>(proxy)) return 1;
    return std::get<TensorProxy>(proxy).dims();
}

double evaluate_proxy(const Proxy& proxy, std::span<const double> point) {
    if (const auto* p = std::get_if<Interpolant1D>(&proxy)) {
        if (point.size() != 1) fail(ErrorKind::invalid_argument, "1-D proxy expects one coordinate");
        return (*p)(point[0]);
    }
    return std::get<TensorProxy>(proxy)(point);
}

double differentiate_proxy(const Proxy& proxy, std::size_t dim, std::span<const double> point) {
    if (const auto* p = std::get_if<Interpolant1D>(&proxy)) {
        if (point.size() != 1 || dim != 0)
            fail(ErrorKind::invalid_argument, "1-D proxy expects one coordinate and dimension 0");
        return differentiate(*p)(point[0]);
    }
    return std::get<TensorProxy>(proxy).partial(dim, point);
}

void write_archive(const ProxyArchive& archive, std::ostream& out) {
    check_token(archive.proxy_id, "proxy id");
    const bool is_1d = std::holds_alternative<Interpolant1D>(archive.proxy);
    const std::size_t d = proxy_dims(archive.proxy);

    std::vector<Interval> intervals;
    std::vector<std::size_t> degrees;
    std::span<const double> payload;
    EvalPolicy policy = EvalPolicy::strict;
    BuildInfo info;
    if (is_1d) {
        const auto& p = std::get<Interpolant1D>(archive.proxy);
        intervals.push_back(p.domain());
        degrees.push_back(p.degree());
        payload = p.coeffs();
        policy = p.policy();
        info = p.build_info();
    } else {
        const auto& p = std::get<TensorProxy>(archive.proxy);
        intervals = p.mesh().box().intervals();
        degrees.assign(p.mesh().degrees().begin(), p.mesh().degrees().end());
        payload = p.values();
        policy = p.policy();
        info = p.build_info();
    }

    out << "chebproxy-archive\n";
    out << "format_version " << archive_format_version << '\n';
    out << "proxy_id " << archive.proxy_id << '\n';
    out << "kind " << (is_1d ? "interpolant1d" : "tensor") << '\n';
    out << "dims " << d << '\n';
    for (std::size_t i = 0; i < d; ++i)
        out << "interval " << i + 1 << ' ' << to_shortest(intervals[i].lo()) << ' ' << to_shortest(intervals[i].hi()) << '\n';
    for (std::size_t i = 0; i < d; ++i) out << "degree " << i + 1 << ' ' << degrees[i] << '\n';
    for (std::size_t i = 0; i < archive.labels.size() && i < d; ++i)
        out << "label " << i + 1 << ' ' << archive.labels[i] << '\n';
    out << "policy " << (policy == EvalPolicy::strict ? "strict" : "clamp") << '\n';
    out << "tolerance " << (info.tolerance ? to_shortest(*info.tolerance) : std::string("none")) << '\n';
    out << "converged " << (proxy_converged(archive.proxy) ? "true" : "false") << '\n';
    out << "oracle_calls " << info.oracle_calls << '\n';
    out << "built_at " << (archive.built_at.empty() ? build_timestamp() : archive.built_at) << '\n';
    out << "values " << payload.size() << '\n';
    for (double v : payload) out << to_shortest(v) << '\n';
    out << "end\n";
}

ProxyArchive read_archive(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "chebproxy-archive")
        fail(ErrorKind::format, "not a proxy archive (missing 'chebproxy-archive' header)");

    std::map<std::string, std::string> fields;
    std::map<std::size_t, std::pair<double, double>> intervals;
    std::map<std::size_t, std::size_t> degrees;
    std::map<std::size_t, std::string> labels;
    std::vector<double> payload;
    bool have_values = false;

    while (std::getline(in, line)) {
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto sp = text.find(' ');
        const std::string key(text.substr(0, sp));
        const std::string rest = sp == std::string_view::npos ? std::string() : std::string(trim(text.substr(sp)));
        if (key == "format_version") {
            const auto v = parse_unsigned(rest, "format_version");
            if (v != static_cast<unsigned long long>(archive_format_version))
                fail(ErrorKind::format, "unsupported archive format version " + rest + " (expected " +
                                            std::to_string(archive_format_version) + ")");
            fields[key] = rest;
        } else if (key == "interval" || key == "degree" || key == "label") {
            const auto sp2 = rest.find(' ');
            if (sp2 == std::string::npos) fail(ErrorKind::format, "malformed '" + key + "' line");
            const auto i = parse_unsigned(std::string_view(rest).substr(0, sp2), key);
            if (i < 1) fail(ErrorKind::format, "dimension numbers start at 1");
            const std::string tail(trim(std::string_view(rest).substr(sp2)));
            if (key == "interval") {
                const auto parts = split(tail, ' ');
                if (parts.size() != 2) fail(ErrorKind::format, "interval line needs two bounds");
                intervals[i - 1] = {parse_finite(parts[0], "interval bound"), parse_finite(parts[1], "interval bound")};
            } else if (key == "degree") {
                degrees[i - 1] = parse_unsigned(tail, "degree");
            } else {
                labels[i - 1] = tail;
            }
        } else if (key == "values") {
            if (!fields.count("format_version")) fail(ErrorKind::format, "archive lacks format_version");
            const auto count = parse_unsigned(rest, "value count");
            payload.reserve(count);
            for (unsigned long long k = 0; k < count; ++k) {
                if (!std::getline(in, line)) fail(ErrorKind::format, "archive truncated inside values block");
                payload.push_back(parse_finite(line, "archive value"));
            }
            if (!std::getline(in, line) || trim(line) != "end")
                fail(ErrorKind::format, "archive values block not terminated by 'end'");
            have_values = true;
            break;
        } else {
            fields[key] = rest;
        }
    }
    if (!have_values) fail(ErrorKind::format, "archive truncated: no values block");

    auto field = [&](const std::string& k) -> const std::string& {
        const auto it = fields.find(k);
        if (it == fields.end()) fail(ErrorKind::format, "archive lacks '" + k + "'");
        return it->second;
    };
    const auto dims = parse_unsigned(field("dims"), "dims");
    if (dims == 0 || intervals.size() != dims || degrees.size() != dims)
        fail(ErrorKind::format, "archive must declare an interval and a degree for each of its dimensions");

    EvalPolicy policy = EvalPolicy::strict;
    if (field("policy") == "clamp")
        policy = EvalPolicy::clamp;
    else if (field("policy") != "strict")
        fail(ErrorKind::format, "unknown policy '" + field("policy") + "'");

    BuildInfo info;
    if (field("tolerance") != "none") info.tolerance = parse_finite(field("tolerance"), "tolerance");
    info.oracle_calls = parse_unsigned(field("oracle_calls"), "oracle_calls");

    std::vector<Interval> ivs;
    std::vector<std::size_t> degs;
    for (std::size_t i = 0; i < dims; ++i) {
        ivs.emplace_back(intervals[i].first, intervals[i].second);
        degs.push_back(degrees[i]);
    }

    ProxyArchive archive{field("proxy_id"), Interpolant1D(ivs.front(), {0.0}), {}, field("built_at")};
    for (std::size_t i = 0; i < dims; ++i)
        if (labels.count(i)) archive.labels.push_back(labels[i]);

    const auto& kind = field("kind");
    if (kind == "interpolant1d") {
        if (dims != 1) fail(ErrorKind::format, "interpolant1d archive must be one-dimensional");
        if (payload.size() != degs[0] + 1)
            fail(ErrorKind::count_mismatch, "archive holds " + std::to_string(payload.size()) +
                                                " coefficients for degree " + std::to_string(degs[0]));
        archive.proxy = Interpolant1D(ivs[0], std::move(payload), policy, info);
    } else if (kind == "tensor") {
        TensorMesh mesh(DomainBox(std::move(ivs)), std::move(degs));
        if (payload.size() != mesh.node_count())
            fail(ErrorKind::count_mismatch, "archive holds " + std::to_string(payload.size()) + " values for " +
                                                std::to_string(mesh.node_count()) + " mesh nodes");
        archive.proxy = TensorProxy(std::move(mesh), std::move(payload), policy, info);
    } else {
        fail(ErrorKind::format, "unknown archive kind '" + kind + "'");
    }
    return archive;
}

void save_archive(const ProxyArchive& archive, const std::filesystem::path& path) {
    std::ostringstream out;
    write_archive(archive, out);
    write_file_atomically(path, out.str());
}

ProxyArchive load_archive(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    try {
        return read_archive(in);
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) fail(ErrorKind::io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::io, "cannot move " + tmp.string() + " to " + path.string());
    }
}

}  // namespace chebproxy
