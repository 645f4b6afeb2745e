#pragma once

#include "chebproxy/cheb_core.hpp"
#include "chebproxy/tensor.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chebproxy {

/// Declared in every request so the pricing side cannot misread node order.
inline constexpr std::string_view node_ordering = "row-major, dim1 fastest, descending canonical points";

// ---------------------------------------------------------------------------
// Batch cloning: request CSV -> pricing engine -> response CSV -> proxy
// ---------------------------------------------------------------------------
//
// Request CSV:
//   # proxy_id <id>
//   # dims <d>
//   # ordering row-major, dim1 fastest, descending canonical points
//   # label_i <name>          (i = 1..d)
//   # interval_i <lo> <hi>
//   # degree_i <n_i>
//   index_1,...,index_d,coord_1,...,coord_d
//   <one row per node>
//
// Response CSV:
//   # proxy_id <id>
//   index_1,...,index_d,value
//   <one row per node, same order as the request>
//
// Reals are written as the shortest decimal that round-trips the double.

struct AnchorRequest {
    std::string proxy_id;
    TensorMesh mesh;
    std::vector<std::string> labels;
};

struct AnchorResponse {
    std::string proxy_id;
    std::size_t dims = 0;
    std::vector<std::size_t> indices;  // dims entries per row
    std::vector<double> values;
};

/// Default labels are x1..xd.
AnchorRequest make_request(std::string proxy_id, const DomainBox& box, std::vector<std::size_t> degrees,
                           std::vector<std::string> labels = {});

void write_request(const AnchorRequest& request, std::ostream& out);
AnchorRequest read_request(std::istream& in);

/// Writes the request CSV atomically (temp file + rename).
void emit_request(const AnchorRequest& request, const std::filesystem::path& path);
AnchorRequest load_request(const std::filesystem::path& path);

/// The pricing-engine side: one oracle call per node in request order.
AnchorResponse answer_request(const AnchorRequest& request, const VectorFunction& oracle);

void write_response(const AnchorResponse& response, std::ostream& out);
AnchorResponse read_response(std::istream& in);
void save_response(const AnchorResponse& response, const std::filesystem::path& path);
AnchorResponse load_response(const std::filesystem::path& path);

/// Validates id, row count, node ordering and finiteness (each a distinct
/// ErrorKind) and builds the proxy through the same path as build_tensor.
TensorProxy ingest_response(const AnchorRequest& request, const AnchorResponse& response);

// ---------------------------------------------------------------------------
// Portfolio compression
// ---------------------------------------------------------------------------

/// Coefficient-wise sum. Domains and degrees must match exactly.
Interpolant1D compress(std::span<const Interpolant1D> proxies);

/// Value-wise sum over proxies sharing one mesh.
TensorProxy compress_tensor(std::span<const TensorProxy> proxies);

// ---------------------------------------------------------------------------
// Proxy archives
// ---------------------------------------------------------------------------
//
//   chebproxy-archive
//   format_version 1
//   proxy_id <token>
//   kind interpolant1d | tensor
//   dims <d>
//   interval <i> <lo> <hi>       one line per dimension, i = 1..d
//   degree <i> <n_i>
//   label <i> <name>
//   policy strict | clamp
//   tolerance none | <real>
//   converged true | false
//   oracle_calls <count>
//   built_at <ISO-8601 UTC>
//   values <count>
//   <one real per line>          tensor: node values in mesh order;
//                                interpolant1d: coefficients c_0..c_n
//   end

inline constexpr int archive_format_version = 1;

using Proxy = std::variant<Interpolant1D, TensorProxy>;

struct ProxyArchive {
    std::string proxy_id;
    Proxy proxy;
    std::vector<std::string> labels;
    std::string built_at;
};

/// ISO-8601 UTC; honors SOURCE_DATE_EPOCH for reproducible output.
std::string build_timestamp();

bool proxy_converged(const Proxy& proxy);
double proxy_ex_ante_error(const Proxy& proxy);
std::size_t proxy_dims(const Proxy& proxy);
double evaluate_proxy(const Proxy& proxy, std::span<const double> point);
double differentiate_proxy(const Proxy& proxy, std::size_t dim, std::span<const double> point);

void write_archive(const ProxyArchive& archive, std::ostream& out);
ProxyArchive read_archive(std::istream& in);
void save_archive(const ProxyArchive& archive, const std::filesystem::path& path);
ProxyArchive load_archive(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace chebproxy
