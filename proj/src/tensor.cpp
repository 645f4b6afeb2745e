#include "chebproxy/tensor.hpp"

#include "chebproxy/error.hpp"
#include "chebproxy/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace chebproxy {

namespace {

constexpr std::size_t max_nodes = std::size_t{1} << 32;

std::string describe_node(const TensorMesh& mesh, std::size_t flat) {
    const auto idx = mesh.multi_index(flat);
    const auto x = mesh.node(flat);
    std::string s = "node (";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    s += ") at (";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + to_shortest(x[i]);
    return s + ")";
}

void check_point_arity(const TensorMesh& mesh, std::span<const double> point) {
    if (point.size() != mesh.dims())
        fail(ErrorKind::invalid_argument, "point has " + std::to_string(point.size()) +
                                              " coordinates, proxy has " + std::to_string(mesh.dims()) +
                                              " dimensions");
}

double canonical_in_dim(const Interval& iv, double x, EvalPolicy policy, std::size_t dim) {
    try {
        return iv.canonical_checked(x, policy);
    } catch (const Error& e) {
        fail(e.kind(), "dimension " + std::to_string(dim) + ": " + e.what());
    }
}

double eval_derivative(std::span<const double> coeffs, double t, double chain) {
    return chain * clenshaw(derivative_coefficients(coeffs), t);
}

}  // namespace

TensorMesh::TensorMesh(DomainBox box, std::vector<std::size_t> degrees)
    : box_(std::move(box)), degrees_(std::move(degrees)) {
    if (degrees_.size() != box_.dims())
        fail(ErrorKind::invalid_argument, "got " + std::to_string(degrees_.size()) + " degrees for a " +
                                              std::to_string(box_.dims()) + "-dimensional box");
    points_.reserve(degrees_.size());
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
        auto pts = chebyshev_points(degrees_[i]);
        for (auto& p : pts) p = box_[i].from_canonical(p);
        points_.push_back(std::move(pts));
        if (count_ > max_nodes / (degrees_[i] + 1))
            fail(ErrorKind::invalid_argument, "tensor mesh too large");
        count_ *= degrees_[i] + 1;
    }
}

std::vector<std::size_t> TensorMesh::multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dims());
    for (std::size_t i = 0; i < dims(); ++i) {
        idx[i] = flat % (degrees_[i] + 1);
        flat /= degrees_[i] + 1;
    }
    return idx;
}

std::size_t TensorMesh::flat_index(std::span<const std::size_t> multi) const {
    std::size_t flat = 0;
    for (std::size_t i = dims(); i-- > 0;) flat = flat * (degrees_[i] + 1) + multi[i];
    return flat;
}

std::vector<double> TensorMesh::node(std::size_t flat) const {
    std::vector<double> x(dims());
    for (std::size_t i = 0; i < dims(); ++i) {
        x[i] = points_[i][flat % (degrees_[i] + 1)];
        flat /= degrees_[i] + 1;
    }
    return x;
}

TensorProxy::TensorProxy(TensorMesh mesh, std::vector<double> values, EvalPolicy policy,
                         BuildInfo info)
    : mesh_(std::move(mesh)), values_(std::move(values)), policy_(policy), info_(info) {
    if (values_.size() != mesh_.node_count())
        fail(ErrorKind::count_mismatch, "tensor proxy expects " + std::to_string(mesh_.node_count()) +
                                            " values, got " + std::to_string(values_.size()));
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (!std::isfinite(values_[k]))
            fail(ErrorKind::non_finite, "value " + to_shortest(values_[k]) + " at " + describe_node(mesh_, k));

    plans_.reserve(mesh_.dims());
    for (auto n : mesh_.degrees()) plans_.emplace_back(n);

    const std::size_t len = mesh_.degrees()[0] + 1;
    line_coeffs_.resize(values_.size());
    for (std::size_t off = 0; off < values_.size(); off += len)
        plans_[0].apply(std::span(values_).subspan(off, len), std::span(line_coeffs_).subspan(off, len));
}

TensorProxy TensorProxy::with_policy(EvalPolicy policy) const {
    return TensorProxy(mesh_, values_, policy, info_);
}

double TensorProxy::operator()(std::span<const double> point) const { return reduce(point, -1); }

double TensorProxy::partial(std::size_t dim, std::span<const double> point) const {
    if (dim >= dims())
        fail(ErrorKind::invalid_argument, "derivative dimension " + std::to_string(dim) +
                                              " out of range for " + std::to_string(dims()) + "-D proxy");
    return reduce(point, static_cast<std::ptrdiff_t>(dim));
}

double TensorProxy::reduce(std::span<const double> point, std::ptrdiff_t diff_dim) const {
    check_point_arity(mesh_, point);
    const auto& box = mesh_.box();
    const std::size_t d = dims();

    const double t0 = canonical_in_dim(box[0], point[0], policy_, 0);
    const std::size_t len0 = mesh_.degrees()[0] + 1;
    if (d == 1) {
        return diff_dim == 0 ? eval_derivative(line_coeffs_, t0, 2.0 / box[0].width())
                             : clenshaw(line_coeffs_, t0);
    }

    std::vector<double> t(d);
    t[0] = t0;
    for (std::size_t i = 1; i < d; ++i) t[i] = canonical_in_dim(box[i], point[i], policy_, i);

    // Dimension 0: one Clenshaw per mesh line using the stored coefficients.
    std::vector<double> cur(values_.size() / len0);
    for (std::size_t l = 0; l < cur.size(); ++l) {
        const auto c = std::span(line_coeffs_).subspan(l * len0, len0);
        cur[l] = diff_dim == 0 ? eval_derivative(c, t0, 2.0 / box[0].width()) : clenshaw(c, t0);
    }

    // Remaining dimensions: the reduced values of the previous stage are the
    // anchor values of fresh 1-D interpolants along dimension i.
    std::vector<double> next;
    std::vector<double> coeffs;
    for (std::size_t i = 1; i < d; ++i) {
        const std::size_t len = mesh_.degrees()[i] + 1;
        next.resize(cur.size() / len);
        coeffs.resize(len);
        for (std::size_t l = 0; l < next.size(); ++l) {
            plans_[i].apply(std::span(cur).subspan(l * len, len), coeffs);
            next[l] = diff_dim == static_cast<std::ptrdiff_t>(i)
                          ? eval_derivative(coeffs, t[i], 2.0 / box[i].width())
                          : clenshaw(coeffs, t[i]);
        }
        std::swap(cur, next);
    }
    return cur[0];
}

TensorProxy build_tensor(const VectorFunction& f, const DomainBox& box, std::vector<std::size_t> degrees,
                         Execution exec) {
    TensorMesh mesh(box, std::move(degrees));
    std::vector<double> values(mesh.node_count());
    parallel_for(values.size(), exec, [&](std::size_t k) {
        const auto x = mesh.node(k);
        values[k] = f(x);
    });
    for (std::size_t k = 0; k < values.size(); ++k)
        if (!std::isfinite(values[k]))
            fail(ErrorKind::non_finite, "oracle returned " + to_shortest(values[k]) + " at " + describe_node(mesh, k));
    const std::size_t calls = values.size();
    return TensorProxy(std::move(mesh), std::move(values), EvalPolicy::strict, BuildInfo{std::nullopt, calls});
}

double eval_tensor(const TensorProxy& p, std::span<const double> point) { return p(point); }

double partial_derivative(const TensorProxy& p, std::size_t dim, std::span<const double> point) {
    return p.partial(dim, point);
}

std::vector<double> tensor_coeffs_direct(const TensorProxy& p) {
    const auto& mesh = p.mesh();
    const std::size_t d = mesh.dims();
    if (d > 3)
        fail(ErrorKind::invalid_argument,
             "direct tensor coefficients are an oracle-only operation limited to d <= 3 (got d = " +
                 std::to_string(d) + ")");

    // Per-dimension factors: weight(j)/n * halving(k) * cos(j*pi*k/n).
    std::vector<std::vector<double>> factor(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t n = mesh.degrees()[i];
        factor[i].assign((n + 1) * (n + 1), 1.0);
        if (n == 0) continue;
        for (std::size_t j = 0; j <= n; ++j) {
            const double weight = (j > 0 && j < n) ? 2.0 : 1.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double halve = (k == 0 || k == n) ? 0.5 : 1.0;
                factor[i][j * (n + 1) + k] =
                    weight / static_cast<double>(n) * halve *
                    std::cos(std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n));
            }
        }
    }

    const auto values = p.values();
    const std::size_t count = mesh.node_count();
    std::vector<double> coeffs(count, 0.0);
    for (std::size_t jf = 0; jf < count; ++jf) {
        const auto j = mesh.multi_index(jf);
        double sum = 0.0;
        for (std::size_t kf = 0; kf < count; ++kf) {
            double term = values[kf];
            std::size_t rest = kf;
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t len = mesh.degrees()[i] + 1;
                term *= factor[i][j[i] * len + rest % len];
                rest /= len;
            }
            sum += term;
        }
        coeffs[jf] = sum;
    }
    return coeffs;
}

double eval_tensor_direct(const TensorMesh& mesh, std::span<const double> coeffs,
                          std::span<const double> point) {
    check_point_arity(mesh, point);
    if (coeffs.size() != mesh.node_count())
        fail(ErrorKind::count_mismatch, "coefficient array does not match mesh");
    const std::size_t d = mesh.dims();
    std::vector<std::vector<double>> T(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double t = canonical_in_dim(mesh.box()[i], point[i], EvalPolicy::strict, i);
        for (std::size_t k = 0; k <= mesh.degrees()[i]; ++k) T[i].push_back(cheb_T(k, t));
    }
    double sum = 0.0;
    for (std::size_t kf = 0; kf < coeffs.size(); ++kf) {
        double term = coeffs[kf];
        std::size_t rest = kf;
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t len = mesh.degrees()[i] + 1;
            term *= T[i][rest % len];
            rest /= len;
        }
        sum += term;
    }
    return sum;
}

TensorMesh refine_dimension(const TensorMesh& mesh, std::size_t dim, std::size_t new_degree) {
    if (dim >= mesh.dims())
        fail(ErrorKind::invalid_argument, "refine dimension " + std::to_string(dim) + " out of range");
    if (new_degree < mesh.degrees()[dim])
        fail(ErrorKind::invalid_argument, "cannot shrink dimension " + std::to_string(dim) + " from degree " +
                                              std::to_string(mesh.degrees()[dim]) + " to " +
                                              std::to_string(new_degree));
    std::vector<std::size_t> degrees(mesh.degrees().begin(), mesh.degrees().end());
    degrees[dim] = new_degree;
    return TensorMesh(mesh.box(), std::move(degrees));
}

TensorProxy refine_tensor(const VectorFunction& f, const TensorProxy& p, std::size_t dim,
                          std::size_t new_degree) {
    TensorMesh mesh = refine_dimension(p.mesh(), dim, new_degree);
    const std::size_t old_degree = p.mesh().degrees()[dim];
    const bool nested = old_degree == 0 || new_degree % old_degree == 0;
    const std::size_t ratio = old_degree == 0 ? 0 : new_degree / old_degree;

    std::vector<double> values(mesh.node_count());
    std::size_t calls = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        auto idx = mesh.multi_index(k);
        const bool reuse = nested && (old_degree == 0 ? idx[dim] == 0 : idx[dim] % ratio == 0);
        if (reuse) {
            idx[dim] = old_degree == 0 ? 0 : idx[dim] / ratio;
            values[k] = p.values()[p.mesh().flat_index(idx)];
        } else {
            values[k] = f(mesh.node(k));
            ++calls;
            if (!std::isfinite(values[k]))
                fail(ErrorKind::non_finite, "oracle returned " + to_shortest(values[k]) + " at " + describe_node(mesh, k));
        }
    }
    BuildInfo info = p.build_info();
    info.oracle_calls += calls;
    return TensorProxy(std::move(mesh), std::move(values), p.policy(), info);
}

std::vector<double> dimension_tails(const TensorProxy& p, std::size_t tail_len) {
    if (tail_len < 1) fail(ErrorKind::invalid_argument, "tail length must be at least 1");
    const auto& mesh = p.mesh();
    const auto values = p.values();
    std::vector<double> tails(mesh.dims(), 0.0);
    std::size_t stride = 1;
    for (std::size_t i = 0; i < mesh.dims(); ++i) {
        const std::size_t len = mesh.degrees()[i] + 1;
        const std::size_t take = std::min(tail_len, len);
        const DctPlan plan(len - 1);
        std::vector<double> line(len);
        std::vector<double> coeffs(len);
        for (std::size_t k = 0; k < values.size(); ++k) {
            if ((k / stride) % len != 0) continue;  // line start: index i is zero
            for (std::size_t j = 0; j < len; ++j) line[j] = values[k + j * stride];
            plan.apply(line, coeffs);
            for (std::size_t j = len - take; j < len; ++j) tails[i] = std::max(tails[i], std::abs(coeffs[j]));
        }
        stride *= len;
    }
    return tails;
}

double tensor_ex_ante_error(const TensorProxy& p, std::size_t tail_len) {
    double sum = 0.0;
    for (double t : dimension_tails(p, tail_len)) sum += t;
    return sum;
}

bool tensor_converged(const TensorProxy& p) {
    const auto& tol = p.build_info().tolerance;
    if (!tol) return false;
    const auto tails = dimension_tails(p);
    return std::all_of(tails.begin(), tails.end(), [&](double t) { return t < *tol; });
}

TensorAdaptiveResult build_tensor_adaptive(const VectorFunction& f, const DomainBox& box, double tol,
                                           std::size_t max_degree) {
    if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "adaptive tolerance must be positive");
    if (max_degree < 4) fail(ErrorKind::invalid_argument, "adaptive max_degree must be at least 4");
    TensorProxy proxy = build_tensor(f, box, std::vector<std::size_t>(box.dims(), 4));
    while (true) {
        const auto tails = dimension_tails(proxy);
        bool done = true;
        bool blocked = false;
        for (std::size_t i = 0; i < tails.size(); ++i) {
            if (tails[i] < tol) continue;
            done = false;
            if (2 * proxy.mesh().degrees()[i] > max_degree) blocked = true;
        }
        if (done || blocked) {
            BuildInfo info = proxy.build_info();
            info.tolerance = tol;
            return {TensorProxy(proxy.mesh(), std::vector<double>(proxy.values().begin(), proxy.values().end()),
                                proxy.policy(), info),
                    done};
        }
        for (std::size_t i = 0; i < tails.size(); ++i)
            if (tails[i] >= tol) proxy = refine_tensor(f, proxy, i, 2 * proxy.mesh().degrees()[i]);
    }
}

}  // namespace chebproxy
