#pragma once

#include "chebproxy/cheb_core.hpp"
#include "chebproxy/interval.hpp"
#include "chebproxy/parallel.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace chebproxy {

using VectorFunction = std::function<double(std::span<const double>)>;

/// Full tensor Chebyshev mesh. Nodes are enumerated row-major with
/// dimension 0 varying fastest; along each dimension the points follow
/// descending canonical order (x_0 = hi, x_n = lo).
class TensorMesh {
public:
    TensorMesh(DomainBox box, std::vector<std::size_t> degrees);

    const DomainBox& box() const noexcept { return box_; }
    std::size_t dims() const noexcept { return degrees_.size(); }
    std::span<const std::size_t> degrees() const noexcept { return degrees_; }
    /// Points of dimension i in domain units.
    std::span<const double> points(std::size_t i) const { return points_[i]; }

    std::size_t node_count() const noexcept { return count_; }
    std::vector<std::size_t> multi_index(std::size_t flat) const;
    std::size_t flat_index(std::span<const std::size_t> multi) const;
    std::vector<double> node(std::size_t flat) const;

    friend bool operator==(const TensorMesh& a, const TensorMesh& b) {
        return a.box_ == b.box_ && a.degrees_ == b.degrees_;
    }

private:
    DomainBox box_;
    std::vector<std::size_t> degrees_;
    std::vector<std::vector<double>> points_;
    std::size_t count_ = 1;
};

/// Values on a TensorMesh, evaluated by nested one-dimensional Chebyshev
/// interpolation. Dimension 0 lines carry precomputed coefficients; each
/// further dimension is reduced by building a fresh 1-D interpolant from the
/// previous stage's values and evaluating it. Immutable after construction.
class TensorProxy {
public:
    TensorProxy(TensorMesh mesh, std::vector<double> values, EvalPolicy policy = EvalPolicy::strict,
                BuildInfo info = {});

    const TensorMesh& mesh() const noexcept { return mesh_; }
    std::size_t dims() const noexcept { return mesh_.dims(); }
    std::span<const double> values() const noexcept { return values_; }
    EvalPolicy policy() const noexcept { return policy_; }
    const BuildInfo& build_info() const noexcept { return info_; }

    TensorProxy with_policy(EvalPolicy policy) const;

    double operator()(std::span<const double> point) const;
    double partial(std::size_t dim, std::span<const double> point) const;

private:
    double reduce(std::span<const double> point, std::ptrdiff_t diff_dim) const;

    TensorMesh mesh_;
    std::vector<double> values_;
    std::vector<double> line_coeffs_;  // dimension-0 coefficients per line, same layout as values_
    std::vector<DctPlan> plans_;
    EvalPolicy policy_;
    BuildInfo info_;
};

/// Calls f exactly node_count() times, once per mesh node.
TensorProxy build_tensor(const VectorFunction& f, const DomainBox& box,
                         std::vector<std::size_t> degrees, Execution exec = Execution::sequential);

double eval_tensor(const TensorProxy& p, std::span<const double> point);

/// Derivative along `dim`; no oracle calls.
double partial_derivative(const TensorProxy& p, std::size_t dim, std::span<const double> point);

/// Dense tensor coefficients from the direct cosine-sum formula, same
/// row-major layout as the values. Cross-check oracle, limited to d <= 3.
std::vector<double> tensor_coeffs_direct(const TensorProxy& p);

/// sum_k c_k prod_i T_{k_i}(t_i) over coefficients from tensor_coeffs_direct.
double eval_tensor_direct(const TensorMesh& mesh, std::span<const double> coeffs,
                          std::span<const double> point);

/// Same mesh with dimension `dim` raised to `new_degree`.
TensorMesh refine_dimension(const TensorMesh& mesh, std::size_t dim, std::size_t new_degree);

/// Rebuild with dimension `dim` refined. When new_degree is a multiple of
/// the old degree the old nodes are nested and their values are reused; f
/// is only called at new nodes.
TensorProxy refine_tensor(const VectorFunction& f, const TensorProxy& p, std::size_t dim,
                          std::size_t new_degree);

/// Per-dimension ex-ante estimate: max over all mesh lines along dimension i
/// of the trailing `tail_len` |coefficients| of that line's interpolant.
std::vector<double> dimension_tails(const TensorProxy& p, std::size_t tail_len = default_tail_length);

/// Sum of dimension_tails; the tensor analogue of ErrorReport::ex_ante_estimate.
double tensor_ex_ante_error(const TensorProxy& p, std::size_t tail_len = default_tail_length);

/// True when an adaptive build recorded a tolerance and every dimension tail is below it.
bool tensor_converged(const TensorProxy& p);

struct TensorAdaptiveResult {
    TensorProxy proxy;
    bool converged = false;
};

/// Starts at degree 4 in every dimension and doubles each dimension whose
/// tail is at or above tol, reusing nested values, until all tails are below
/// tol or the next doubling would exceed max_degree.
TensorAdaptiveResult build_tensor_adaptive(const VectorFunction& f, const DomainBox& box,
                                           double tol, std::size_t max_degree);

}  // namespace chebproxy
