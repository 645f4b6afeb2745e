#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chebproxy {

/// What happens when a proxy is asked for a value outside its domain.
enum class EvalPolicy {
    strict,  ///< DomainError
    clamp,   ///< snap to the nearest boundary
};

/// Closed interval [lo, hi] with the affine map onto the canonical [-1, 1].
class Interval {
public:
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }

    bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

    /// Exact at the endpoints: to_canonical(lo) == -1, to_canonical(hi) == 1.
    double to_canonical(double x) const noexcept;
    double from_canonical(double t) const noexcept;

    /// Canonical coordinate after applying `policy`. Throws a domain error
    /// for out-of-range x under the strict policy.
    double canonical_checked(double x, EvalPolicy policy) const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

/// Product of intervals, one per dimension.
class DomainBox {
public:
    explicit DomainBox(std::vector<Interval> intervals);

    std::size_t dims() const noexcept { return intervals_.size(); }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }

    bool contains(std::span<const double> point) const noexcept;

    friend bool operator==(const DomainBox&, const DomainBox&) = default;

private:
    std::vector<Interval> intervals_;
};

}  // namespace chebproxy
