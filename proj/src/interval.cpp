#include "chebproxy/interval.hpp"

#include "chebproxy/error.hpp"
#include "chebproxy/text.hpp"

#include <algorithm>
#include <cmath>

namespace chebproxy {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        fail(ErrorKind::invalid_argument,
             "interval requires finite lo < hi, got [" + to_shortest(lo) + ", " + to_shortest(hi) + "]");
}

double Interval::to_canonical(double x) const noexcept {
    // Written so both endpoints map exactly.
    const double t = ((x - lo_) - (hi_ - x)) / (hi_ - lo_);
    return std::clamp(t, -1.0, 1.0);
}

double Interval::from_canonical(double t) const noexcept {
    return 0.5 * (lo_ * (1.0 - t) + hi_ * (1.0 + t));
}

double Interval::canonical_checked(double x, EvalPolicy policy) const {
    if (std::isnan(x)) fail(ErrorKind::domain, "evaluation point is NaN");
    if (policy == EvalPolicy::clamp) return to_canonical(std::clamp(x, lo_, hi_));
    if (x < lo_)
        fail(ErrorKind::domain, "point " + to_shortest(x) + " below lower bound " + to_shortest(lo_));
    if (x > hi_)
        fail(ErrorKind::domain, "point " + to_shortest(x) + " above upper bound " + to_shortest(hi_));
    return to_canonical(x);
}

DomainBox::DomainBox(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) fail(ErrorKind::invalid_argument, "domain box needs at least one dimension");
}

bool DomainBox::contains(std::span<const double> point) const noexcept {
    if (point.size() != intervals_.size()) return false;
    for (std::size_t i = 0; i < point.size(); ++i)
        if (!intervals_[i].contains(point[i])) return false;
    return true;
}

}  // namespace chebproxy
