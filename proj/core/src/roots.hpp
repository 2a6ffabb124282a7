#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "preempt/errors.hpp"

namespace preempt::detail {

/// Root of a continuous single-crossing function on [lo, hi] by bisection,
/// to an absolute bracket width of `abs_tol`. Endpoint zeros are returned
/// as-is; a bracket without a sign change is a NumericalFailure.
template <class F>
double bracketed_root(F f, double lo, double hi, double abs_tol, const std::string& what) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || (f_lo > 0.0) == (f_hi > 0.0)) {
        throw NumericalFailure(what + ": root is not bracketed");
    }
    std::uintmax_t max_iter = 256;
    const auto width_ok = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
    const auto [a, b] = boost::math::tools::bisect(f, lo, hi, width_ok, max_iter);
    return 0.5 * (a + b);
}

}  // namespace preempt::detail
