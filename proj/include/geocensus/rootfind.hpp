#pragma once

#include <cmath>
#include <optional>
#include <utility>

namespace geocensus {

// Bisection on a bracketed sign change. Requires f(lo) and f(hi) of opposite
// sign (zero at either end returns that end). Stops when the bracket width
// falls below xtol or the midpoint stops moving in double precision.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    if (flo == 0) return lo;
    double fhi = f(hi);
    if (fhi == 0) return hi;
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = f(mid);
        if (fm == 0) return mid;
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// A few Newton steps clamped to [lo, hi]; used to polish bisection results to
// machine precision when the derivative is available.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double lo, double hi, int iters = 4) {
    for (int it = 0; it < iters; ++it) {
        double fx = f(x);
        double dfx = df(x);
        if (dfx == 0 || !std::isfinite(dfx)) break;
        double next = x - fx / dfx;
        if (!(next >= lo && next <= hi)) break;
        if (next == x) break;
        x = next;
    }
    return x;
}

// First sign-change cell of f on an n-cell grid over [lo, hi], if any.
template <class F>
std::optional<std::pair<double, double>> scan_first_bracket(F&& f, double lo, double hi, int n) {
    double prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double cur = f(x);
        if (std::isfinite(prev) && std::isfinite(cur) && (prev < 0) != (cur < 0))
            return std::make_pair(lo + (hi - lo) * (i - 1) / n, x);
        prev = cur;
    }
    return std::nullopt;
}

}  // namespace geocensus
