#include "geocensus/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geocensus {

ProfileSpec::ProfileSpec(SurfaceKind kind, ExprPtr h) : kind_(kind), h_(std::move(h)) {
    dh_ = h_->derivative();
    d2h_ = dh_->derivative();
    d3h_ = d2h_->derivative();
    criticals_ = critical_points(*this, kCriticalGridDefault, kCriticalTolDefault);
}

ProfileSpec ProfileSpec::parse(SurfaceKind kind, std::string_view formula) {
    return ProfileSpec(kind, parse_expression(formula));
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void check_value(std::vector<Diagnostic>& out, const std::string& cond, double measured,
                 double target, double tol, const std::string& where) {
    if (!(std::abs(measured - target) <= tol)) {
        Diagnostic d;
        d.condition = cond;
        d.measured = measured;
        d.detail = where + ": measured " + format_double(measured) + ", expected " +
                   format_double(target) + " within " + format_double(tol);
        out.push_back(d);
    }
}

}  // namespace

std::vector<Diagnostic> validate_profile(const ProfileSpec& p, double tol) {
    std::vector<Diagnostic> out;
    const double pi = kPi;

    auto eval_or_diag = [&](const ExprPtr& e, double s, const char* what) -> double {
        try {
            return e->eval_checked(s);
        } catch (const EvalDomainError& err) {
            Diagnostic d;
            d.condition = "evaluable";
            d.measured = s;
            d.detail = std::string(what) + " failed: " + err.what();
            out.push_back(d);
            return std::nan("");
        }
    };

    if (p.kind() == SurfaceKind::SphereCap) {
        double h0 = eval_or_diag(p.h_expr(), 0.0, "h(0)");
        double hpi = eval_or_diag(p.h_expr(), pi, "h(pi)");
        if (std::isfinite(h0)) check_value(out, "h(0) = 0", h0, 0.0, tol, "pole s=0");
        if (std::isfinite(hpi)) check_value(out, "h(pi) = 0", hpi, 0.0, tol, "pole s=pi");

        double dh0 = eval_or_diag(p.dh_expr(), 0.0, "h'(0)");
        double dhpi = eval_or_diag(p.dh_expr(), pi, "h'(pi)");
        if (std::isfinite(dh0)) check_value(out, "h'(0) = 1", dh0, 1.0, tol, "pole s=0");
        if (std::isfinite(dhpi)) check_value(out, "h'(pi) = -1", dhpi, -1.0, tol, "pole s=pi");

        // One-sided difference quotients at step 1e-6 double-check that the
        // formula itself, not only its symbolic derivative, satisfies the
        // boundary slopes. The truncation error of the quotient is
        // ~ |h''| * step / 2, so the comparison tolerance is floored at 1e-5.
        const double step = 1e-6;
        const double dq_tol = std::max(tol, 1e-5);
        if (std::isfinite(h0)) {
            double hq = eval_or_diag(p.h_expr(), step, "h(0+)");
            if (std::isfinite(hq))
                check_value(out, "one-sided slope at 0 = 1", (hq - h0) / step, 1.0, dq_tol,
                            "difference quotient, step 1e-6");
        }
        if (std::isfinite(hpi)) {
            double hq = eval_or_diag(p.h_expr(), pi - step, "h(pi-)");
            if (std::isfinite(hq))
                check_value(out, "one-sided slope at pi = -1", (hpi - hq) / step, -1.0, dq_tol,
                            "difference quotient, step 1e-6");
        }

        // Interior positivity.
        const int n = 4096;
        double worst = std::numeric_limits<double>::infinity();
        double worst_s = 0;
        for (int i = 1; i < n; ++i) {
            double s = pi * i / n;
            double v = p.h(s);
            if (!std::isfinite(v)) {
                Diagnostic d;
                d.condition = "evaluable";
                d.measured = s;
                d.detail = "h non-finite at s = " + format_double(s);
                out.push_back(d);
                return out;
            }
            if (v < worst) {
                worst = v;
                worst_s = s;
            }
        }
        double pos_tol = std::max(tol, 1e-12);
        if (worst <= pos_tol) {
            Diagnostic d;
            d.condition = "h > 0 on (0, pi)";
            d.measured = worst;
            d.detail = "minimum sampled value " + format_double(worst) + " at s = " +
                       format_double(worst_s);
            out.push_back(d);
        }
    } else {
        // Torus: positive everywhere, pi-periodic.
        const int n = 4096;
        double worst = std::numeric_limits<double>::infinity();
        double worst_s = 0;
        double scale = 0;
        for (int i = 0; i <= n; ++i) {
            double s = kPi * i / n;
            double v = p.h(s);
            if (!std::isfinite(v)) {
                Diagnostic d;
                d.condition = "evaluable";
                d.measured = s;
                d.detail = "h non-finite at s = " + format_double(s);
                out.push_back(d);
                return out;
            }
            scale = std::max(scale, std::abs(v));
            if (v < worst) {
                worst = v;
                worst_s = s;
            }
        }
        if (worst <= std::max(tol, 1e-12)) {
            Diagnostic d;
            d.condition = "h > 0";
            d.measured = worst;
            d.detail = "minimum sampled value " + format_double(worst) + " at s = " +
                       format_double(worst_s);
            out.push_back(d);
        }
        double per_tol = std::max(tol, tol * scale);
        double worst_gap = 0, worst_gap_s = 0;
        for (int i = 0; i < 128; ++i) {
            double s = kPi * i / 128.0;
            double gap = std::abs(p.h(s + kPi) - p.h(s));
            if (gap > worst_gap) {
                worst_gap = gap;
                worst_gap_s = s;
            }
        }
        if (worst_gap > per_tol) {
            Diagnostic d;
            d.condition = "h(s + pi) = h(s)";
            d.measured = worst_gap;
            d.detail = "periodicity gap " + format_double(worst_gap) + " at s = " +
                       format_double(worst_gap_s);
            out.push_back(d);
        }
    }
    return out;
}

namespace {

// Bisection refinement of a sign change of h' on [lo, hi].
double refine_root(const ProfileSpec& p, double lo, double hi, double flo, double tol) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = p.dh(mid);
        if ((flo < 0) == (fm < 0) && fm != 0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= tol && std::abs(p.dh(0.5 * (lo + hi))) <= tol) break;
    }
    return 0.5 * (lo + hi);
}

CritKind classify_kind(const ProfileSpec& p, double s0, double tol) {
    double dd = p.d2h(s0);
    if (dd > tol) return CritKind::Min;
    if (dd < -tol) return CritKind::Max;
    return CritKind::Degenerate;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const ProfileSpec& p, int grid_n, double tol) {
    const int n = std::max(grid_n, 16);
    const double lo = 0.0, hi = kPi;
    const double step = (hi - lo) / n;
    const bool torus = p.kind() == SurfaceKind::Torus;

    std::vector<double> d(n + 1);
    for (int i = 0; i <= n; ++i) d[i] = p.dh(lo + step * i);

    std::vector<CriticalPoint> points;
    auto add_isolated = [&](double s0) {
        CriticalPoint c;
        c.s0 = s0;
        c.kind = classify_kind(p, s0, tol);
        c.h_value = p.h(s0);
        c.span_lo = c.span_hi = s0;
        points.push_back(c);
    };

    // Nodes where h' is (numerically) zero; runs of two or more become
    // Degenerate spans, single ones are roots already at tolerance.
    std::vector<bool> zero(n + 1);
    for (int i = 0; i <= n; ++i) zero[i] = std::isfinite(d[i]) && std::abs(d[i]) <= tol;

    int i = 0;
    while (i <= n) {
        if (!zero[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 <= n && zero[j + 1]) ++j;
        if (j > i) {
            CriticalPoint c;
            c.span_lo = lo + step * i;
            c.span_hi = lo + step * j;
            c.s0 = 0.5 * (c.span_lo + c.span_hi);
            c.kind = CritKind::Degenerate;
            c.h_value = p.h(c.s0);
            points.push_back(c);
        } else {
            double s0 = lo + step * i;
            bool endpoint = (i == 0 || i == n);
            if (!endpoint || torus) add_isolated(torus && i == n ? 0.0 : s0);
        }
        i = j + 1;
    }

    // Strict sign changes between nonzero nodes.
    for (int k = 0; k < n; ++k) {
        if (zero[k] || zero[k + 1]) continue;
        if (!std::isfinite(d[k]) || !std::isfinite(d[k + 1])) continue;
        if ((d[k] < 0) != (d[k + 1] < 0)) {
            double s0 = refine_root(p, lo + step * k, lo + step * (k + 1), d[k], tol);
            add_isolated(s0);
        }
    }

    if (torus) {
        for (auto& c : points) {
            if (!c.is_span() && c.s0 >= kPi) c.s0 -= kPi;
        }
    }

    std::sort(points.begin(), points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.s0 < b.s0; });

    // Merge duplicates (e.g. a root found both as a zero node and from an
    // adjacent cell, or torus points identified at 0 and pi).
    std::vector<CriticalPoint> merged;
    const double merge_tol = std::max(10 * tol, 4 * step * 1e-6) + 1e-12;
    for (const auto& c : points) {
        if (!merged.empty() && !c.is_span() && !merged.back().is_span() &&
            std::abs(c.s0 - merged.back().s0) <= merge_tol) {
            continue;
        }
        merged.push_back(c);
    }
    return merged;
}

}  // namespace geocensus
