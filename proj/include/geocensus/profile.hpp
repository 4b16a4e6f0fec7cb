#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "geocensus/expression.hpp"

namespace geocensus {

inline constexpr double kPi = std::numbers::pi;

enum class SurfaceKind { SphereCap, Torus };

enum class CritKind { Min, Max, Degenerate };

// A point (or maximal interval) where h' vanishes. Isolated roots have
// span_lo == span_hi == s0; a Degenerate span covers a whole stretch of the
// grid on which h' vanishes identically (a continuum of critical points).
struct CriticalPoint {
    double s0 = 0;
    CritKind kind = CritKind::Degenerate;
    double h_value = 0;
    double span_lo = 0;
    double span_hi = 0;

    bool is_span() const { return span_hi > span_lo; }
};

// The warp function h with its surface type. SphereCap profiles live on
// [0, pi] with h vanishing at the poles; Torus profiles are pi-periodic and
// positive, evaluated on all of R through their closed-form expression.
//
// Immutable after construction; all evaluation methods are const and safe to
// call concurrently.
class ProfileSpec {
public:
    ProfileSpec(SurfaceKind kind, ExprPtr h);

    static ProfileSpec parse(SurfaceKind kind, std::string_view formula);

    SurfaceKind kind() const { return kind_; }
    const ExprPtr& h_expr() const { return h_; }
    const ExprPtr& dh_expr() const { return dh_; }

    double h(double s) const noexcept { return h_->eval(s); }
    double dh(double s) const noexcept { return dh_->eval(s); }
    double d2h(double s) const noexcept { return d2h_->eval(s); }
    double d3h(double s) const noexcept { return d3h_->eval(s); }

    // Domain of the s-coordinate: [0, pi] for SphereCap; one fundamental
    // period [0, pi] for Torus.
    double domain_start() const { return 0.0; }
    double domain_end() const { return kPi; }
    double period() const { return kPi; }
    bool periodic() const { return kind_ == SurfaceKind::Torus; }

    std::string formula() const { return h_->str(); }

    // Critical points computed once at construction with the default grid
    // (grid_n = 4096, tol = 1e-12); shared by the trip and census machinery.
    const std::vector<CriticalPoint>& cached_critical_points() const { return criticals_; }

private:
    SurfaceKind kind_;
    ExprPtr h_, dh_, d2h_, d3h_;
    std::vector<CriticalPoint> criticals_;
};

struct Diagnostic {
    std::string condition;  // the invariant that failed
    double measured = 0;    // the offending measured value
    std::string detail;
};

// Empty result iff the ProfileSpec invariants hold within tol:
//   SphereCap: h(0) = h(pi) = 0, h'(0) = 1, h'(pi) = -1 (symbolic value and
//              one-sided difference quotient), h > 0 on the interior.
//   Torus:     h > 0 everywhere, h(s + pi) = h(s) at sampled points.
// Expression domain errors surface as diagnostics rather than exceptions.
std::vector<Diagnostic> validate_profile(const ProfileSpec& p, double tol);

// Locates all sign changes of h' on a grid of grid_n cells, refined by
// bisection until the bracket width and |h'| fall below tol. Grid cells on
// which h' vanishes identically are merged into Degenerate span markers.
// Results are sorted by s0; Torus results are canonicalized into [0, pi).
std::vector<CriticalPoint> critical_points(const ProfileSpec& p, int grid_n, double tol);

// Default parameters used by the cached scan.
inline constexpr int kCriticalGridDefault = 4096;
inline constexpr double kCriticalTolDefault = 1e-12;

}  // namespace geocensus
