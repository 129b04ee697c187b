#pragma once

// Coefficient fields of half-line canonical systems  J u' = -z H(x) u.
//
// A field is the measurable matrix function H(x) >= 0 stored in the angular
// parametrization
//
//     H(x) = trace(x) * [ sin^2 phi        g sin phi cos phi ]
//                       [ g sin phi cos phi     cos^2 phi    ]
//
// with 0 <= g <= 1 and phi reduced to [-pi/2, pi/2). Trace-normed fields have
// trace == 1 identically and omit the trace handle. Fields are immutable
// bundles of pure function handles plus metadata; all operations below return
// new values.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace specedge {

// Dense symmetric 2x2 coefficient matrix value.
struct HMatrix {
    double h11 = 0.0;
    double h12 = 0.0;
    double h22 = 0.0;

    double trace() const { return h11 + h22; }
    double det() const { return h11 * h22 - h12 * h12; }
    double eig_min() const {
        double m = 0.5 * trace();
        double r = std::hypot(0.5 * (h11 - h22), h12);
        return m - r;
    }
    double eig_max() const {
        double m = 0.5 * trace();
        double r = std::hypot(0.5 * (h11 - h22), h12);
        return m + r;
    }
    bool is_psd(double tol = 1e-12) const {
        return eig_min() >= -tol * std::max(1.0, trace());
    }
    // e_theta^T H e_theta with e_theta = (cos theta, sin theta).
    double quad_form(double theta) const {
        double c = std::cos(theta), s = std::sin(theta);
        return h11 * c * c + 2.0 * h12 * s * c + h22 * s * s;
    }
};

// Reduce an angle modulo pi into [-pi/2, pi/2).
inline double reduce_phi(double phi) {
    double r = std::remainder(phi, kPi); // [-pi/2, pi/2], ties to even
    if (r >= kPi / 2.0) r -= kPi;
    return r;
}

inline HMatrix from_phi_g(double phi, double g, double trace = 1.0) {
    if (!(g >= 0.0 && g <= 1.0))
        throw std::invalid_argument("from_phi_g: g must lie in [0, 1]");
    if (!(trace > 0.0) || !std::isfinite(trace))
        throw std::invalid_argument("from_phi_g: trace must be positive and finite");
    double p = reduce_phi(phi);
    double s = std::sin(p), c = std::cos(p);
    return {trace * s * s, trace * g * s * c, trace * c * c};
}

// Angular parameters recovered from a matrix value. When sin(phi)cos(phi) == 0
// the coupling g leaves no trace in H; it is returned as 0 with `degenerate`
// set so callers can tell recovery from a genuine g = 0.
struct PhiG {
    double phi = 0.0;
    double g = 0.0;
    double trace = 0.0;
    bool degenerate = false;
};

inline PhiG to_phi_g(const HMatrix& h) {
    double tau = h.trace();
    if (!(tau > 0.0))
        throw std::invalid_argument("to_phi_g: H must be nonzero with positive trace");
    if (!h.is_psd(1e-9))
        throw std::invalid_argument("to_phi_g: H must be positive semidefinite");
    double s2 = std::max(0.0, h.h11 / tau);
    double c2 = std::max(0.0, h.h22 / tau);
    double sc = std::sqrt(s2 * c2); // |sin phi cos phi|
    PhiG out;
    out.trace = tau;
    if (sc <= 1e-15) {
        // Diagonal axis cases: h11 == 0 -> phi = 0; h22 == 0 -> phi = -pi/2.
        out.degenerate = true;
        out.g = 0.0;
        out.phi = (s2 >= c2) ? -kPi / 2.0 : 0.0;
        return out;
    }
    double sign = (h.h12 > 0.0) ? 1.0 : (h.h12 < 0.0 ? -1.0 : 1.0);
    double sphi = sign * std::sqrt(s2);
    double cphi = std::sqrt(c2);
    out.phi = std::atan2(sphi, cphi);
    if (out.phi >= kPi / 2.0) out.phi -= kPi;
    out.g = std::min(1.0, std::abs(h.h12) / (tau * sc));
    return out;
}

// Orthogonal projection onto the direction (sin beta, cos beta).
inline HMatrix projection(double beta) {
    double s = std::sin(beta), c = std::cos(beta);
    return {s * s, s * c, c * c};
}

// Convex combination lambda * P_phi + (1 - lambda) * P_{-phi}. The diagonal is
// independent of lambda; lambda = 1/2 gives exactly the diagonal matrix.
inline HMatrix lambda_segment(double phi, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::out_of_range("lambda_segment: lambda must lie in [0, 1]");
    double s = std::sin(phi), c = std::cos(phi);
    return {s * s, (2.0 * lambda - 1.0) * s * c, c * c};
}

// Exact tail data for closed-form families.
//
// W(x) is the integral of h11 from x to infinity; in the trace-normed time
// scale s this is the tail integral of sin^2 phi, the quantity the asymptotic
// statistics are built from. A_exact / B_exact are limsup / liminf of s * W
// as s -> infinity in normalized time, and sup_sW_from(sigma) (optional) is
// sup over s >= sigma of s * W, which feeds the non-oscillation certificate.
struct AnalyticTail {
    std::function<double(double)> W;
    double A_exact = kNaN;
    double B_exact = kNaN;
    std::function<double(double)> sup_sW_from;
};

// Closed-form time change between the field's own variable x and the
// trace-normed variable s(x) = integral of trace over [0, x].
struct TimeChange {
    std::function<double(double)> s_of_x;
    std::function<double(double)> x_of_s;
};

// Piecewise-constant sample table; values are right-continuous, the value at
// row i holds on [x_i, x_{i+1}), and the last row extends to infinity.
struct GridCell {
    double x = 0.0;
    double phi = 0.0;
    double g = 0.0;
    double trace = 1.0;
};

struct GridTable {
    std::vector<GridCell> cells;
};

struct CoefficientField {
    std::function<double(double)> phi;
    std::function<double(double)> g;
    bool trace_normed = true;
    std::function<double(double)> trace; // unused when trace_normed

    std::optional<AnalyticTail> tail;
    bool l2_direction_ok = false; // integral of h11 over [0, inf) declared finite
    std::optional<std::array<double, 2>> l2_direction; // declared integrable direction
    std::optional<TimeChange> time_change;
    std::shared_ptr<const GridTable> grid; // set for piecewise-constant fields
    std::optional<double> sin_phi_support_end; // sin phi == 0 beyond this point
    bool diagonal = false; // g identically zero
    std::function<CoefficientField()> aligned_form; // axis-aligned variant, if known
    std::string name = "field";
};

inline HMatrix h_at(const CoefficientField& f, double x) {
    if (x < 0.0) throw std::domain_error("h_at: fields live on [0, infinity)");
    double tau = f.trace_normed ? 1.0 : f.trace(x);
    return from_phi_g(f.phi(x), f.g(x), tau);
}

inline CoefficientField diagonal_part(const CoefficientField& f) {
    CoefficientField d = f;
    d.g = [](double) { return 0.0; };
    d.diagonal = true;
    d.aligned_form = nullptr;
    d.name = f.name + ".diag";
    if (d.grid) {
        auto cells = std::make_shared<GridTable>(*d.grid);
        for (auto& c : cells->cells) c.g = 0.0;
        d.grid = cells;
    }
    return d;
}

namespace detail {

// Generic (slow) time change built from quadrature + bisection. Closed-form
// metadata should be preferred; this fallback keeps trace_normalize total.
inline TimeChange numeric_time_change(std::function<double(double)> trace) {
    auto s_of_x = [trace](double x) {
        if (x <= 0.0) return 0.0;
        return quad::integrate([&](double u) { return trace(u); }, 0.0, x,
                               1e-12 * std::max(1.0, x));
    };
    auto x_of_s = [s_of_x](double s) {
        if (s <= 0.0) return 0.0;
        double hi = 1.0;
        while (s_of_x(hi) < s) {
            hi *= 2.0;
            if (hi > 1e300) throw std::domain_error("time change: s out of range");
        }
        double lo = 0.0;
        for (int i = 0; i < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++i) {
            double m = 0.5 * (lo + hi);
            (s_of_x(m) < s ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    };
    return {s_of_x, x_of_s};
}

inline std::shared_ptr<const GridTable> renormalize_grid(const GridTable& g) {
    auto out = std::make_shared<GridTable>();
    out->cells.reserve(g.cells.size());
    double s = 0.0;
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        GridCell c = g.cells[i];
        double x0 = c.x;
        c.x = s;
        c.trace = 1.0;
        out->cells.push_back(c);
        if (i + 1 < g.cells.size())
            s += g.cells[i].trace * (g.cells[i + 1].x - x0);
    }
    return out;
}

} // namespace detail

// Reparametrize by s(x) = integral of the trace, producing the trace-normed
// field of the same system. phi and g are unchanged as functions of the point;
// only the time scale moves, so every oscillation property is preserved.
inline CoefficientField trace_normalize(const CoefficientField& f) {
    if (f.trace_normed) return f;
    TimeChange tc = f.time_change ? *f.time_change
                                  : detail::numeric_time_change(f.trace);
    auto xs = tc.x_of_s;
    CoefficientField out;
    out.phi = [inner = f.phi, xs](double s) { return inner(xs(s)); };
    out.g = [inner = f.g, xs](double s) { return inner(xs(s)); };
    out.trace_normed = true;
    out.l2_direction_ok = f.l2_direction_ok;
    out.l2_direction = f.l2_direction;
    out.diagonal = f.diagonal;
    out.name = f.name;
    if (f.tail) {
        AnalyticTail t;
        t.W = [inner = f.tail->W, xs](double s) { return inner(xs(s)); };
        t.A_exact = f.tail->A_exact;
        t.B_exact = f.tail->B_exact;
        t.sup_sW_from = f.tail->sup_sW_from; // already in normalized time
        out.tail = std::move(t);
    }
    if (f.sin_phi_support_end)
        out.sin_phi_support_end = tc.s_of_x(*f.sin_phi_support_end);
    if (f.grid) out.grid = detail::renormalize_grid(*f.grid);
    return out;
}

// Growth diagnostic for the integral of h11: compares increments over the last
// few geometric spans and flags apparent divergence. Heuristic only; families
// declare integrability, this never upgrades the flag.
struct L2Diagnostic {
    bool looks_divergent = false;
    std::vector<std::pair<double, double>> increments; // (x, added mass)
};

inline L2Diagnostic l2_growth_diagnostic(const CoefficientField& f, double x_max = 1e6) {
    auto h11 = [&](double x) {
        double s = std::sin(f.phi(x));
        double tau = f.trace_normed ? 1.0 : f.trace(x);
        return tau * s * s;
    };
    L2Diagnostic d;
    double prev_x = 0.0;
    std::vector<double> edges = log_spaced(1.0, x_max, 13);
    double last = 0.0, second_last = 0.0;
    for (double e : edges) {
        // Tolerance scaled to the span, or the adaptive splitting would chase
        // absolute 1e-10 against an integrand that may be exponentially large.
        double scale = std::max({h11(prev_x), h11(e), 1.0}) * (e - prev_x);
        if (!std::isfinite(scale)) {
            d.looks_divergent = true;
            return d;
        }
        double inc = quad::integrate(h11, prev_x, e, 1e-10 * scale);
        d.increments.emplace_back(e, inc);
        if (!std::isfinite(inc)) {
            d.looks_divergent = true;
            return d;
        }
        second_last = last;
        last = inc;
        prev_x = e;
    }
    // A finite integral forces increments over geometric spans to shrink;
    // constant or growing increments mean (at least) logarithmic divergence.
    d.looks_divergent = last > 0.9 * second_last && last > 1e-9;
    return d;
}

} // namespace specedge
