#pragma once

// System-level transformations: constant rotations of the coefficient matrix
// (the essential spectrum does not move), conversion of a zero-energy
// Schrödinger solution pair into its canonical system, and extraction of the
// Dirac potential from a determinant-one diagonal field.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "field.hpp"
#include "numeric.hpp"

namespace specedge {

namespace detail {

// Rotation acting on the angular parameters. Every value tau * (phi, g) is
// the projection mixture tau * (lam P_phi + (1 - lam) P_{-phi}) with
// lam = (1 + g)/2, and R^T P_beta R = P_{beta + alpha} exactly, so the
// rotated parameters come out of O(1) trigonometric sums. Forming R^T H R as
// matrix entries instead would cancel the small channel out of large ones
// once the eigenvalues split by more than a few orders of magnitude.
struct RotatedPhiG {
    double phi = 0.0;
    double g = 0.0;
};

inline RotatedPhiG rotate_phi_g(double phi, double g, double alpha) {
    double lam = 0.5 * (1.0 + g);
    double a1 = phi + alpha, a2 = alpha - phi;
    double s1 = std::sin(a1), c1 = std::cos(a1);
    double s2 = std::sin(a2), c2 = std::cos(a2);
    double sin2 = lam * s1 * s1 + (1.0 - lam) * s2 * s2; // h11 / tau
    double cos2 = lam * c1 * c1 + (1.0 - lam) * c2 * c2; // h22 / tau
    double mix = lam * s1 * c1 + (1.0 - lam) * s2 * c2;  // h12 / tau
    double sc = std::sqrt(sin2 * cos2);
    RotatedPhiG out;
    if (sc == 0.0) {
        out.phi = (sin2 >= cos2) ? -kPi / 2.0 : 0.0;
        out.g = 0.0;
        return out;
    }
    out.phi = std::copysign(std::atan2(std::sqrt(sin2), std::sqrt(cos2)), mix);
    if (out.phi >= kPi / 2.0) out.phi -= kPi;
    out.g = std::min(1.0, std::abs(mix) / sc);
    return out;
}

} // namespace detail

// Replace H(x) by R^T H(x) R with the rotation by alpha, re-expressed in the
// angular parameters. The trace is preserved pointwise; grids stay grids. A
// declared integrable direction is carried along (it rotates to R^T v), and
// the h11-channel flag survives only if that direction lands back on the
// first axis.
inline CoefficientField rotate(const CoefficientField& f, double alpha) {
    if (alpha == 0.0) return f;

    CoefficientField out;
    out.trace_normed = f.trace_normed;
    out.trace = f.trace;
    out.time_change = f.time_change;
    out.name = f.name + ".rot";

    if (f.grid) {
        GridTable t;
        t.cells.reserve(f.grid->cells.size());
        for (const GridCell& c : f.grid->cells) {
            detail::RotatedPhiG pg = detail::rotate_phi_g(c.phi, c.g, alpha);
            t.cells.push_back({c.x, pg.phi, pg.g, c.trace});
        }
        CoefficientField g = make_grid_field(std::move(t));
        g.name = out.name;
        out = std::move(g);
    } else {
        auto phi_f = f.phi, g_f = f.g;
        out.phi = [phi_f, g_f, alpha](double x) {
            return detail::rotate_phi_g(phi_f(x), g_f(x), alpha).phi;
        };
        out.g = [phi_f, g_f, alpha](double x) {
            return detail::rotate_phi_g(phi_f(x), g_f(x), alpha).g;
        };
        out.diagonal = false; // not knowable pointwise; callers may re-flag
    }

    // The integrable direction rotates with the basis: new v = R^T old v.
    std::array<double, 2> v{1.0, 0.0};
    bool declared = false;
    if (f.l2_direction) {
        v = *f.l2_direction;
        declared = true;
    } else if (f.l2_direction_ok) {
        declared = true; // h11 channel, v = e1
    }
    if (declared) {
        const double ca = std::cos(alpha), sa = std::sin(alpha);
        std::array<double, 2> rv{ca * v[0] + sa * v[1], -sa * v[0] + ca * v[1]};
        out.l2_direction = rv;
        out.l2_direction_ok = std::abs(rv[1]) <= 1e-12;
        if (out.l2_direction_ok && f.tail) out.tail = f.tail;
    }
    // An axis-aligned variant is always one exact rotation away: the input
    // itself when it was aligned (undoing alpha), else whatever it knew.
    if (f.l2_direction_ok && !(out.l2_direction_ok && out.tail))
        out.aligned_form = [f]() { return f; };
    else if (f.aligned_form)
        out.aligned_form = f.aligned_form;
    return out;
}

// Rotate so that the declared integrable direction v becomes the first axis
// (R e1 = v). The caller asserts integrability of the v-channel; the result
// is flagged accordingly.
inline CoefficientField align_l2_direction(const CoefficientField& f,
                                           std::array<double, 2> v) {
    double n = std::hypot(v[0], v[1]);
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("align_l2_direction: v must be a nonzero vector");
    double alpha = std::atan2(v[1] / n, v[0] / n);
    CoefficientField out = rotate(f, alpha);
    out.l2_direction_ok = true;
    out.l2_direction = std::array<double, 2>{1.0, 0.0};
    out.name = f.name + ".aligned";
    return out;
}

// Zero-energy solution pair of a Schrödinger operator, with derivatives for
// the Wronskian check.
struct SchrodingerSolutions {
    std::function<double(double)> p, dp, q, dq;
};

// Build the canonical system carried by a solution pair: H = (p^2 pq; pq q^2),
// rank one, trace p^2 + q^2, not trace-normed. Requires the unit Wronskian
// p'q - q'p = 1, checked on sample points.
inline CoefficientField schrodinger_to_canonical(const SchrodingerSolutions& sol) {
    if (!sol.p || !sol.q || !sol.dp || !sol.dq)
        throw std::invalid_argument("schrodinger_to_canonical: need p, p', q, q'");
    for (double x : {0.0, 0.3, 1.0, 2.5, 7.0, 19.0}) {
        double w = sol.dp(x) * sol.q(x) - sol.dq(x) * sol.p(x);
        if (!(std::abs(w - 1.0) <= 1e-10))
            throw std::invalid_argument(
                "schrodinger_to_canonical: p'q - q'p != 1 at x = " + std::to_string(x));
    }
    CoefficientField out;
    auto p = sol.p, q = sol.q;
    out.phi = [p, q](double x) {
        double pv = p(x), qv = q(x);
        if (qv < 0.0) { pv = -pv; qv = -qv; } // (p,q) and (-p,-q) carry the same H
        return std::atan2(pv, qv);
    };
    out.g = [](double) { return 1.0; };
    out.trace = [p, q](double x) {
        double pv = p(x), qv = q(x);
        return pv * pv + qv * qv;
    };
    out.trace_normed = false;
    out.diagonal = false;
    out.name = "schrodinger_canonical";
    return out;
}

// Dirac potential of a determinant-one diagonal field diag(a, 1/a):
// W = a'/(2a), with a = h11. Families pass the exact derivative; otherwise a
// central difference with the given step is used (one-sided at the origin).
struct DiracPotential {
    std::function<double(double)> W_dirac;
};

inline DiracPotential diagonal_to_dirac(const CoefficientField& f,
                                        std::function<double(double)> da = {},
                                        double fd_step = 1e-6) {
    for (double x : {0.0, 0.7, 2.0, 5.0, 13.0, 40.0})
        if (std::abs(f.g(x)) > 1e-15)
            throw std::invalid_argument("diagonal_to_dirac: field is not diagonal");
    // Determinant panel stays at moderate x: past phi ~ pi/2 - 1e-6 the small
    // channel falls under the angle's rounding and the product is meaningless.
    for (double x : {0.0, 0.7, 2.0, 5.0, 8.0}) {
        HMatrix h = h_at(f, x);
        if (std::abs(h.h11 * h.h22 - 1.0) > 1e-10)
            throw std::domain_error("diagonal_to_dirac: h11 * h22 != 1 at x = " +
                                    std::to_string(x));
    }
    if (!(fd_step > 0.0))
        throw std::invalid_argument("diagonal_to_dirac: fd_step must be positive");
    auto a = [f](double x) { return h_at(f, x).h11; };
    DiracPotential out;
    if (da) {
        out.W_dirac = [a, da](double x) { return da(x) / (2.0 * a(x)); };
    } else {
        out.W_dirac = [a, h = fd_step](double x) {
            double lo = std::max(x - h, 0.0), hi = x + h;
            return (a(hi) - a(lo)) / (hi - lo) / (2.0 * a(x));
        };
    }
    return out;
}

} // namespace specedge
