#pragma once

// Angle form of the canonical system on the half line:
//
//   theta'(x) = t * (h11 cos^2 theta + 2 h12 sin theta cos theta + h22 sin^2 theta).
//
// The right side is t * <e(theta), H(x) e(theta)> with e = (cos, sin), so theta
// is nondecreasing for t > 0 and nonincreasing for t < 0. Crossings of
// multiples of pi count zeros of the first solution component; all oscillation
// questions reduce to whether theta gains unboundedly many pi's.
//
// theta itself is a bad state variable far out on the half line: between
// rotations the angle hugs a multiple of pi to within ~1/x, and once x is
// large that offset drowns in rtol * |theta|, silently erasing the phase
// information that times the next rotation. The integrator therefore works
// with the pair (branch, offset), theta = branch*pi + offset, folding the
// offset back toward zero after every accepted step. The fold subtracts pi
// in double-double form so repeated folds stay exact to ~1e-32 each.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "ode.hpp"

namespace specedge {

// fl(pi) and the next correction term, so that kPiHi + kPiLo = pi + O(1e-33).
inline constexpr double kPiHi = 3.14159265358979311600e+00;
inline constexpr double kPiLo = 1.22464679914735317723e-16;

struct AngleState {
    std::int64_t branch = 0; // theta = branch * pi + offset
    double offset = 0.0;

    // Fold triggers outside [-pi/2 - slack, pi/2 + slack]; the slack keeps
    // the fold off the knife edge at exactly pi/2.
    static constexpr double kFoldLimit = 1.92;

    double value() const { return static_cast<double>(branch) * kPi + offset; }

    void fold() {
        if (std::abs(offset) <= kFoldLimit) return;
        double m = std::nearbyint(offset / kPi);
        offset = (offset - m * kPiHi) - m * kPiLo;
        branch += static_cast<std::int64_t>(m);
    }

    static AngleState from_theta(double theta) {
        AngleState s;
        s.offset = theta;
        s.fold();
        return s;
    }
};

// (b - a) as a plain double; exact enough for any reportable gain.
inline double angle_gain(const AngleState& a, const AngleState& b) {
    return static_cast<double>(b.branch - a.branch) * kPi + (b.offset - a.offset);
}

struct PruferPoint {
    double x;
    double theta;
};

struct PruferTrajectory {
    std::vector<PruferPoint> samples;
    ode::StepStats stats;
    double t = 0.0;
    double gain() const {
        return samples.empty() ? 0.0 : samples.back().theta - samples.front().theta;
    }
    double rotations() const { return gain() / kPi; }
};

namespace detail {

// Post-step hook for ode::integrate: folds a pi-periodic angle offset back
// toward zero, accumulating whole turns into `winding`.
inline auto make_fold_hook(std::int64_t& winding) {
    return [&winding](double& y) {
        if (std::abs(y) <= AngleState::kFoldLimit) return;
        double m = std::nearbyint(y / kPi);
        y = (y - m * kPiHi) - m * kPiLo;
        winding += static_cast<std::int64_t>(m);
    };
}

inline std::size_t grid_cell_index(const GridTable& g, double x) {
    const auto& v = g.cells;
    std::size_t lo = 0, hi = v.size();
    while (hi - lo > 1) {
        std::size_t m = (lo + hi) / 2;
        (v[m].x <= x ? lo : hi) = m;
    }
    return lo;
}

inline double advance_theta_grid(const CoefficientField& f, double t, double x0,
                                 double x1, double theta0) {
    const auto& cells = f.grid->cells;
    std::size_t i = grid_cell_index(*f.grid, x0);
    double x = x0, th = theta0;
    while (x < x1) {
        double cell_end = (i + 1 < cells.size()) ? cells[i + 1].x : kInf;
        double seg_end = std::min(x1, cell_end);
        HMatrix H = from_phi_g(cells[i].phi, cells[i].g, cells[i].trace);
        auto cc = ode::cell_coefficients(H.h11, H.h12, H.h22);
        th = ode::advance_cell(cc, t, th, seg_end - x);
        x = seg_end;
        if (x == cell_end) ++i;
    }
    return th;
}

} // namespace detail

// Advance the angle from (x0, a0) to x1. Piecewise-constant fields use the
// closed-form cell solution; everything else runs the adaptive integrator on
// the folded offset, with the error control anchored to the offset itself.
inline AngleState advance_angle(const CoefficientField& f, double t, double x0,
                                double x1, AngleState a0,
                                const ode::StepPolicy& pol = {},
                                ode::StepStats* stats = nullptr) {
    if (!(x0 >= 0.0)) throw std::domain_error("advance_angle: x0 < 0");
    if (!(x1 >= x0)) throw std::invalid_argument("advance_angle: x1 < x0");
    if (f.grid)
        return AngleState::from_theta(
            detail::advance_theta_grid(f, t, x0, x1, a0.value()));
    a0.fold();
    std::int64_t winding = 0;
    auto rhs = [&f, t](double x, double th) { return t * h_at(f, x).quad_form(th); };
    // The quadratic form is exactly pi-periodic in theta, so the fold is a
    // symmetry of rhs and the FSAL reuse across it is sound.
    double off = ode::integrate(rhs, x0, x1, a0.offset, pol, stats,
                                detail::make_fold_hook(winding));
    return AngleState{a0.branch + winding, off};
}

inline double advance_theta(const CoefficientField& f, double t, double x0, double x1,
                            double theta0, const ode::StepPolicy& pol = {},
                            ode::StepStats* stats = nullptr) {
    return advance_angle(f, t, x0, x1, AngleState::from_theta(theta0), pol, stats)
        .value();
}

// Sample theta along increasing abscissae; theta0 is taken at xs.front().
// Sub-tolerance integrator wiggle against the exact monotonicity of theta is
// snapped out so downstream comparisons can rely on the sign of t alone.
inline PruferTrajectory trace_prufer(const CoefficientField& f, double t,
                                     const std::vector<double>& xs, double theta0 = 0.0,
                                     const ode::StepPolicy& pol = {}) {
    if (xs.empty()) throw std::invalid_argument("trace_prufer: no sample points");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("trace_prufer: sample points must increase");
    PruferTrajectory out;
    out.t = t;
    out.samples.reserve(xs.size());
    out.samples.push_back({xs.front(), theta0});
    AngleState a = AngleState::from_theta(theta0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        a = advance_angle(f, t, xs[i - 1], xs[i], a, pol, &out.stats);
        double th = a.value();
        double prev = out.samples.back().theta;
        if (t > 0.0)
            th = std::max(th, prev);
        else if (t < 0.0)
            th = std::min(th, prev);
        out.samples.push_back({xs[i], th});
    }
    return out;
}

} // namespace specedge
