#pragma once

// Scalar ODE machinery: an explicit Dormand-Prince 5(4) integrator with FSAL
// and adaptive steps, and a closed-form advance for angle equations with
// constant coefficients (used on piecewise-constant fields, where it is exact
// up to rounding and costs O(1) per cell regardless of span).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "numeric.hpp"

namespace specedge::ode {

struct StepPolicy {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::size_t max_steps = 10'000'000;
    // Floor relative to max(|x|, 1). Slow-oscillation transits keep an O(1)
    // absolute width no matter how far out they sit, so the floor must leave
    // room for O(0.1) steps at |x| ~ 1e14; below ~4 ulp the x += h update
    // would not advance at all and the run is genuinely out of precision.
    double min_step_scale = 1e-15;
    double h_init = 0.0;           // 0: pick from the initial slope
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double last_h = 0.0;
};

class StiffnessError : public std::runtime_error {
public:
    StiffnessError(double x, const std::string& what_arg)
        : std::runtime_error(what_arg + " (x = " + std::to_string(x) +
                             "); if the field is not trace-normed, normalize it first"),
          x_at_(x) {}
    double x_at() const { return x_at_; }

private:
    double x_at_;
};

struct NoRenorm {
    void operator()(double&) const {}
};

// y' = f(x, y) from x0 to x1 (forward only). Throws StiffnessError when the
// controller drives the step below the resolvable floor.
//
// `renorm` is applied to the state after every accepted step. It exists so a
// caller integrating an angle can fold the state back toward zero and keep
// the error control anchored to the small offset instead of the accumulated
// winding; it must be a symmetry of f in y (the FSAL stage is reused across
// the fold).
template <class RHS, class Renorm = NoRenorm>
double integrate(RHS&& f, double x0, double x1, double y0,
                 const StepPolicy& pol = {}, StepStats* stats = nullptr,
                 Renorm&& renorm = {}) {
    if (!(x1 >= x0)) throw std::invalid_argument("ode::integrate: x1 < x0");
    if (x1 == x0) return y0;

    // Dormand-Prince 5(4) tableau.
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640,
                     e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                     e7 = -1.0 / 40;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    double x = x0, y = y0;
    double k1 = f(x, y);
    double h;
    if (pol.h_init > 0.0) {
        h = pol.h_init;
    } else {
        double d = std::abs(k1);
        h = (d > 1e-8) ? 0.01 / d : 1e-4;
        // Never start below the resolvable floor of the window itself.
        h = std::max(h, 4.0 * pol.min_step_scale * std::max({std::abs(x0), std::abs(x1), 1.0}));
    }
    h = std::min(h, x1 - x0);

    std::size_t steps = 0;
    bool fsal_fresh = true;
    while (x < x1) {
        if (++steps > pol.max_steps)
            throw StiffnessError(x, "ode::integrate: step budget exhausted");
        double floor_h = pol.min_step_scale * std::max(std::abs(x), 1.0);
        if (h < floor_h)
            throw StiffnessError(x, "ode::integrate: step size collapsed");
        bool last = false;
        if (x + h >= x1) {
            h = x1 - x;
            last = true;
        }
        if (!fsal_fresh) k1 = f(x, y);

        double k2 = f(x + c2 * h, y + h * (a21 * k1));
        double k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
        double k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        double k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        double k6 =
            f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        double ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        double k7 = f(x + h, ynew); // FSAL stage
        double err_raw =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double scale = pol.atol + pol.rtol * std::max(std::abs(y), std::abs(ynew));
        double err = std::abs(err_raw) / scale;

        if (err <= 1.0) {
            x = last ? x1 : x + h;
            y = ynew;
            renorm(y);
            k1 = k7;
            fsal_fresh = true;
            if (stats) {
                ++stats->accepted;
                stats->last_h = h;
            }
            double grow = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            fsal_fresh = false;
            if (stats) ++stats->rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
        if (!std::isfinite(y))
            throw StiffnessError(x, "ode::integrate: state became non-finite");
    }
    return y;
}

// --- closed-form advance on a constant cell ------------------------------
//
// theta' = t * (h11 cos^2 + 2 h12 sin cos + h22 sin^2)
//        = t * (a + b cos(2 theta - psi)),
// a = (h11 + h22)/2,  b = |(h11 - h22)/2, h12|,  psi = atan2(2 h12, h11 - h22).
//
// With w = theta - psi/2 and r = sqrt((a-b)/(a+b)), the unwrapped angle
// V = atan(r tan w) advances linearly at rate t * sqrt(a^2 - b^2). On a
// rank-one cell (b = a) it is tan w that advances linearly, at rate 2 t a.

struct CellCoef {
    double a, b, psi;
    bool rank_one() const { return (a - b) <= 1e-13 * (a + b); }
    double rate() const { // dV/dx per unit t on a full-rank cell
        return std::sqrt(std::max(0.0, (a - b) * (a + b)));
    }
};

inline CellCoef cell_coefficients(double h11, double h12, double h22) {
    CellCoef c;
    c.a = 0.5 * (h11 + h22);
    c.b = std::hypot(0.5 * (h11 - h22), h12);
    c.psi = (c.b > 0.0) ? std::atan2(2.0 * h12, h11 - h22) : 0.0;
    return c;
}

inline double advance_cell(const CellCoef& c, double t, double theta0, double dx) {
    if (dx == 0.0 || t == 0.0 || c.a == 0.0) return theta0;
    const double w0 = theta0 - 0.5 * c.psi;
    const double k = std::floor(w0 / kPi + 0.5);
    const double u = w0 - k * kPi;
    if (c.rank_one()) {
        // theta' = 2 t a cos^2 w: tan w moves linearly, branch never changes.
        double cu = std::cos(u);
        if (cu == 0.0) return theta0;
        double tu = std::tan(u) + 2.0 * t * c.a * dx;
        return std::atan(tu) + k * kPi + 0.5 * c.psi;
    }
    const double r = std::sqrt((c.a - c.b) / (c.a + c.b));
    const double v = std::atan2(r * std::sin(u), std::cos(u));
    const double V1 = v + k * kPi + t * c.rate() * dx;
    const double k1 = std::floor(V1 / kPi + 0.5);
    const double v1 = V1 - k1 * kPi;
    const double u1 = std::atan2(std::sin(v1), r * std::cos(v1));
    return u1 + k1 * kPi + 0.5 * c.psi;
}


} // namespace specedge::ode
