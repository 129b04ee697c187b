#pragma once

// Small numeric utilities shared across the library: extended-real intervals,
// adaptive Simpson quadrature (finite and semi-infinite), and a few constants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace specedge {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Closed interval on the extended half line [0, +inf]. lo == hi == +inf is the
// sentinel for "no finite value" (e.g. an empty essential spectrum side).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double v) { return {v, v}; }
    static Interval infinite() { return {kInf, kInf}; }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool is_infinite() const { return std::isinf(lo) && std::isinf(hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

// Pointwise min of two interval-valued quantities.
inline Interval min_interval(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Symmetric inflation; infinite endpoints stay infinite.
inline Interval inflate(const Interval& iv, double pad) {
    Interval out = iv;
    if (!std::isinf(out.lo)) out.lo -= pad;
    if (!std::isinf(out.hi)) out.hi += pad;
    return out;
}

inline double relative_gap(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

namespace quad {

namespace detail {

inline double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F&& f, double a, double fa, double b, double fb, double m, double fm,
                double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_rule(a, fa, m, fm, flm);
    double right = simpson_rule(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson on [a, b]; tol is an absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = detail::simpson_rule(a, fa, b, fb, fm);
    return detail::adaptive(f, a, fa, b, fb, m, fm, whole,
                            std::max(tol, 1e-300), max_depth);
}

// Integral of f over [a, +inf) for integrands decaying at least like x^(-1-eps).
// The far part is handled through the substitution x = a + e^v so geometric
// tails and power tails are both resolved on a modest v-range.
template <class F>
double integrate_tail(F&& f, double a, double rel_tol = 1e-10, double v_max = 60.0) {
    double head = integrate(f, a, a + 1.0, 1e-14);
    auto g = [&](double v) {
        double ev = std::exp(v);
        return ev * f(a + ev);
    };
    double coarse = integrate(g, 0.0, v_max, 1e-14, 24);
    double tol = std::max(std::abs(head + coarse) * rel_tol, 1e-300);
    double far = integrate(g, 0.0, v_max, tol);
    return head + far;
}

} // namespace quad

// Geometric grid with n points from lo to hi inclusive (lo > 0).
inline std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_spaced: need 0 < lo < hi and n >= 2");
    std::vector<double> xs(static_cast<std::size_t>(n));
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

} // namespace specedge
