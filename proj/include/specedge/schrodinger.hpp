#pragma once

// The half-line Schrodinger probe L(t) = -d^2/dx^2 - t^2 sin^2(phi(x)) with a
// Dirichlet condition at 0. Whether L(t) has finitely many negative
// eigenvalues is read off the zero count of the energy-zero solution, and the
// switch point S = sup{t >= 0 : finite negative spectrum} is bracketed by
// bisection. The count comes from the continuous lift of the solution's own
// angle (u = r sin psi, u' = r cos psi), never from sign-sampling u, so close
// zero pairs cannot be missed.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"
#include "numeric.hpp"
#include "ode.hpp"
#include "prufer.hpp"
#include "spectrum.hpp"

namespace specedge {

struct ShootingRun {
    double t = 0.0;
    std::vector<PruferPoint> psi; // (X, psi(X)) at the horizon schedule
    std::vector<std::pair<double, long long>> zero_counts; // (X, count over (0, X])
    ode::StepStats stats;
};

enum class NegSpectrum { Finite, Infinite, Inconclusive };

inline const char* to_string(NegSpectrum v) {
    switch (v) {
        case NegSpectrum::Finite: return "finite";
        case NegSpectrum::Infinite: return "infinite";
        default: return "inconclusive";
    }
}

namespace detail {

// Horizons double in log scale (X squares each step) from a small seed.
// Zeros of a critical-coupling solution are evenly spaced in log x, so
// equal-ratio spans each catch a bounded number of them, while linear
// doublings would almost always catch none.
inline std::vector<double> log_dyadic_horizons(double x_max) {
    if (!(x_max > 2.0)) return {x_max};
    std::vector<double> xs;
    const double lmax = std::log(x_max);
    for (double lx = std::log(2.0); lx < lmax; lx *= 2.0) {
        // Skip a seed too close to the cap; the final span must stay wide.
        if (lmax / lx < 1.4) break;
        xs.push_back(std::exp(lx));
    }
    xs.push_back(x_max);
    return xs;
}

inline void require_shootable(const CoefficientField& f, double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("schrodinger: t must be >= 0");
    if (!f.trace_normed)
        throw std::invalid_argument("schrodinger: field must be trace-normed");
    if (!f.l2_direction_ok)
        throw std::invalid_argument(
            "schrodinger: field must have its square-integrable direction declared");
}

// The probe potential is built from the sin^2 phi channel, so a field whose
// integrable direction sits elsewhere routes through its aligned form, and a
// non-normed field through the time change. Throws where neither helps.
inline CoefficientField shootable_form(const CoefficientField& f) {
    if (!f.l2_direction_ok && f.aligned_form) {
        CoefficientField a = f.aligned_form();
        a.name = f.name;
        return shootable_form(a);
    }
    if (!f.trace_normed && f.l2_direction_ok) return trace_normalize(f);
    return f;
}

} // namespace detail

// Integrate psi' = cos^2(psi) + t^2 sin^2(phi(x)) sin^2(psi) from psi(0) = 0
// and report zero counts floor(psi/pi) at log-dyadic horizons up to X.
inline ShootingRun shoot_zero_energy(const CoefficientField& f0, double t, double X,
                                     const ode::StepPolicy& pol = {}) {
    CoefficientField f = detail::shootable_form(f0);
    detail::require_shootable(f, t);
    if (!(X > 0.0) || !std::isfinite(X))
        throw std::invalid_argument("shoot_zero_energy: X must be positive and finite");

    ShootingRun out;
    out.t = t;
    auto rhs = [&f, t](double x, double psi) {
        double c = std::cos(psi), s = std::sin(psi);
        double sp = std::sin(f.phi(x));
        return c * c + (t * sp) * (t * sp) * s * s;
    };
    AngleState a; // psi(0) = 0
    double x = 0.0;
    for (double X_k : detail::log_dyadic_horizons(X)) {
        std::int64_t winding = 0;
        a.offset = ode::integrate(rhs, x, X_k, a.offset, pol, &out.stats,
                                  detail::make_fold_hook(winding));
        a.branch += winding;
        x = X_k;
        // floor(psi/pi) with psi = branch*pi + offset, |offset| < pi.
        long long zeros = a.branch + (a.offset < 0.0 ? -1 : 0);
        out.psi.push_back({X_k, a.value()});
        out.zero_counts.emplace_back(X_k, zeros);
    }
    return out;
}

struct NegSpectrumReport {
    NegSpectrum value = NegSpectrum::Inconclusive;
    ShootingRun run;
    std::string note;
};

// Finite negative spectrum of L(t) is equivalent to finitely many zeros of
// the energy-zero solution. Verdict from the count profile over the horizon
// schedule: still incrementing across each of the last two log-doublings
// means zeros keep accumulating (Infinite); a count constant across the
// final four means they stopped (Finite); anything else stays open.
inline NegSpectrumReport negative_spectrum_finite(const CoefficientField& f0, double t,
                                                  const ClassifyPolicy& pol = {}) {
    CoefficientField f = detail::shootable_form(f0);
    NegSpectrumReport out;
    out.run = shoot_zero_energy(f, t, pol.x_max, pol.step);
    const auto& zc = out.run.zero_counts;
    auto count = [&zc](std::size_t back) {
        return zc[zc.size() - 1 - back].second;
    };
    if (zc.size() >= 3 && count(0) > count(1) && count(1) > count(2)) {
        out.value = NegSpectrum::Infinite;
        out.note = "zero count still grows across the last two horizon doublings";
    } else if (zc.size() >= 4 && count(0) == count(3)) {
        out.value = NegSpectrum::Finite;
        out.note = "zero count constant across the final four horizon doublings";
    } else {
        out.value = NegSpectrum::Inconclusive;
        out.note = "zero count changes too slowly to settle at this horizon";
    }
    // The count profile is horizon-limited: a constant count cannot tell "no
    // more zeros" from "next zero past the horizon". When the field carries
    // tail data, the Euler-threshold tests t^2 * liminf sW > 1/4 (zeros keep
    // accumulating) and t^2 * sup_{s>=a} sW < 1/4 (they stop) settle the
    // question outright and outrank the profile.
    if (!pol.use_certificates) return out;
    if (f.tail && t > 0.0 && f.tail->B_exact * (t * t) > 0.25) {
        if (out.value != NegSpectrum::Infinite)
            out.note = "tail criterion proves zeros accumulate (count profile: " +
                       out.note + ")";
        out.value = NegSpectrum::Infinite;
    } else if (f.tail && f.tail->sup_sW_from) {
        for (const auto& [X_k, n] : zc) {
            double s = f.tail->sup_sW_from(X_k);
            if (std::isfinite(s) && t * t * s < 0.25) {
                if (out.value != NegSpectrum::Finite)
                    out.note = "tail criterion proves zeros stop (count profile: " +
                               out.note + ")";
                out.value = NegSpectrum::Finite;
                break;
            }
        }
    }
    return out;
}

struct SBracketProbe {
    double t;
    NegSpectrum verdict;
};

class SBracketError : public std::runtime_error {
public:
    SBracketError(std::string what_arg, std::vector<SBracketProbe> probes)
        : std::runtime_error(std::move(what_arg)), probes_(std::move(probes)) {}
    const std::vector<SBracketProbe>& probes() const { return probes_; }

private:
    std::vector<SBracketProbe> probes_;
};

struct SBracket {
    Interval iv;
    enum class Kind { bracket, infinite } kind = Kind::bracket;
    std::vector<SBracketProbe> probes;
};

// Bracket S = sup{t >= 0 : finite negative spectrum} by bisection. The
// switch happens at a single t, so Finite anchors the lower end, Infinite
// the upper, and Inconclusive probes between them stay recorded but never
// tighten the bracket.
inline SBracket s_bracket(const CoefficientField& f, const ClassifyPolicy& cpol = {},
                          const ThresholdPolicy& tpol = {}) {
    SBracket out;
    auto probe = [&](double t) {
        NegSpectrum v = negative_spectrum_finite(f, t, cpol).value;
        out.probes.push_back({t, v});
        return v;
    };

    if (probe(tpol.t_max) == NegSpectrum::Finite) {
        // Still finite at the top of the probe range: report no switch.
        out.kind = SBracket::Kind::infinite;
        out.iv = Interval{tpol.t_max, kInf};
        return out;
    }
    double finite_lo = kNaN, infinite_hi = kNaN;
    double above_finite = tpol.t_max, below_infinite = tpol.t_min;
    if (out.probes.back().verdict == NegSpectrum::Infinite) infinite_hi = tpol.t_max;
    switch (probe(tpol.t_min)) {
        case NegSpectrum::Finite: finite_lo = tpol.t_min; break;
        case NegSpectrum::Infinite:
            // Already infinite at the bottom: S collapses below the range.
            out.iv = Interval{0.0, tpol.t_min};
            return out;
        default: break;
    }
    if (std::isnan(finite_lo)) {
        for (double t : log_spaced(tpol.t_min, tpol.t_max, 9)) {
            NegSpectrum v = probe(t);
            if (v == NegSpectrum::Finite) finite_lo = std::max(
                std::isnan(finite_lo) ? -kInf : finite_lo, t);
            if (v == NegSpectrum::Infinite)
                infinite_hi = std::min(std::isnan(infinite_hi) ? kInf : infinite_hi, t);
        }
        if (std::isnan(finite_lo) && std::isnan(infinite_hi))
            throw SBracketError("s_bracket: every probe was inconclusive", out.probes);
        if (std::isnan(finite_lo)) {
            out.iv = Interval{0.0, infinite_hi};
            return out;
        }
    }
    if (std::isnan(infinite_hi)) infinite_hi = kInf;

    // Tighten the Finite boundary from below...
    above_finite = std::min(std::isfinite(infinite_hi) ? infinite_hi : tpol.t_max,
                            tpol.t_max);
    std::size_t budget = tpol.max_probes;
    while (out.probes.size() < budget &&
           relative_gap(finite_lo, above_finite) > tpol.resolution_rel) {
        double mid = 0.5 * (finite_lo + above_finite);
        if (probe(mid) == NegSpectrum::Finite)
            finite_lo = mid;
        else
            above_finite = mid;
    }
    // ...and the Infinite boundary from above, when one was seen at all.
    if (std::isfinite(infinite_hi)) {
        below_infinite = finite_lo;
        while (out.probes.size() < budget &&
               relative_gap(below_infinite, infinite_hi) > tpol.resolution_rel) {
            double mid = 0.5 * (below_infinite + infinite_hi);
            if (probe(mid) == NegSpectrum::Infinite)
                infinite_hi = mid;
            else
                below_infinite = mid;
        }
    }
    out.iv = Interval{finite_lo, infinite_hi};
    if (!std::isfinite(infinite_hi)) out.kind = SBracket::Kind::infinite;
    return out;
}

// Two independent integrations of the same flow: the log-derivative
// theta2 = -u'/(t u) obeys theta2' = t (theta2^2 + sin^2 phi), while the
// shooting angle gives -u'/(t u) = -cot(psi)/t directly. Returns the largest
// absolute disagreement over [a, X]; throws if u vanishes there.
inline double riccati_crosscheck(const CoefficientField& f0, double t, double a,
                                 double X, const ode::StepPolicy& pol_in = {}) {
    CoefficientField f = detail::shootable_form(f0);
    detail::require_shootable(f, t);
    if (!(t > 0.0)) throw std::invalid_argument("riccati_crosscheck: t must be > 0");
    if (!(0.0 < a && a < X))
        throw std::invalid_argument("riccati_crosscheck: need 0 < a < X");

    ode::StepPolicy pol = pol_in;
    pol.rtol = std::min(pol.rtol, 1e-10);
    pol.atol = std::min(pol.atol, 1e-14);

    auto psi_rhs = [&f, t](double x, double psi) {
        double c = std::cos(psi), s = std::sin(psi);
        double sp = std::sin(f.phi(x));
        return c * c + (t * sp) * (t * sp) * s * s;
    };
    auto riccati_rhs = [&f, t](double x, double th) {
        double sp = std::sin(f.phi(x));
        return t * (th * th + sp * sp);
    };

    // u vanishes exactly when floor(psi/pi) steps; the fold alone cannot see
    // a crossing because offsets stay well inside (-pi, pi).
    auto zcount = [](const AngleState& s) { return s.branch + (s.offset < 0.0 ? -1 : 0); };

    // Bring psi to a; theta2 starts from the shooting solution there.
    AngleState psi;
    std::int64_t winding = 0;
    psi.offset = ode::integrate(psi_rhs, 0.0, a, 0.0, pol, nullptr,
                                detail::make_fold_hook(winding));
    psi.branch = winding;
    double theta2 = -std::cos(psi.value()) / (t * std::sin(psi.value()));
    if (!std::isfinite(theta2))
        throw std::domain_error("riccati_crosscheck: u vanishes at a");

    double residual = 0.0;
    double x = a;
    for (double x1 : log_spaced(a, X, 33)) {
        if (!(x1 > x)) continue;
        long long z0 = zcount(psi);
        std::int64_t turns = 0;
        psi.offset = ode::integrate(psi_rhs, x, x1, psi.offset, pol, nullptr,
                                    detail::make_fold_hook(turns));
        psi.branch += turns;
        if (zcount(psi) != z0)
            throw std::domain_error("riccati_crosscheck: u vanishes inside [a, X]");
        theta2 = ode::integrate(riccati_rhs, x, x1, theta2, pol);
        double from_psi = -std::cos(psi.value()) / (t * std::sin(psi.value()));
        residual = std::max(residual, std::abs(theta2 - from_psi));
        x = x1;
    }
    return residual;
}

} // namespace specedge
