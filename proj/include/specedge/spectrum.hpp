#pragma once

// Oscillation classification and the spectral-edge bracket.
//
// For t != 0 the system is either oscillatory at t (theta gains infinitely
// many pi's) or not; the oscillatory t > 0 form an upward-closed set, so the
// positive edge of the essential spectrum is the infimum of oscillatory t.
// Numerically we can only ever *observe* oscillation (enough angle gained)
// or *certify* non-oscillation (a tail criterion), so a threshold comes back
// as a bracket: [largest certified non-oscillatory t, smallest observed
// oscillatory t]. Anything between is honestly inconclusive.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "ode.hpp"
#include "prufer.hpp"

namespace specedge {

enum class Oscillation { NonOscillatory, Oscillatory, Inconclusive };

inline const char* to_string(Oscillation v) {
    switch (v) {
        case Oscillation::NonOscillatory: return "non-oscillatory";
        case Oscillation::Oscillatory: return "oscillatory";
        default: return "inconclusive";
    }
}

struct ClassifyPolicy {
    double theta0 = 0.0;
    double x_first = 10.0;   // end of the first window
    double x_max = 1e8;      // horizon; windows double until they reach it
    double plateau_eps = 1e-4;
    double transit_gain = 1.0;          // |window gain| that counts as a zero crossing
    double window_osc_gain = 2.0 * kPi; // final-window |gain| alone
    // Two transits contribute ~2*pi, but the initial transient can eat a
    // fraction of a radian, so demand a bit less than 2*pi to avoid a
    // knife-edge comparison.
    double total_osc_gain = 5.5; // cumulative |gain|, needs recurring transits
    // A transit sequence counts as recurring when the gap between the last
    // transit and the horizon is at most this multiple of the largest gap
    // between consecutive transits (plus one window of slack).
    double recurrence_margin = 1.25;
    double hard_total_gain = 200.0 * kPi; // compute guard
    // Diagnostic switch: ignore the analytic tail criteria and judge from the
    // windowed integration alone (exposes the honest inconclusive band).
    bool use_certificates = true;
    // No absolute error floor: between transits the angle offset legitimately
    // sits at ~1/x, and an atol above that would erase the phase that times
    // the next transit.
    ode::StepPolicy step = [] {
        ode::StepPolicy p;
        p.atol = 0.0;
        return p;
    }();
};

struct WindowRecord {
    double x0, x1;
    double gain;
};

struct OscillationVerdict {
    Oscillation value = Oscillation::Inconclusive;
    double t = 0.0;
    double total_gain = 0.0; // sum of |window gains|
    std::vector<WindowRecord> windows;
    bool plateaued = false;
    bool exact_grid = false;
    bool growth_certificate = false;      // liminf tail test proved oscillation
    std::optional<double> certificate_at; // window start where the sup tail test fired
    std::string note;
};

namespace detail {

// Hille-type tail test. For a trace-normed diagonal field, the system is
// non-oscillatory at t whenever t^2 * sup_{s>=a} s*W(s) < 1/4 for some a,
// W(s) = integral of h11 over [s, inf). A coupled field oscillating at t
// forces its diagonal part to oscillate at 2t, which turns the same test
// with 4t^2 into a certificate for the full field.
inline bool tail_certificate(const CoefficientField& f, double t, double a) {
    if (!f.tail || !f.trace_normed || !f.l2_direction_ok) return false;
    if (!f.tail->sup_sW_from) return false;
    double factor = f.diagonal ? t * t : 4.0 * t * t;
    double s = f.tail->sup_sW_from(std::max(a, 0.0));
    return std::isfinite(s) && factor * s < 0.25;
}

// Converse tail test, diagonal fields only: liminf s*W(s) strictly above
// 1/(4 t^2) forces oscillation at t.
inline bool growth_certificate(const CoefficientField& f, double t) {
    if (!f.diagonal || !f.tail || !f.trace_normed || !f.l2_direction_ok) return false;
    double B = f.tail->B_exact;
    return B > 0.25 / (t * t); // false for NaN
}

inline std::vector<double> dyadic_checkpoints(double x_first, double x_max) {
    std::vector<double> cs{0.0};
    double x = x_first;
    while (x < x_max) {
        cs.push_back(x);
        x *= 2.0;
    }
    cs.push_back(x_max);
    return cs;
}

inline OscillationVerdict classify_grid(const CoefficientField& f, double t,
                                        const ClassifyPolicy& pol) {
    OscillationVerdict out;
    out.t = t;
    out.exact_grid = true;
    const GridCell& last = f.grid->cells.back();
    HMatrix H = from_phi_g(last.phi, last.g, last.trace);
    auto cc = ode::cell_coefficients(H.h11, H.h12, H.h22);
    if (!cc.rank_one()) {
        out.value = Oscillation::Oscillatory;
        out.note = "final cell has positive determinant: angle grows without bound";
    } else {
        out.value = Oscillation::NonOscillatory;
        out.note = "final cell is rank one: at most one more zero past its start";
    }
    // Evidence trajectory (the verdict above is decided by the cell algebra).
    double span = std::min(pol.x_max, 16.0 * std::max(1.0, last.x));
    double th = pol.theta0, x0 = 0.0;
    for (double x1 : dyadic_checkpoints(std::min(pol.x_first, span), span)) {
        if (x1 <= x0) continue;
        double th1 = detail::advance_theta_grid(f, t, x0, x1, th);
        out.windows.push_back({x0, x1, th1 - th});
        out.total_gain += std::abs(th1 - th);
        th = th1;
        x0 = x1;
        if (out.total_gain >= pol.hard_total_gain) break;
    }
    if (!out.windows.empty())
        out.plateaued = std::abs(out.windows.back().gain) <= pol.plateau_eps;
    return out;
}

} // namespace detail

inline OscillationVerdict classify(const CoefficientField& f, double t,
                                   const ClassifyPolicy& pol = {}) {
    if (t == 0.0 || !std::isfinite(t))
        throw std::invalid_argument("classify: t must be finite and nonzero");
    if (f.grid) return detail::classify_grid(f, t, pol);
    // Oscillation is invariant under constant rotations and under the time
    // change. Route through the aligned form when the integrable channel sits
    // off-axis (the tail certificates only see h11), and integrate in the
    // normalized variable (raw traces can grow exponentially).
    if (!f.l2_direction_ok && f.aligned_form) {
        CoefficientField a = f.aligned_form();
        if (a.l2_direction_ok) return classify(a, t, pol);
    }
    if (!f.trace_normed) return classify(trace_normalize(f), t, pol);

    OscillationVerdict out;
    out.t = t;
    if (pol.use_certificates && detail::growth_certificate(f, t)) {
        out.value = Oscillation::Oscillatory;
        out.growth_certificate = true;
        out.note = "liminf tail criterion certifies oscillation";
        return out;
    }
    auto checkpoints = detail::dyadic_checkpoints(pol.x_first, pol.x_max);
    AngleState a = AngleState::from_theta(pol.theta0);

    // Slow oscillation is log-periodic: isolated pi-sized transits separated
    // by long creep phases, and the dyadic windows beat against them. The
    // final window alone is therefore meaningless; the verdict looks at
    // whether transits keep recurring all the way to the horizon actually
    // reached, at the spacing they themselves establish.
    auto settle = [&pol](OscillationVerdict& v) {
        const auto& w = v.windows;
        double last_gain = w.empty() ? 0.0 : std::abs(w.back().gain);
        v.plateaued = last_gain <= pol.plateau_eps;

        if (last_gain >= pol.window_osc_gain) {
            v.value = Oscillation::Oscillatory;
            v.note = "final window gains a full rotation on its own";
            return;
        }
        std::vector<double> transit_u;
        for (const auto& win : w)
            if (std::abs(win.gain) >= pol.transit_gain)
                transit_u.push_back(std::log(std::max(win.x1, 1.0)));
        if (transit_u.size() >= 2 && v.total_gain >= pol.total_osc_gain) {
            const double win_u = std::log(2.0); // one dyadic window, log scale
            double max_gap = 2.0 * win_u;
            for (std::size_t i = 1; i < transit_u.size(); ++i)
                max_gap = std::max(max_gap, transit_u[i] - transit_u[i - 1]);
            double horizon_u = std::log(std::max(w.back().x1, 1.0));
            if (horizon_u - transit_u.back() <=
                pol.recurrence_margin * max_gap + win_u) {
                v.value = Oscillation::Oscillatory;
                v.note = "zero crossings recur through the horizon at a steady "
                         "log-periodic spacing";
                return;
            }
        }
        v.value = Oscillation::Inconclusive;
        v.note = v.plateaued
                     ? "angle flattened out but no certificate applies at this horizon"
                     : "angle gains too little and transits stop early: transient "
                       "or horizon too short";
    };

    for (std::size_t k = 0; k + 1 < checkpoints.size(); ++k) {
        double x0 = checkpoints[k], x1 = checkpoints[k + 1];
        if (pol.use_certificates && detail::tail_certificate(f, t, x0)) {
            out.value = Oscillation::NonOscillatory;
            out.certificate_at = x0;
            out.note = "tail criterion certifies no oscillation beyond the window start";
            return out;
        }
        if (f.sin_phi_support_end && x0 >= *f.sin_phi_support_end) {
            out.value = Oscillation::NonOscillatory;
            out.note = "coefficient support ends: at most one more zero beyond it";
            return out;
        }
        AngleState a1;
        try {
            a1 = advance_angle(f, t, x0, x1, a, pol.step);
        } catch (const ode::StiffnessError& e) {
            // Judge what was reachable; oscillation may already be settled.
            settle(out);
            if (out.value != Oscillation::Oscillatory) {
                out.value = Oscillation::Inconclusive;
                out.note = std::string("integrator gave up: ") + e.what();
            }
            return out;
        }
        double gain = angle_gain(a, a1);
        out.windows.push_back({x0, x1, gain});
        out.total_gain += std::abs(gain);
        a = a1;

        if (out.total_gain >= pol.hard_total_gain) {
            // Compute guard. Growing window gains are genuine oscillation;
            // a decaying tail of gains is a transient we cannot outrun here.
            auto n = out.windows.size();
            bool growing = n >= 2 && std::abs(out.windows[n - 1].gain) >=
                                         0.9 * std::abs(out.windows[n - 2].gain);
            out.value = growing ? Oscillation::Oscillatory : Oscillation::Inconclusive;
            out.note = growing ? "angle gain cap reached with non-decaying windows"
                               : "angle gain cap reached inside a decaying transient";
            return out;
        }
    }

    settle(out);
    return out;
}

// --- threshold bracketing --------------------------------------------------

struct ThresholdPolicy {
    double t_min = 1e-3;
    double t_max = 4.0;
    double resolution_rel = 1e-2; // stop when hi - lo <= rel * hi
    std::size_t max_probes = 200;
};

struct ProbeRecord {
    double t; // signed
    Oscillation verdict;
};

class ThresholdError : public std::runtime_error {
public:
    ThresholdError(const std::string& msg, std::vector<ProbeRecord> probes)
        : std::runtime_error(msg), probes_(std::move(probes)) {}
    const std::vector<ProbeRecord>& probes() const { return probes_; }

private:
    std::vector<ProbeRecord> probes_;
};

struct ThresholdBracket {
    enum class Kind { bracket, infinite, unresolved_above };
    Interval iv = Interval::infinite(); // |t| units
    Kind kind = Kind::bracket;
    bool lo_verified = false;     // lo comes from a certificate / exact verdict
    bool collapsed_to_zero = false;
    double searched_up_to = 0.0;
    std::vector<ProbeRecord> probes;
};

// Bracket the smallest |t| of the given sign at which the system oscillates.
inline ThresholdBracket oscillatory_threshold(const CoefficientField& f, int sign,
                                              const ClassifyPolicy& cpol = {},
                                              const ThresholdPolicy& tpol = {}) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("oscillatory_threshold: sign must be +1 or -1");
    if (!(tpol.t_min > 0.0 && tpol.t_max > tpol.t_min))
        throw std::invalid_argument("oscillatory_threshold: need 0 < t_min < t_max");

    ThresholdBracket out;
    out.searched_up_to = tpol.t_max;
    std::map<double, Oscillation> cache;
    auto probe = [&](double mag) {
        auto it = cache.find(mag);
        if (it != cache.end()) return it->second;
        if (out.probes.size() >= tpol.max_probes)
            throw ThresholdError("oscillatory_threshold: probe budget exhausted",
                                 out.probes);
        Oscillation v = classify(f, sign * mag, cpol).value;
        cache.emplace(mag, v);
        out.probes.push_back({sign * mag, v});
        return v;
    };

    std::optional<double> nonosc_lo;  // largest certified non-oscillatory
    std::optional<double> above_lo;   // smallest probe that is not non-oscillatory
    std::optional<double> osc_hi;     // smallest observed oscillatory
    std::optional<double> below_hi;   // largest probe below osc_hi that is not osc
    auto note = [&](double mag, Oscillation v) {
        if (v == Oscillation::NonOscillatory) {
            if (!nonosc_lo || mag > *nonosc_lo) nonosc_lo = mag;
            if (!below_hi || mag > *below_hi) below_hi = mag;
        } else {
            if (!above_lo || mag < *above_lo) above_lo = mag;
            if (v == Oscillation::Oscillatory) {
                if (!osc_hi || mag < *osc_hi) osc_hi = mag;
            } else if (!below_hi || mag > *below_hi) {
                below_hi = mag;
            }
        }
    };

    Oscillation v_min = probe(tpol.t_min);
    note(tpol.t_min, v_min);

    if (v_min == Oscillation::Oscillatory) {
        // Oscillation persists to tiny t: chase it down; the edge may be 0.
        double t = tpol.t_min, last_osc = tpol.t_min;
        while (t > 1e-12) {
            t *= 0.25;
            Oscillation v = probe(t);
            note(t, v);
            if (v != Oscillation::Oscillatory) break;
            last_osc = t;
        }
        if (t <= 1e-12) {
            out.iv = Interval{0.0, last_osc};
            out.kind = ThresholdBracket::Kind::bracket;
            out.collapsed_to_zero = true;
            out.lo_verified = true;
            return out;
        }
    }

    Oscillation v_max = probe(tpol.t_max);
    note(tpol.t_max, v_max);
    if (v_max == Oscillation::NonOscillatory) {
        out.kind = ThresholdBracket::Kind::infinite;
        out.iv = Interval::infinite();
        out.lo_verified = true;
        return out;
    }

    if (!nonosc_lo && !osc_hi) {
        // Nothing but inconclusive anchors so far: scan for any foothold.
        for (double m : log_spaced(tpol.t_min, tpol.t_max, 9)) {
            Oscillation v = probe(m);
            note(m, v);
        }
        if (!nonosc_lo && !osc_hi)
            throw ThresholdError(
                "oscillatory_threshold: every probe inconclusive; raise the horizon",
                out.probes);
    }

    // Boundary of the certified (non-oscillatory) region.
    if (nonosc_lo) {
        double lo = *nonosc_lo;
        double hi = above_lo.value_or(tpol.t_max);
        while (hi - lo > tpol.resolution_rel * hi &&
               out.probes.size() < tpol.max_probes) {
            double mid = 0.5 * (lo + hi);
            Oscillation v = probe(mid);
            note(mid, v);
            if (v == Oscillation::NonOscillatory)
                lo = mid;
            else
                hi = mid;
        }
        nonosc_lo = lo;
    }

    // Boundary of the observed (oscillatory) region.
    if (osc_hi) {
        double hi = *osc_hi;
        double lo = 0.0;
        if (below_hi && *below_hi < hi) lo = *below_hi;
        while (hi - lo > tpol.resolution_rel * hi &&
               out.probes.size() < tpol.max_probes) {
            double mid = 0.5 * (lo + hi);
            Oscillation v = probe(mid);
            note(mid, v);
            if (v == Oscillation::Oscillatory)
                hi = mid;
            else
                lo = mid;
        }
        osc_hi = hi;
    }

    out.lo_verified = nonosc_lo.has_value();
    double lo = nonosc_lo.value_or(0.0);
    if (osc_hi) {
        out.kind = ThresholdBracket::Kind::bracket;
        out.iv = Interval{lo, *osc_hi};
    } else {
        out.kind = ThresholdBracket::Kind::unresolved_above;
        out.iv = Interval{lo, kInf};
    }
    return out;
}

// --- two-sided edge estimate ------------------------------------------------

enum class ZeroInEss { yes, no, unknown };

inline const char* to_string(ZeroInEss v) {
    switch (v) {
        case ZeroInEss::yes: return "yes";
        case ZeroInEss::no: return "no";
        default: return "unknown";
    }
}

struct SpectralEstimate {
    Interval m = Interval::infinite(); // bracket for min |t| in the essential spectrum
    ThresholdBracket positive, negative;
    ZeroInEss zero_in_ess = ZeroInEss::unknown;
    std::string field; // name of the field this was measured on
};

inline SpectralEstimate m_estimate(const CoefficientField& f,
                                   const ClassifyPolicy& cpol = {},
                                   const ThresholdPolicy& tpol = {}) {
    SpectralEstimate out;
    out.field = f.name;
    out.positive = oscillatory_threshold(f, +1, cpol, tpol);
    out.negative = oscillatory_threshold(f, -1, cpol, tpol);
    out.m = min_interval(out.positive.iv, out.negative.iv);

    auto side_positive = [](const ThresholdBracket& b) {
        return b.kind == ThresholdBracket::Kind::infinite ||
               (b.lo_verified && b.iv.lo > 0.0);
    };
    if (out.positive.collapsed_to_zero || out.negative.collapsed_to_zero)
        out.zero_in_ess = ZeroInEss::yes;
    else if (side_positive(out.positive) && side_positive(out.negative))
        out.zero_in_ess = ZeroInEss::no;
    else
        out.zero_in_ess = ZeroInEss::unknown;
    return out;
}

// Diagonal systems see t and -t identically; the two brackets must agree.
struct DiagonalSymmetry {
    ThresholdBracket positive, negative;
    bool overlap = false;
};

inline DiagonalSymmetry diagonal_symmetry_check(const CoefficientField& f,
                                                const ClassifyPolicy& cpol = {},
                                                const ThresholdPolicy& tpol = {}) {
    if (!f.diagonal)
        throw std::invalid_argument("diagonal_symmetry_check: field is not diagonal");
    for (double x : {0.0, 1.0, 5.0, 17.0, 123.0})
        if (std::abs(f.g(x)) > 1e-15)
            throw std::invalid_argument("diagonal_symmetry_check: g(x) != 0");
    DiagonalSymmetry out;
    out.positive = oscillatory_threshold(f, +1, cpol, tpol);
    out.negative = oscillatory_threshold(f, -1, cpol, tpol);
    out.overlap = out.positive.iv.overlaps(out.negative.iv);
    return out;
}

} // namespace specedge
