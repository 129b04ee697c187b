#pragma once

// Built-in coefficient field families. Every family fixes its own metadata
// (exact tails, time changes, declared integrable direction) so the spectral
// machinery can run certificates instead of guessing.

#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "field.hpp"

namespace specedge {

struct FamilyParams {
    std::optional<double> c = {};   // power_tail amplitude, sin^2 phi(0)
    std::optional<double> p = {};   // power_tail decay exponent
    std::optional<double> g = {};   // constant coupling
    std::optional<double> phi = {}; // constant_H angle
    std::optional<GridTable> grid = {};
};

inline CoefficientField make_grid_field(GridTable table) {
    if (table.cells.empty())
        throw std::invalid_argument("grid field: table must be nonempty");
    if (table.cells.front().x != 0.0)
        throw std::invalid_argument("grid field: first cell must start at x = 0");
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        auto& c = table.cells[i];
        if (i > 0 && !(c.x > table.cells[i - 1].x))
            throw std::invalid_argument("grid field: cell starts must increase");
        if (!(c.g >= 0.0 && c.g <= 1.0))
            throw std::invalid_argument("grid field: g must lie in [0, 1]");
        if (!(c.trace > 0.0))
            throw std::invalid_argument("grid field: trace must be positive");
        c.phi = reduce_phi(c.phi);
    }
    auto cells = std::make_shared<const GridTable>(std::move(table));

    auto cell_at = [cells](double x) -> const GridCell& {
        const auto& v = cells->cells;
        std::size_t lo = 0, hi = v.size();
        while (hi - lo > 1) {
            std::size_t m = (lo + hi) / 2;
            (v[m].x <= x ? lo : hi) = m;
        }
        return v[lo];
    };

    CoefficientField f;
    f.phi = [cell_at](double x) { return cell_at(x).phi; };
    f.g = [cell_at](double x) { return cell_at(x).g; };
    bool normed = true, diag = true;
    for (const auto& c : cells->cells) {
        if (std::abs(c.trace - 1.0) > 1e-15) normed = false;
        if (c.g != 0.0 && std::sin(c.phi) * std::cos(c.phi) != 0.0) diag = false;
    }
    f.trace_normed = normed;
    if (!normed) {
        f.trace = [cell_at](double x) { return cell_at(x).trace; };
        // Piecewise-linear time change, exactly invertible per cell.
        auto starts = std::make_shared<std::vector<double>>();
        starts->reserve(cells->cells.size());
        double s = 0.0;
        for (std::size_t i = 0; i < cells->cells.size(); ++i) {
            starts->push_back(s);
            if (i + 1 < cells->cells.size())
                s += cells->cells[i].trace * (cells->cells[i + 1].x - cells->cells[i].x);
        }
        TimeChange tc;
        tc.s_of_x = [cells, starts](double x) {
            const auto& v = cells->cells;
            std::size_t lo = 0, hi = v.size();
            while (hi - lo > 1) {
                std::size_t m = (lo + hi) / 2;
                (v[m].x <= x ? lo : hi) = m;
            }
            return (*starts)[lo] + v[lo].trace * (x - v[lo].x);
        };
        tc.x_of_s = [cells, starts](double s) {
            const auto& v = cells->cells;
            std::size_t lo = 0, hi = starts->size();
            while (hi - lo > 1) {
                std::size_t m = (lo + hi) / 2;
                ((*starts)[m] <= s ? lo : hi) = m;
            }
            return v[lo].x + (s - (*starts)[lo]) / v[lo].trace;
        };
        f.time_change = tc;
    }
    f.diagonal = diag;
    f.grid = cells;
    // Trailing run of cells with sin phi == 0 gives a hard support bound.
    double support_end = kInf;
    for (auto it = cells->cells.rbegin(); it != cells->cells.rend(); ++it) {
        if (std::sin(it->phi) == 0.0)
            support_end = it->x;
        else
            break;
    }
    if (std::isfinite(support_end)) {
        f.sin_phi_support_end = support_end;
        f.l2_direction_ok = true;
    }
    f.name = "grid_sampled";
    return f;
}

namespace detail {

inline CoefficientField power_tail_field(double c, double p, double g) {
    if (!(c >= 0.0 && c <= 1.0))
        throw std::invalid_argument("power_tail: c must lie in [0, 1]");
    if (!(p > 1.0))
        throw std::invalid_argument("power_tail: p must exceed 1 (integrable channel)");
    if (!(g >= 0.0 && g <= 1.0))
        throw std::invalid_argument("power_tail: g must lie in [0, 1]");
    CoefficientField f;
    f.phi = [c, p](double x) { return std::asin(std::sqrt(c * std::pow(1.0 + x, -p))); };
    f.g = [g](double) { return g; };
    f.trace_normed = true;
    f.diagonal = (g == 0.0);
    f.l2_direction_ok = true;
    {
        char buf[64];
        if (g != 0.0)
            std::snprintf(buf, sizeof buf, "power_tail(c=%g,p=%g,g=%g)", c, p, g);
        else
            std::snprintf(buf, sizeof buf, "power_tail(c=%g,p=%g)", c, p);
        f.name = buf;
    }

    AnalyticTail tail;
    tail.W = [c, p](double x) { return c / (p - 1.0) * std::pow(1.0 + x, 1.0 - p); };
    if (p == 2.0) {
        tail.A_exact = c;
        tail.B_exact = c;
    } else if (p > 2.0) {
        tail.A_exact = 0.0;
        tail.B_exact = 0.0;
    } else {
        tail.A_exact = kInf;
        tail.B_exact = kInf;
    }
    // x * W(x) = c/(p-1) * x * (1+x)^(1-p): increasing for p <= 2, and for
    // p > 2 unimodal with maximum at x* = 1/(p-2).
    tail.sup_sW_from = [c, p, W = tail.W](double a) {
        a = std::max(a, 0.0);
        if (p <= 2.0) return (p == 2.0) ? c : kInf;
        double xstar = 1.0 / (p - 2.0);
        double at = std::max(a, xstar);
        return at * W(at);
    };
    if (c == 0.0) {
        tail.A_exact = tail.B_exact = 0.0;
        tail.sup_sW_from = [](double) { return 0.0; };
        f.sin_phi_support_end = 0.0;
    }
    f.tail = std::move(tail);
    return f;
}

inline CoefficientField section5_aligned_field() {
    // [[e^-x, -1], [-1, e^x]]: the rank-one exponential system rotated so the
    // integrable channel sits first. Same spectral data as `section5`.
    CoefficientField f;
    f.phi = [](double x) { return -std::atan(std::exp(-x)); };
    f.g = [](double) { return 1.0; };
    f.trace_normed = false;
    f.trace = [](double x) { return 2.0 * std::cosh(x); };
    f.time_change = TimeChange{
        [](double x) { return 2.0 * std::sinh(x); },
        [](double s) { return std::asinh(0.5 * s); },
    };
    AnalyticTail tail;
    tail.W = [](double x) { return std::exp(-x); };
    tail.A_exact = 1.0;
    tail.B_exact = 1.0;
    // s * W(s(x)) = 2 sinh(x) e^-x increases to 1.
    tail.sup_sW_from = [](double) { return 1.0; };
    f.tail = std::move(tail);
    f.l2_direction_ok = true;
    f.diagonal = false;
    f.name = "section5_aligned";
    return f;
}

inline CoefficientField section5_field() {
    // [[e^x, 1], [1, e^-x]]; rank one, trace 2 cosh x. The integrable
    // direction is the second axis, declared rather than inferred.
    CoefficientField f;
    f.phi = [](double x) { return kPi / 2.0 - std::atan(std::exp(-x)); };
    f.g = [](double) { return 1.0; };
    f.trace_normed = false;
    f.trace = [](double x) { return 2.0 * std::cosh(x); };
    f.time_change = TimeChange{
        [](double x) { return 2.0 * std::sinh(x); },
        [](double s) { return std::asinh(0.5 * s); },
    };
    f.l2_direction_ok = false;
    f.l2_direction = std::array<double, 2>{0.0, 1.0};
    f.aligned_form = []() { return section5_aligned_field(); };
    f.diagonal = false;
    f.name = "section5";
    return f;
}

inline CoefficientField section5_diagonal_field() {
    // diag(e^-x, e^x): the diagonal part of the aligned exponential system.
    CoefficientField f;
    f.phi = [](double x) { return std::atan(std::exp(-x)); };
    f.g = [](double) { return 0.0; };
    f.trace_normed = false;
    f.trace = [](double x) { return 2.0 * std::cosh(x); };
    f.time_change = TimeChange{
        [](double x) { return 2.0 * std::sinh(x); },
        [](double s) { return std::asinh(0.5 * s); },
    };
    AnalyticTail tail;
    tail.W = [](double x) { return std::exp(-x); };
    tail.A_exact = 1.0;
    tail.B_exact = 1.0;
    tail.sup_sW_from = [](double) { return 1.0; };
    f.tail = std::move(tail);
    f.l2_direction_ok = true;
    f.diagonal = true;
    f.name = "section5_diagonal";
    return f;
}

inline CoefficientField constant_field(double phi, double g) {
    GridTable t;
    t.cells.push_back({0.0, phi, g, 1.0});
    CoefficientField f = make_grid_field(std::move(t));
    f.name = "constant_H";
    if (std::sin(reduce_phi(phi)) == 0.0) {
        AnalyticTail tail;
        tail.W = [](double) { return 0.0; };
        tail.sup_sW_from = [](double) { return 0.0; };
        f.tail = std::move(tail);
    }
    return f;
}

} // namespace detail

inline CoefficientField builtin_family(std::string_view name,
                                       const FamilyParams& params = {}) {
    if (name == "power_tail")
        return detail::power_tail_field(params.c.value_or(1.0), params.p.value_or(2.0),
                                        params.g.value_or(0.0));
    if (name == "section5") return detail::section5_field();
    if (name == "section5_diagonal") return detail::section5_diagonal_field();
    if (name == "zero_phi") {
        CoefficientField f = detail::constant_field(0.0, 0.0);
        f.name = "zero_phi";
        AnalyticTail tail;
        tail.W = [](double) { return 0.0; };
        tail.A_exact = 0.0;
        tail.B_exact = 0.0;
        tail.sup_sW_from = [](double) { return 0.0; };
        f.tail = std::move(tail);
        return f;
    }
    if (name == "constant_H")
        return detail::constant_field(params.phi.value_or(kPi / 4.0),
                                      params.g.value_or(0.0));
    if (name == "grid_sampled") {
        if (!params.grid)
            throw std::invalid_argument("grid_sampled: needs a sample table");
        return make_grid_field(*params.grid);
    }
    throw std::invalid_argument("unknown family: " + std::string(name));
}

// CSV loader for grid fields. Header `x,phi,g` or `x,phi,g,trace`; rows sorted
// by x with the first at 0.
inline GridTable load_grid_csv(std::istream& in) {
    GridTable table;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("x,", 0) == 0) continue; // skip header row
        }
        std::istringstream row(line);
        GridCell cell;
        char comma = ',';
        if (!(row >> cell.x >> comma >> cell.phi >> comma >> cell.g))
            throw std::runtime_error("grid csv: malformed row " + std::to_string(lineno));
        if (row >> comma >> cell.trace) {
            // optional trace column
        } else {
            cell.trace = 1.0;
        }
        table.cells.push_back(cell);
    }
    if (table.cells.empty()) throw std::runtime_error("grid csv: no rows");
    return table;
}

} // namespace specedge
