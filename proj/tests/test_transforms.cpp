#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <specedge/families.hpp>
#include <specedge/transforms.hpp>

using namespace specedge;

namespace {

CoefficientField smooth_sample(double p0, double pa, double g0, double ga,
                               double t0, double ta) {
    CoefficientField f;
    f.name = "smooth_sample";
    f.phi = [=](double x) { return p0 + pa * std::sin(x); };
    f.g = [=](double x) {
        double v = g0 + ga * std::cos(0.7 * x);
        return std::clamp(v, 0.0, 1.0);
    };
    f.trace = [=](double x) { return t0 + ta * std::sin(0.3 * x); };
    f.trace_normed = false;
    return f;
}

} // namespace

TEST_CASE("rotation is a pointwise congruence", "[transforms]") {
    std::mt19937_64 rng(911u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        auto f = smooth_sample(-1.5 + 3.0 * u01(rng), 0.6 * u01(rng), u01(rng),
                               0.3 * u01(rng), 0.4 + 2.0 * u01(rng), 0.3 * u01(rng));
        double alpha = -3.0 + 6.0 * u01(rng);
        double x = 5.0 * u01(rng);
        double theta = -3.0 + 6.0 * u01(rng);
        auto r = rotate(f, alpha);

        HMatrix h0 = h_at(f, x), h1 = h_at(r, x);
        double tau = h0.trace();
        // Trace and spectrum cannot move; the form transports along the turn.
        CHECK(std::abs(h1.trace() - tau) < 1e-12 * tau);
        CHECK(std::abs(h1.eig_min() - h0.eig_min()) < 1e-12 * tau);
        CHECK(std::abs(h1.eig_max() - h0.eig_max()) < 1e-12 * tau);
        CHECK(std::abs(h1.quad_form(theta) - h0.quad_form(theta + alpha)) < 1e-12 * tau);

        // Undoing the turn restores the entries, not just the invariants.
        HMatrix h2 = h_at(rotate(r, -alpha), x);
        CHECK(std::abs(h2.h11 - h0.h11) < 1e-12 * tau);
        CHECK(std::abs(h2.h12 - h0.h12) < 1e-12 * tau);
        CHECK(std::abs(h2.h22 - h0.h22) < 1e-12 * tau);
    }
}

TEST_CASE("rotation edge cases", "[transforms]") {
    auto f = smooth_sample(0.4, 0.3, 0.5, 0.4, 1.5, 0.5);
    // alpha = 0 returns the field unchanged, name included.
    auto same = rotate(f, 0.0);
    CHECK(same.name == f.name);
    CHECK(h_at(same, 2.0).h12 == h_at(f, 2.0).h12);

    // A quarter turn swaps the diagonal channels of a diagonal field.
    auto d = builtin_family("section5_diagonal");
    auto q = rotate(d, kPi / 2.0);
    for (double x : {0.0, 0.5, 1.0, 2.0}) {
        HMatrix hd = h_at(d, x), hq = h_at(q, x);
        CHECK(std::abs(hq.h11 - hd.h22) < 1e-12 * hd.trace());
        CHECK(std::abs(hq.h22 - hd.h11) < 1e-12 * hd.trace());
        CHECK(std::abs(hq.h12) < 1e-12 * hd.trace());
    }
    // The integrable channel moved off the first axis, but an exact way back
    // is recorded.
    CHECK(!q.l2_direction_ok);
    REQUIRE(q.aligned_form);
    auto back = q.aligned_form();
    CHECK(back.l2_direction_ok);
    CHECK(std::abs(h_at(back, 1.0).h11 - h_at(d, 1.0).h11) < 1e-12);
}

TEST_CASE("rotating a grid yields a grid", "[transforms]") {
    GridTable t;
    t.cells = {{0.0, 0.3, 0.2, 1.0}, {1.0, -0.8, 0.7, 2.0}, {3.0, 1.1, 0.0, 0.5}};
    auto f = make_grid_field(std::move(t));
    auto r = rotate(f, 0.4);
    REQUIRE(r.grid);
    REQUIRE(r.grid->cells.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(r.grid->cells[i].x == f.grid->cells[i].x);
    for (double x : {0.2, 1.7, 4.0}) {
        HMatrix h0 = h_at(f, x), h1 = h_at(r, x);
        CHECK(std::abs(h1.trace() - h0.trace()) < 1e-12 * h0.trace());
        CHECK(std::abs(h1.eig_min() - h0.eig_min()) < 1e-12 * h0.trace());
    }
}

TEST_CASE("aligning the declared integrable direction", "[transforms]") {
    auto f = builtin_family("section5");
    REQUIRE(f.l2_direction.has_value());
    auto a = align_l2_direction(f, *f.l2_direction);
    CHECK(a.l2_direction_ok);

    // Must coincide with the aligned variant the family itself declares.
    REQUIRE(f.aligned_form);
    auto ref = f.aligned_form();
    for (double x : {0.0, 0.5, 1.0, 3.0}) {
        HMatrix ha = h_at(a, x), hr = h_at(ref, x);
        double tau = hr.trace();
        CHECK(std::abs(ha.h11 - hr.h11) < 1e-12 * tau);
        CHECK(std::abs(ha.h12 - hr.h12) < 1e-12 * tau);
        CHECK(std::abs(ha.h22 - hr.h22) < 1e-12 * tau);
    }

    CHECK_THROWS_AS(align_l2_direction(f, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("solution pair to canonical system", "[transforms]") {
    // p = e^{x/2}, q = e^{-x/2}: unit Wronskian, exponential off-diagonal
    // system with constant coupling.
    SchrodingerSolutions sol;
    sol.p = [](double x) { return std::exp(0.5 * x); };
    sol.dp = [](double x) { return 0.5 * std::exp(0.5 * x); };
    sol.q = [](double x) { return std::exp(-0.5 * x); };
    sol.dq = [](double x) { return -0.5 * std::exp(-0.5 * x); };
    auto f = schrodinger_to_canonical(sol);
    CHECK(!f.trace_normed);
    for (double x : {0.0, 1.0, 2.0}) {
        HMatrix h = h_at(f, x);
        CHECK(std::abs(h.h11 - std::exp(x)) < 1e-10 * std::exp(x));
        CHECK(std::abs(h.h12 - 1.0) < 1e-10);
        CHECK(std::abs(h.trace() - 2.0 * std::cosh(x)) < 1e-10 * std::cosh(x));
        // Rank one: the determinant vanishes.
        CHECK(std::abs(h.det()) < 1e-10 * h.trace());
    }

    // Free operator with the pair (x, 1).
    SchrodingerSolutions free_sol;
    free_sol.p = [](double x) { return x; };
    free_sol.dp = [](double) { return 1.0; };
    free_sol.q = [](double) { return 1.0; };
    free_sol.dq = [](double) { return 0.0; };
    auto g = schrodinger_to_canonical(free_sol);
    HMatrix h3 = h_at(g, 3.0);
    CHECK(std::abs(h3.h11 - 9.0) < 1e-12);
    CHECK(std::abs(h3.h12 - 3.0) < 1e-12);
    CHECK(std::abs(h3.h22 - 1.0) < 1e-12);

    // Same solution twice: Wronskian 0, rejected up front.
    SchrodingerSolutions bad = free_sol;
    bad.q = bad.p;
    bad.dq = bad.dp;
    CHECK_THROWS_AS(schrodinger_to_canonical(bad), std::invalid_argument);
    SchrodingerSolutions missing;
    missing.p = free_sol.p;
    CHECK_THROWS_AS(schrodinger_to_canonical(missing), std::invalid_argument);
}

TEST_CASE("dirac potential of a determinant-one diagonal field", "[transforms]") {
    // diag(e^x, e^-x) with the exact derivative: W = 1/2 identically.
    CoefficientField f;
    f.name = "exp_diag";
    f.phi = [](double x) { return std::atan(std::exp(x)); };
    f.g = [](double) { return 0.0; };
    f.trace = [](double x) { return 2.0 * std::cosh(x); };
    f.trace_normed = false;
    f.diagonal = true;
    auto d = diagonal_to_dirac(f, [](double x) { return std::exp(x); });
    for (double x : {0.0, 1.0, 5.0, 20.0, 40.0})
        CHECK(std::abs(d.W_dirac(x) - 0.5) < 1e-12);

    // diag(1+x, 1/(1+x)) through the finite-difference fallback.
    CoefficientField g;
    g.name = "linear_diag";
    g.phi = [](double x) { return std::atan(1.0 + x); };
    g.g = [](double) { return 0.0; };
    g.trace = [](double x) { return (1.0 + x) + 1.0 / (1.0 + x); };
    g.trace_normed = false;
    g.diagonal = true;
    auto dg = diagonal_to_dirac(g);
    for (double x : {0.0, 0.5, 2.0, 7.0})
        CHECK(std::abs(dg.W_dirac(x) - 0.5 / (1.0 + x)) < 1e-8);

    // Constant field: zero potential, exactly.
    CoefficientField c;
    c.name = "flat_diag";
    c.phi = [](double) { return kPi / 4.0; };
    c.g = [](double) { return 0.0; };
    c.trace = [](double) { return 2.0; };
    c.trace_normed = false;
    c.diagonal = true;
    CHECK(diagonal_to_dirac(c).W_dirac(1.0) == 0.0);

    // Rejections: coupling present, determinant != 1, bad step.
    auto coupled = builtin_family("constant_H", {.g = 0.5});
    CHECK_THROWS_AS(diagonal_to_dirac(coupled), std::invalid_argument);
    auto power = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    CHECK_THROWS_AS(diagonal_to_dirac(power), std::domain_error);
    CHECK_THROWS_AS(diagonal_to_dirac(f, {}, -1.0), std::invalid_argument);
}
