#include <catch2/catch_amalgamated.hpp>

#include <specedge/families.hpp>
#include <specedge/field.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace specedge;

TEST_CASE("matrix helpers", "[model]") {
    HMatrix h = from_phi_g(kPi / 4.0, 1.0, 2.0);
    CHECK(h.h11 == Catch::Approx(1.0));
    CHECK(h.h12 == Catch::Approx(1.0));
    CHECK(h.h22 == Catch::Approx(1.0));
    CHECK(h.eig_min() == Catch::Approx(0.0).margin(1e-15));
    CHECK(h.eig_max() == Catch::Approx(2.0));
    CHECK(h.is_psd());
    CHECK(h.quad_form(kPi / 4.0) == Catch::Approx(2.0));
    CHECK(h.quad_form(-kPi / 4.0) == Catch::Approx(0.0).margin(1e-15));

    CHECK_THROWS_AS(from_phi_g(0.3, 1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(from_phi_g(0.3, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("phi-g decomposition round-trips", "[model]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        double phi = (ud(rng) - 0.5) * kPi;
        double g = ud(rng);
        double tau = 0.05 + 4.0 * ud(rng);
        HMatrix h = from_phi_g(phi, g, tau);
        PhiG pg = to_phi_g(h);
        HMatrix back = from_phi_g(pg.phi, pg.g, pg.trace);
        double scale = tau + 1e-12;
        REQUIRE(std::abs(back.h11 - h.h11) <= 1e-12 * scale);
        REQUIRE(std::abs(back.h12 - h.h12) <= 1e-12 * scale);
        REQUIRE(std::abs(back.h22 - h.h22) <= 1e-12 * scale);
    }
}

TEST_CASE("degenerate decompositions are flagged", "[model]") {
    CHECK(to_phi_g(HMatrix{1.0, 0.0, 0.0}).degenerate);
    CHECK(to_phi_g(HMatrix{0.0, 0.0, 2.5}).degenerate);
    CHECK_FALSE(to_phi_g(HMatrix{0.5, 0.1, 0.5}).degenerate);
}

TEST_CASE("projections and segments", "[model]") {
    HMatrix p = projection(0.7);
    CHECK(p.trace() == Catch::Approx(1.0));
    CHECK(p.det() == Catch::Approx(0.0).margin(1e-15));

    // The midpoint of the segment is exactly the diagonal matrix.
    HMatrix mid = lambda_segment(0.7, 0.5);
    CHECK(mid.h12 == 0.0);
    CHECK(mid.h11 == Catch::Approx(std::sin(0.7) * std::sin(0.7)));
    CHECK_THROWS_AS(lambda_segment(0.7, 1.2), std::out_of_range);

    // Endpoints are the two projections.
    HMatrix hi = lambda_segment(0.7, 1.0);
    CHECK(hi.h12 == Catch::Approx(std::sin(0.7) * std::cos(0.7)));
}

TEST_CASE("diagonal part drops the coupling only", "[model]") {
    auto f = builtin_family("power_tail", {.c = 0.9, .p = 2.0, .g = 0.6});
    auto d = diagonal_part(f);
    CHECK(d.diagonal);
    for (double x : {0.0, 1.0, 7.3, 140.0}) {
        HMatrix a = h_at(f, x), b = h_at(d, x);
        CHECK(b.h12 == 0.0);
        CHECK(b.h11 == Catch::Approx(a.h11));
        CHECK(b.h22 == Catch::Approx(a.h22));
    }
}

TEST_CASE("trace normalization", "[model]") {
    auto f = builtin_family("section5");
    REQUIRE_FALSE(f.trace_normed);
    auto n = trace_normalize(f);
    CHECK(n.trace_normed);
    for (double s : {0.0, 0.5, 3.0, 50.0}) {
        HMatrix h = h_at(n, s);
        CHECK(h.trace() == Catch::Approx(1.0).epsilon(1e-12));
    }
    // The time change pair really is a pair of inverses.
    REQUIRE(f.time_change.has_value());
    for (double x : {0.0, 0.3, 2.0, 11.0})
        CHECK(f.time_change->x_of_s(f.time_change->s_of_x(x)) ==
              Catch::Approx(x).margin(1e-12));
    // Already-normed fields pass through.
    auto p = builtin_family("power_tail");
    CHECK(trace_normalize(p).trace_normed);
}

TEST_CASE("grid table validation", "[model]") {
    GridTable empty;
    CHECK_THROWS_AS(make_grid_field(std::move(empty)), std::invalid_argument);

    GridTable late;
    late.cells.push_back({1.0, 0.2, 0.0, 1.0});
    CHECK_THROWS_AS(make_grid_field(std::move(late)), std::invalid_argument);

    GridTable unsorted;
    unsorted.cells.push_back({0.0, 0.2, 0.0, 1.0});
    unsorted.cells.push_back({2.0, 0.2, 0.0, 1.0});
    unsorted.cells.push_back({1.0, 0.2, 0.0, 1.0});
    CHECK_THROWS_AS(make_grid_field(std::move(unsorted)), std::invalid_argument);

    GridTable badg;
    badg.cells.push_back({0.0, 0.2, 1.5, 1.0});
    CHECK_THROWS_AS(make_grid_field(std::move(badg)), std::invalid_argument);

    GridTable badtrace;
    badtrace.cells.push_back({0.0, 0.2, 0.0, 0.0});
    CHECK_THROWS_AS(make_grid_field(std::move(badtrace)), std::invalid_argument);

    GridTable ok;
    ok.cells.push_back({0.0, 0.3, 0.5, 2.0});
    ok.cells.push_back({1.5, -0.4, 0.0, 1.0});
    auto f = make_grid_field(std::move(ok));
    REQUIRE(f.grid);
    CHECK(f.phi(0.7) == Catch::Approx(0.3));
    CHECK(f.phi(1.5) == Catch::Approx(-0.4)); // right-continuous at the break
    CHECK(f.phi(1e9) == Catch::Approx(-0.4)); // last cell extends forever
    CHECK_FALSE(f.trace_normed);
}

TEST_CASE("grid csv loader", "[model]") {
    std::istringstream in("x,phi,g\n0,0.3,0.5\n1.5,-0.4,0\n");
    auto t = load_grid_csv(in);
    REQUIRE(t.cells.size() == 2);
    CHECK(t.cells[0].trace == 1.0); // default when the column is absent
    CHECK(t.cells[1].phi == Catch::Approx(-0.4));

    std::istringstream with_trace("x,phi,g,trace\n0,0.1,0,2\n");
    CHECK(load_grid_csv(with_trace).cells[0].trace == Catch::Approx(2.0));

    std::istringstream junk("a,b\n1,2\n");
    CHECK_THROWS_AS(load_grid_csv(junk), std::runtime_error);
    std::istringstream bad_row("x,phi,g\n0,0.1\n");
    CHECK_THROWS_AS(load_grid_csv(bad_row), std::runtime_error);
}

TEST_CASE("builtin families", "[model]") {
    CHECK_THROWS_AS(builtin_family("no_such_family"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_family("power_tail", {.c = 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_family("power_tail", {.p = 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_family("grid_sampled"), std::invalid_argument);

    // Parameters land in the name, so downstream provenance checks can tell
    // two members of the same family apart.
    auto a = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    auto b = builtin_family("power_tail", {.c = 1.0, .p = 3.0});
    CHECK(a.name != b.name);

    auto s5 = builtin_family("section5");
    HMatrix h = h_at(s5, 2.0);
    CHECK(h.h11 == Catch::Approx(std::exp(2.0)).epsilon(1e-10));
    CHECK(h.h12 == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(h.h22 == Catch::Approx(std::exp(-2.0)).epsilon(1e-10));

    auto d = builtin_family("section5_diagonal");
    HMatrix hd = h_at(d, 1.0);
    CHECK(hd.h11 == Catch::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(hd.h12 == 0.0);
    CHECK(hd.h22 == Catch::Approx(std::exp(1.0)).epsilon(1e-10));

    auto z = builtin_family("zero_phi");
    CHECK(h_at(z, 3.0).h11 == 0.0);
    CHECK(z.tail->A_exact == 0.0);
}

TEST_CASE("square-integrability growth diagnostic", "[model]") {
    auto ok = l2_growth_diagnostic(builtin_family("power_tail"));
    CHECK_FALSE(ok.looks_divergent);
    // Raw exponential h11 is nowhere near integrable and must be flagged.
    auto bad = l2_growth_diagnostic(builtin_family("section5"));
    CHECK(bad.looks_divergent);
}
