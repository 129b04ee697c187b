#include <catch2/catch_amalgamated.hpp>

#include <specedge/families.hpp>
#include <specedge/schrodinger.hpp>

#include <cmath>

using namespace specedge;

TEST_CASE("free shooting follows the arctangent", "[schrodinger]") {
    // With no potential psi' = cos^2(psi), i.e. tan(psi) = x: bounded, no
    // zeros, and an exact curve to pin the integrator against.
    auto f = builtin_family("zero_phi");
    auto run = shoot_zero_energy(f, 2.0, 1e6);
    CHECK(run.zero_counts.back().second == 0);
    for (const auto& pt : run.psi)
        CHECK(pt.theta == Catch::Approx(std::atan(pt.x)).margin(1e-8));
}

TEST_CASE("horizon schedule is increasing and capped", "[schrodinger]") {
    auto xs = detail::log_dyadic_horizons(1e8);
    REQUIRE(xs.size() >= 4);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
    CHECK(xs.back() == 1e8);
}

TEST_CASE("critical power family zero counts", "[schrodinger]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    auto run = shoot_zero_energy(f, 1.0, 1e6);
    // Zeros sit at e^(pi/lambda) spacing in 1+x (lambda = sqrt(3)/2 here);
    // over (0, 1e6] that is exactly three of them.
    CHECK(run.zero_counts.back().second == 3);
    long long prev = 0;
    for (const auto& [X, n] : run.zero_counts) {
        CHECK(n >= prev);
        prev = n;
    }
    CHECK_THROWS_AS(shoot_zero_energy(f, 1.0, -5.0), std::invalid_argument);
}

TEST_CASE("finiteness verdicts", "[schrodinger]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    CHECK(negative_spectrum_finite(f, 0.4).value == NegSpectrum::Finite);
    CHECK(negative_spectrum_finite(f, 1.0).value == NegSpectrum::Infinite);

    // Fast decay: finite at any coupling. Slow decay: never finite.
    auto p3 = builtin_family("power_tail", {.c = 1.0, .p = 3.0});
    CHECK(negative_spectrum_finite(p3, 5.0).value == NegSpectrum::Finite);
    auto p15 = builtin_family("power_tail", {.c = 1.0, .p = 1.5});
    CHECK(negative_spectrum_finite(p15, 0.2).value == NegSpectrum::Infinite);
}

TEST_CASE("tail criteria outrank the horizon-limited count profile",
          "[schrodinger]") {
    // Just past the switch the next zero lies beyond any affordable horizon:
    // the raw count profile reads "stopped", the tail criterion knows better.
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    ClassifyPolicy raw;
    raw.use_certificates = false;
    auto profile_only = negative_spectrum_finite(f, 0.52, raw);
    CHECK(profile_only.value == NegSpectrum::Finite);
    auto with_tail = negative_spectrum_finite(f, 0.52);
    CHECK(with_tail.value == NegSpectrum::Infinite);
    CHECK(with_tail.note.find("tail criterion") != std::string::npos);
}

TEST_CASE("switch-point bracketing", "[schrodinger]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    auto sb = s_bracket(f);
    REQUIRE(sb.kind == SBracket::Kind::bracket);
    CHECK(sb.iv.contains(0.5));
    CHECK(sb.iv.overlaps(Interval{0.45, 0.55}));

    // Finite at every probed coupling: no switch in range.
    CHECK(s_bracket(builtin_family("zero_phi")).kind == SBracket::Kind::infinite);

    // Infinite already at tiny couplings: the bracket collapses toward zero.
    auto slow = s_bracket(builtin_family("power_tail", {.c = 1.0, .p = 1.5}));
    REQUIRE(slow.kind == SBracket::Kind::bracket);
    CHECK(slow.iv.lo == 0.0);
    CHECK(slow.iv.hi <= 0.01);
}

TEST_CASE("shooting requires a usable field", "[schrodinger]") {
    CoefficientField f;
    f.phi = [](double) { return 0.3; };
    f.g = [](double) { return 0.0; };
    f.trace_normed = true;
    f.l2_direction_ok = false; // nothing declared, no aligned form
    f.name = "undeclared";
    CHECK_THROWS_AS(shoot_zero_energy(f, 1.0, 100.0), std::invalid_argument);

    // The exponential family routes itself and works from the raw handle.
    auto s5d = builtin_family("section5_diagonal");
    CHECK_NOTHROW(shoot_zero_energy(s5d, 0.3, 1e4));
}

TEST_CASE("logarithmic-derivative residuals", "[schrodinger]") {
    double free_res = riccati_crosscheck(builtin_family("zero_phi"), 1.0, 1.0, 1e4);
    CHECK(free_res < 1e-8);
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    double power_res = riccati_crosscheck(f, 0.3, 50.0, 1e5);
    CHECK(power_res < 1e-7);

    CHECK_THROWS_AS(riccati_crosscheck(f, -1.0, 1.0, 1e3), std::invalid_argument);
    CHECK_THROWS_AS(riccati_crosscheck(f, 1.0, 10.0, 5.0), std::invalid_argument);
}
