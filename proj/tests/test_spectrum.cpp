#include <catch2/catch_amalgamated.hpp>

#include <specedge/families.hpp>
#include <specedge/spectrum.hpp>

using namespace specedge;

namespace {
ClassifyPolicy deep() {
    ClassifyPolicy p;
    p.x_max = 1e14;
    return p;
}
} // namespace

TEST_CASE("classification on the power family", "[spectrum]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    // The coupling threshold sits at 1/2: certificates settle both sides.
    auto osc = classify(f, 1.0);
    CHECK(osc.value == Oscillation::Oscillatory);
    CHECK(osc.growth_certificate);
    auto non = classify(f, 0.3);
    CHECK(non.value == Oscillation::NonOscillatory);
    CHECK(non.certificate_at.has_value());
    // Sign of t is immaterial for a diagonal system.
    CHECK(classify(f, -1.0).value == Oscillation::Oscillatory);
    CHECK(classify(f, -0.3).value == Oscillation::NonOscillatory);

    CHECK_THROWS_AS(classify(f, 0.0), std::invalid_argument);
}

TEST_CASE("judging from integration alone leaves a band open", "[spectrum]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    ClassifyPolicy pol;
    pol.use_certificates = false;
    pol.x_max = 1000.0;
    // Just past the threshold the first zero crossing sits far beyond the
    // horizon, so honest output is inconclusive, not a guess.
    auto v = classify(f, 0.52, pol);
    CHECK(v.value == Oscillation::Inconclusive);
    // Far above the threshold the crossings are dense enough to observe.
    CHECK(classify(f, 3.0, pol).value == Oscillation::Oscillatory);
}

TEST_CASE("trivial and constant systems", "[spectrum]") {
    auto z = builtin_family("zero_phi");
    auto v = classify(z, 5.0);
    CHECK(v.value == Oscillation::NonOscillatory);

    // A constant positive-definite coefficient oscillates at every t != 0.
    auto c = builtin_family("constant_H", {.g = 0.2, .phi = 0.6});
    for (double t : {0.05, 1.0, -0.7}) {
        auto w = classify(c, t);
        CHECK(w.value == Oscillation::Oscillatory);
        CHECK(w.exact_grid);
    }
}

TEST_CASE("exponential family classifies from the raw handle", "[spectrum]") {
    // Raw entries grow like e^x; classification must route itself through
    // the aligned form and the time change rather than fail.
    auto f = builtin_family("section5");
    CHECK(classify(f, 1.0).value == Oscillation::Oscillatory);
    CHECK(classify(f, 0.2).value == Oscillation::NonOscillatory);
}

TEST_CASE("threshold bracketing on the power family", "[spectrum]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    auto b = oscillatory_threshold(f, +1);
    REQUIRE(b.kind == ThresholdBracket::Kind::bracket);
    CHECK(b.iv.contains(0.5));
    CHECK(b.iv.width() <= 0.01 * b.iv.hi + 1e-12);
    CHECK(b.lo_verified);
    CHECK_FALSE(b.probes.empty());
}

TEST_CASE("edge estimates", "[spectrum]") {
    auto est5 = m_estimate(builtin_family("section5"), deep());
    CHECK(est5.m.contains(0.25));
    CHECK(est5.m.width() <= 0.05);
    CHECK(est5.field == "section5");

    auto estd = m_estimate(builtin_family("section5_diagonal"), deep());
    CHECK(estd.m.contains(0.5));
    CHECK(estd.m.width() <= 0.05);

    // Both sides certified away from zero: zero is not in the spectrum.
    CHECK(estd.zero_in_ess == ZeroInEss::no);

    // No oscillation at any coupling: infinite sentinel.
    auto estz = m_estimate(builtin_family("zero_phi"));
    CHECK(estz.m.is_infinite());
    CHECK(estz.positive.kind == ThresholdBracket::Kind::infinite);

    // Slow decay keeps the system oscillatory at every coupling: the edge
    // collapses to zero.
    auto est15 = m_estimate(builtin_family("power_tail", {.c = 1.0, .p = 1.5}));
    CHECK(est15.m.lo == 0.0);
    CHECK(est15.zero_in_ess == ZeroInEss::yes);
}

TEST_CASE("diagonal symmetry check", "[spectrum]") {
    auto d = diagonal_symmetry_check(builtin_family("section5_diagonal"), deep());
    CHECK(d.overlap);
    CHECK_THROWS_AS(diagonal_symmetry_check(builtin_family("section5")),
                    std::invalid_argument);
}

TEST_CASE("oscillatory set is upward closed along a sweep", "[spectrum]") {
    auto f = builtin_family("power_tail", {.c = 1.0, .p = 2.0});
    bool seen = false;
    for (double t : {0.2, 0.4, 0.6, 0.9, 1.5, 3.0}) {
        auto v = classify(f, t).value;
        if (v == Oscillation::Oscillatory) seen = true;
        if (seen) CHECK(v == Oscillation::Oscillatory);
    }
}
