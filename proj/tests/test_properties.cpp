#include <catch2/catch_amalgamated.hpp>

#include <specedge/verify.hpp>

// Randomized invariants over the grid-field generator. Each suite draws its
// own fields; 200 cases apiece keeps the whole tag under a minute while still
// exercising the branchy parts (coupling on/off, non-normed traces, short and
// long tables).

using namespace specedge::verify;

namespace {

void expect_clean(const PropertySuiteResult& r) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.failures == 0);
    CHECK(r.cases == 200);
}

} // namespace

TEST_CASE("randomized model and flow invariants", "[properties]") {
    expect_clean(prop_angle_monotone_in_x(101, 200));
    expect_clean(prop_angle_monotone_in_t(102, 200));
    expect_clean(prop_initial_condition_order(103, 200));
    expect_clean(prop_pi_shift(104, 200));
    expect_clean(prop_form_vs_diagonal(105, 200));
}

TEST_CASE("randomized spectral invariants", "[properties]") {
    expect_clean(prop_rotation_invariance(106, 200));
    expect_clean(prop_upward_closure(107, 200));
    expect_clean(prop_single_switch(108, 200));
}
