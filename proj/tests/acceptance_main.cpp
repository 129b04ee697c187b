// Go/no-go runner: one line per criterion, nonzero exit if anything failed.

#include <specedge/specedge.hpp>

#include <iostream>

int main() {
    auto results = specedge::verify::run_acceptance(&std::cout);
    return specedge::verify::all_passed(results) ? 0 : 1;
}
