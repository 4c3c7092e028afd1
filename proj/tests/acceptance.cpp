// Acceptance suite: runs every verification criterion at its pinned
// grid and tolerance and prints one pass/fail line per criterion.
#include <iostream>

#include "realbloch/golden.hpp"

int main() {
    rb::GoldenResult result = rb::run_golden_suite(std::cout);
    return result.failed == 0 ? 0 : 1;
}
