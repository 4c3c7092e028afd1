#pragma once

#include <iosfwd>

namespace rb {

struct GoldenResult {
    int passed = 0;
    int failed = 0;
};

// Runs the full verification suite (symbolic tables exactly, numeric
// invariants at their pinned grids and tolerances), printing one
// pass/fail line per criterion.  The Table B.2 KR-row discrepancy at
// d >= 5 is reported as a flag inside its criterion, not a failure.
GoldenResult run_golden_suite(std::ostream& out, int threads = 0);

}  // namespace rb
