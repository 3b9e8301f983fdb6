#pragma once

#include <vector>

namespace uniforce::testing {

// Brute-force dip bounds, independent of the production implementation.
//
// The dip is min over unimodal CDFs G of sup|F - G|. For a fixed mode position the
// best G decomposes into a convex piece (rising from 0) and a concave piece (rising
// to 1) coupled at the mode, where an atom is allowed. Feasibility of each piece
// inside the two-sided error bands reduces to a convex-hull test, so the dip for a
// fixed mode is found by bisecting the error. Scanning modes over all sample values
// and (ternary-refined) gaps gives an upper bound; relaxing the mode to a whole
// inter-value gap gives a lower bound. True dip always lies in [lower, upper].
struct DipBounds {
    double lower = 0.0;
    double upper = 0.0;
};

DipBounds dip_bruteforce_bounds(std::vector<double> sample);

// Feasibility primitive exposed for its own unit test: does a nondecreasing convex g
// with g(-inf) = 0 exist through the bands [lo_i, hi_i] at ascending abscissas x_i?
// A pinned value is expressed as lo_i == hi_i.
bool convex_band_feasible(const std::vector<double>& x, const std::vector<double>& lo,
                          const std::vector<double>& hi);

}  // namespace uniforce::testing
