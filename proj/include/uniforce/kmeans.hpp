#pragma once

#include <cstdint>
#include <vector>

#include "uniforce/dataset.hpp"
#include "uniforce/rng.hpp"
#include "uniforce/types.hpp"

namespace uniforce {

struct Overclustering {
    Matrix centers;                // K x d
    std::vector<int> assignments;  // length N, ids in [0, K)
    double sse = 0.0;

    int k() const { return static_cast<int>(centers.rows()); }
    std::vector<int> sizes() const;
};

struct LloydOptions {
    int max_iters = 300;
    double tol = 1e-6;  // relative SSE improvement
};

// Q candidate points D^2-sampled from the dataset: probability proportional to the
// squared distance to the nearest existing center. With no centers, or when every
// point coincides with a center, candidates are drawn uniformly.
Matrix kmeanspp_candidates(const Dataset& ds, const Matrix& centers, int q, Rng& rng);

// Standard alternation from the given centers. Nearest-center ties break toward the
// lowest center id; empty clusters are re-seeded at the point farthest from its
// currently assigned center.
Overclustering lloyd(const Dataset& ds, Matrix init_centers, const LloydOptions& opt = {});

// Incremental k-means: grows the center set one center at a time, trying Q sampled
// candidates per increment and keeping the lowest-SSE refinement.
Overclustering global_kmeanspp(const Dataset& ds, int k_prime, int q, std::uint64_t seed,
                               const LloydOptions& opt = {});

// Repeatedly drops the smallest subcluster below min_size (lowest id on ties),
// reassigns its points to the nearest surviving center and recomputes the centers
// that received points. Survivor ids are compacted preserving order.
Overclustering eliminate_small(const Overclustering& oc, const Dataset& ds, int min_size);

double compute_sse(const Dataset& ds, const Matrix& centers, const std::vector<int>& assignments);

}  // namespace uniforce
