#include "uniforce/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "uniforce/errors.hpp"

namespace uniforce {

namespace {

// Nearest center per point, ties toward the lowest center id.
void assign_nearest(const Dataset& ds, const Matrix& centers, std::vector<int>& out) {
    const Eigen::Index n = ds.n();
    const int k = static_cast<int>(centers.rows());
    out.resize(static_cast<size_t>(n));
    Vector best_d2(n);
    best_d2.setConstant(std::numeric_limits<double>::infinity());
    Vector d2(n);
    for (int j = 0; j < k; ++j) {
        d2 = squared_distances_to(ds.points, centers.row(j));
        for (Eigen::Index i = 0; i < n; ++i) {
            if (d2[i] < best_d2[i]) {
                best_d2[i] = d2[i];
                out[static_cast<size_t>(i)] = j;
            }
        }
    }
}

}  // namespace

std::vector<int> Overclustering::sizes() const {
    std::vector<int> s(static_cast<size_t>(k()), 0);
    for (int a : assignments) s[static_cast<size_t>(a)]++;
    return s;
}

double compute_sse(const Dataset& ds, const Matrix& centers, const std::vector<int>& assignments) {
    double sse = 0.0;
    for (Eigen::Index i = 0; i < ds.n(); ++i)
        sse += (ds.points.row(i) - centers.row(assignments[static_cast<size_t>(i)])).squaredNorm();
    return sse;
}

Matrix kmeanspp_candidates(const Dataset& ds, const Matrix& centers, int q, Rng& rng) {
    if (q < 1) throw UsageError("candidate count must be >= 1");
    const Eigen::Index n = ds.n();

    Vector weights(n);
    if (centers.rows() == 0) {
        weights.setOnes();
    } else {
        weights.setConstant(std::numeric_limits<double>::infinity());
        for (Eigen::Index j = 0; j < centers.rows(); ++j)
            weights = weights.cwiseMin(squared_distances_to(ds.points, centers.row(j)));
    }

    double total = weights.sum();
    if (!(total > 0.0)) {
        // Every point coincides with a center; fall back to uniform sampling.
        weights.setOnes();
        total = static_cast<double>(n);
    }

    std::vector<double> cum(static_cast<size_t>(n));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += weights[i];
        cum[static_cast<size_t>(i)] = acc;
    }

    Matrix out(q, ds.dim());
    for (int c = 0; c < q; ++c) {
        const double r = rng.uniform() * acc;
        const auto it = std::upper_bound(cum.begin(), cum.end(), r);
        const Eigen::Index idx = std::min<Eigen::Index>(
            static_cast<Eigen::Index>(it - cum.begin()), n - 1);
        out.row(c) = ds.points.row(idx);
    }
    return out;
}

Overclustering lloyd(const Dataset& ds, Matrix centers, const LloydOptions& opt) {
    const Eigen::Index n = ds.n();
    const int k = static_cast<int>(centers.rows());
    if (k < 1) throw UsageError("lloyd needs at least one center");
    if (k > n) throw KTooLarge("more centers than points");

    Overclustering oc;
    oc.assignments.assign(static_cast<size_t>(n), 0);
    double prev_sse = std::numeric_limits<double>::infinity();

    std::vector<int> counts(static_cast<size_t>(k));
    for (int iter = 0; iter < opt.max_iters; ++iter) {
        std::vector<int> next(oc.assignments.size());
        assign_nearest(ds, centers, next);

        // Re-seed empty clusters at the point farthest from its assigned center,
        // one point per empty cluster, then redo the assignment.
        std::fill(counts.begin(), counts.end(), 0);
        for (int a : next) counts[static_cast<size_t>(a)]++;
        std::vector<int> empties;
        for (int j = 0; j < k; ++j)
            if (counts[static_cast<size_t>(j)] == 0) empties.push_back(j);
        if (!empties.empty()) {
            std::vector<char> taken(static_cast<size_t>(n), 0);
            for (int j : empties) {
                double worst = -1.0;
                Eigen::Index pick = 0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (taken[static_cast<size_t>(i)]) continue;
                    const double d2 =
                        (ds.points.row(i) - centers.row(next[static_cast<size_t>(i)])).squaredNorm();
                    if (d2 > worst) {
                        worst = d2;
                        pick = i;
                    }
                }
                centers.row(j) = ds.points.row(pick);
                taken[static_cast<size_t>(pick)] = 1;
            }
            assign_nearest(ds, centers, next);
        }

        const bool fixpoint = next == oc.assignments && iter > 0;
        oc.assignments = std::move(next);

        // Mean update with sequential accumulation per center.
        Matrix sums = Matrix::Zero(k, ds.dim());
        std::fill(counts.begin(), counts.end(), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int a = oc.assignments[static_cast<size_t>(i)];
            sums.row(a) += ds.points.row(i);
            counts[static_cast<size_t>(a)]++;
        }
        for (int j = 0; j < k; ++j)
            if (counts[static_cast<size_t>(j)] > 0)
                centers.row(j) = sums.row(j) / counts[static_cast<size_t>(j)];

        const double sse = compute_sse(ds, centers, oc.assignments);
        const bool converged = fixpoint || prev_sse - sse < opt.tol * std::max(prev_sse, 1e-300);
        prev_sse = sse;
        if (converged) break;
    }

    // Final stationary assignment against the final centers.
    assign_nearest(ds, centers, oc.assignments);
    oc.centers = std::move(centers);
    oc.sse = compute_sse(ds, oc.centers, oc.assignments);
    return oc;
}

Overclustering global_kmeanspp(const Dataset& ds, int k_prime, int q, std::uint64_t seed,
                               const LloydOptions& opt) {
    const Eigen::Index n = ds.n();
    if (k_prime < 1) throw UsageError("subcluster count must be >= 1");
    if (k_prime > n) throw KTooLarge("requested " + std::to_string(k_prime) +
                                     " subclusters from " + std::to_string(n) + " points");

    Rng rng(mix_seed({0x6b6d7070, seed}));

    Overclustering oc;
    oc.centers = ds.points.colwise().mean();
    oc.assignments.assign(static_cast<size_t>(n), 0);
    oc.sse = compute_sse(ds, oc.centers, oc.assignments);

    for (int k = 2; k <= k_prime; ++k) {
        const Matrix candidates = kmeanspp_candidates(ds, oc.centers, q, rng);
        Overclustering best;
        best.sse = std::numeric_limits<double>::infinity();
        Matrix init(k, ds.dim());
        init.topRows(k - 1) = oc.centers;
        for (int c = 0; c < candidates.rows(); ++c) {
            init.row(k - 1) = candidates.row(c);
            Overclustering trial = lloyd(ds, init, opt);
            if (trial.sse < best.sse) best = std::move(trial);
        }
        oc = std::move(best);
    }
    return oc;
}

Overclustering eliminate_small(const Overclustering& oc, const Dataset& ds, int min_size) {
    if (min_size < 1) throw UsageError("minimum subcluster size must be >= 1");
    const int k0 = oc.k();
    const Eigen::Index n = ds.n();

    std::vector<char> alive(static_cast<size_t>(k0), 1);
    std::vector<int> assign = oc.assignments;
    Matrix centers = oc.centers;
    std::vector<int> counts(static_cast<size_t>(k0), 0);
    for (int a : assign) counts[static_cast<size_t>(a)]++;
    int n_alive = k0;

    while (n_alive > 1) {
        // Smallest undersized subcluster, lowest id on ties.
        int victim = -1;
        for (int j = 0; j < k0; ++j) {
            if (!alive[static_cast<size_t>(j)] || counts[static_cast<size_t>(j)] >= min_size)
                continue;
            if (victim < 0 || counts[static_cast<size_t>(j)] < counts[static_cast<size_t>(victim)])
                victim = j;
        }
        if (victim < 0) break;

        alive[static_cast<size_t>(victim)] = 0;
        --n_alive;

        // Reassign the orphaned points to the nearest surviving center and recompute
        // the centers that received them (assignment rule only, no full Lloyd pass).
        std::vector<char> touched(static_cast<size_t>(k0), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (assign[static_cast<size_t>(i)] != victim) continue;
            double best_d2 = std::numeric_limits<double>::infinity();
            int best_j = -1;
            for (int j = 0; j < k0; ++j) {
                if (!alive[static_cast<size_t>(j)]) continue;
                const double d2 = (ds.points.row(i) - centers.row(j)).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best_j = j;
                }
            }
            assign[static_cast<size_t>(i)] = best_j;
            counts[static_cast<size_t>(best_j)]++;
            touched[static_cast<size_t>(best_j)] = 1;
        }
        counts[static_cast<size_t>(victim)] = 0;

        for (int j = 0; j < k0; ++j) {
            if (!touched[static_cast<size_t>(j)]) continue;
            Vector sum = Vector::Zero(ds.dim());
            int cnt = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (assign[static_cast<size_t>(i)] == j) {
                    sum += ds.points.row(i).transpose();
                    ++cnt;
                }
            }
            centers.row(j) = sum.transpose() / cnt;
        }
    }

    // Compact ids, survivors keep their relative order.
    std::vector<int> remap(static_cast<size_t>(k0), -1);
    int next_id = 0;
    for (int j = 0; j < k0; ++j)
        if (alive[static_cast<size_t>(j)]) remap[static_cast<size_t>(j)] = next_id++;

    Overclustering out;
    out.centers.resize(next_id, ds.dim());
    for (int j = 0; j < k0; ++j)
        if (remap[static_cast<size_t>(j)] >= 0)
            out.centers.row(remap[static_cast<size_t>(j)]) = centers.row(j);
    out.assignments.resize(assign.size());
    for (size_t i = 0; i < assign.size(); ++i)
        out.assignments[i] = remap[static_cast<size_t>(assign[i])];
    out.sse = compute_sse(ds, out.centers, out.assignments);
    return out;
}

}  // namespace uniforce
