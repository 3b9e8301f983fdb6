#pragma once

#include <cstdint>
#include <vector>

#include "uniforce/dip.hpp"
#include "uniforce/rng.hpp"
#include "uniforce/types.hpp"

namespace uniforce {

enum class Verdict { unimodal, multimodal };

std::string to_string(Verdict v);

struct PairTestRecord {
    int i = 0;
    int j = 0;
    std::vector<int> votes;        // 1 = vote for unimodality
    std::vector<double> p_values;  // one per Monte Carlo round
    int s = 0;                     // balanced subsample size per subcluster
    Verdict verdict = Verdict::multimodal;
};

// How a dip value becomes a p-value inside the pair test.
struct PValueStrategy {
    PValueMethod method = PValueMethod::table;
    const DipTable* table = nullptr;  // required for the table method
    int bootstrap_reps = 1000;
    std::uint64_t bootstrap_seed = 0;

    double operator()(double dip, int n) const;
};

// Signed distance of each row to the hyperplane bisecting the segment mu_i -> mu_j:
// negative on mu_i's side, positive on mu_j's side, zero on the hyperplane.
template <typename DerivedP, typename DerivedA, typename DerivedB>
Vector signed_distances(const Eigen::MatrixBase<DerivedP>& points,
                        const Eigen::MatrixBase<DerivedA>& mu_i,
                        const Eigen::MatrixBase<DerivedB>& mu_j) {
    Eigen::RowVectorXd r = (mu_j - mu_i).template cast<double>();
    const double norm = r.norm();
    r /= norm;  // caller guarantees distinct centers
    const Eigen::RowVectorXd mid = 0.5 * (mu_i + mu_j).template cast<double>();
    return (points.rowwise() - mid) * r.transpose();
}

double center_distance_guard(const Vector& mu_i, const Vector& mu_j);  // throws CoincidentCenters

// s = min(|c_i|, |c_j|) rows sampled from each without replacement, stacked; the
// smaller set contributes all of its rows.
Matrix balanced_union(const Matrix& c_i, const Matrix& c_j, Rng& rng);

// Alg.-style unimodality test of the pair: L rounds of balanced subsampling,
// projection onto the axis joining the full-subcluster means, dip p-value, majority
// vote of 1{p >= alpha}. Round substreams derive from (seed, min id, max id, round),
// keyed by subcluster id rather than argument order, so swapping arguments reproduces
// identical p-values.
PairTestRecord unimodal_pair(const Matrix& c_i, const Matrix& c_j, int id_i, int id_j, int votes,
                             double alpha, const PValueStrategy& pvalue, std::uint64_t seed);

}  // namespace uniforce
