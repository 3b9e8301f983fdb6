#include "uniforce/pairtest.hpp"

#include <algorithm>

#include "uniforce/errors.hpp"

namespace uniforce {

namespace {

constexpr std::uint64_t kPairDomain = 0x9a17;

Matrix sample_rows(const Matrix& m, int s, Rng& rng) {
    const int n = static_cast<int>(m.rows());
    if (s == n) return m;
    const auto idx = rng.sample_without_replacement(n, s);
    Matrix out(s, m.cols());
    for (int r = 0; r < s; ++r) out.row(r) = m.row(idx[static_cast<size_t>(r)]);
    return out;
}

}  // namespace

std::string to_string(Verdict v) {
    return v == Verdict::unimodal ? "unimodal" : "multimodal";
}

double PValueStrategy::operator()(double dip, int n) const {
    if (method == PValueMethod::table) {
        if (!table) throw InternalError("table p-value strategy without a table");
        return table->p_value(dip, n);
    }
    return dip_pvalue_bootstrap(dip, n, bootstrap_reps, bootstrap_seed);
}

double center_distance_guard(const Vector& mu_i, const Vector& mu_j) {
    const double dist = (mu_j - mu_i).norm();
    if (dist <= 1e-12)
        throw CoincidentCenters("subcluster centers coincide, no separating hyperplane");
    return dist;
}

Matrix balanced_union(const Matrix& c_i, const Matrix& c_j, Rng& rng) {
    if (c_i.rows() == 0 || c_j.rows() == 0)
        throw EmptySubcluster("balanced union of an empty subcluster");
    const int s = static_cast<int>(std::min(c_i.rows(), c_j.rows()));
    Matrix out(2 * s, c_i.cols());
    out.topRows(s) = sample_rows(c_i, s, rng);
    out.bottomRows(s) = sample_rows(c_j, s, rng);
    return out;
}

PairTestRecord unimodal_pair(const Matrix& c_i, const Matrix& c_j, int id_i, int id_j, int votes,
                             double alpha, const PValueStrategy& pvalue, std::uint64_t seed) {
    if (votes < 1 || votes % 2 == 0) throw UsageError("vote count must be odd and >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    if (c_i.rows() < 2 || c_j.rows() < 2)
        throw TooFewPoints("pair test needs at least 2 points per subcluster");

    // Hyperplane from the full-subcluster means, fixed across all rounds. The
    // projection axis is oriented low id -> high id so the test is symmetric in its
    // arguments.
    const Vector mu_i = c_i.colwise().mean().transpose();
    const Vector mu_j = c_j.colwise().mean().transpose();
    center_distance_guard(mu_i, mu_j);

    const bool ordered = id_i <= id_j;
    const Matrix& c_lo = ordered ? c_i : c_j;
    const Matrix& c_hi = ordered ? c_j : c_i;
    const Vector& mu_lo = ordered ? mu_i : mu_j;
    const Vector& mu_hi = ordered ? mu_j : mu_i;
    const int lo = std::min(id_i, id_j), hi = std::max(id_i, id_j);

    PairTestRecord rec;
    rec.i = id_i;
    rec.j = id_j;
    rec.s = static_cast<int>(std::min(c_i.rows(), c_j.rows()));

    int yes = 0;
    for (int round = 0; round < votes; ++round) {
        Rng rng_lo(mix_seed({kPairDomain, seed, static_cast<std::uint64_t>(lo),
                             static_cast<std::uint64_t>(hi), static_cast<std::uint64_t>(round), 0}));
        Rng rng_hi(mix_seed({kPairDomain, seed, static_cast<std::uint64_t>(lo),
                             static_cast<std::uint64_t>(hi), static_cast<std::uint64_t>(round), 1}));
        Matrix sub(2 * rec.s, c_lo.cols());
        sub.topRows(rec.s) = sample_rows(c_lo, rec.s, rng_lo);
        sub.bottomRows(rec.s) = sample_rows(c_hi, rec.s, rng_hi);

        const Vector projected = signed_distances(sub, mu_lo.transpose(), mu_hi.transpose());
        const double dip = dip_statistic(projected);
        const double p = pvalue(dip, static_cast<int>(projected.size()));
        rec.p_values.push_back(p);
        rec.votes.push_back(p >= alpha ? 1 : 0);
        yes += rec.votes.back();
    }
    rec.verdict = yes > votes / 2 ? Verdict::unimodal : Verdict::multimodal;
    return rec;
}

}  // namespace uniforce
