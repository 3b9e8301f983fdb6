#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uniforce/types.hpp"

namespace uniforce {

enum class PValueMethod { bootstrap, table };

std::string to_string(PValueMethod m);

struct DipResult {
    double dip = 0.0;
    double p_value = 1.0;
    int n = 0;
    PValueMethod method = PValueMethod::table;
};

// Hartigan dip statistic: the smallest sup-norm distance between the sample's
// empirical CDF and any unimodal CDF. Input need not be sorted; ties are allowed.
// Result is in [0, 0.25] and at least 1/(2n) for samples with >= 2 distinct values.
double dip_statistic(std::vector<double> sample);

template <typename Derived>
double dip_statistic(const Eigen::MatrixBase<Derived>& v) {
    std::vector<double> s(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) s[static_cast<size_t>(i)] = v(i);
    return dip_statistic(std::move(s));
}

// Same statistic for an already-sorted sample (no validation); the hot path for bootstraps.
double dip_of_sorted(const std::vector<double>& sorted);

// p = (1 + #{uniform bootstrap dips >= dip}) / (reps + 1), deterministic per seed.
// Replicates use substreams derived from (seed, n, rep) so threading never changes the result.
double dip_pvalue_bootstrap(double dip, int n, int reps, std::uint64_t seed);

// Bootstrap quantiles of the dip of Uniform(0,1) samples over a (size, prob) grid.
struct DipTable {
    std::vector<int> sizes;      // ascending, >= 4
    std::vector<double> probs;   // ascending, in (0,1)
    Matrix quantiles;            // sizes.size() x probs.size()
    int reps = 0;
    std::uint64_t seed = 0;

    // Interpolated p-value: z = sqrt(n)*dip against per-size z-quantile curves,
    // sizes bracketed linearly, n clamped to the tabulated range (with a one-shot warning).
    double p_value(double dip, int n) const;

    void save(const std::string& path) const;
    static DipTable load(const std::string& path);

    // The grid shipped with the CLI; brackets the alpha = 0.001 decision region.
    static std::vector<int> default_sizes();
    static std::vector<double> default_probs();
    static constexpr int kDefaultReps = 10000;
    static constexpr std::uint64_t kDefaultSeed = 1414213562;
};

DipTable build_dip_table(const std::vector<int>& sizes, const std::vector<double>& probs, int reps,
                         std::uint64_t seed);

}  // namespace uniforce
