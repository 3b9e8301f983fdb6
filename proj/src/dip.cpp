#include "uniforce/dip.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "uniforce/dataset.hpp"
#include "uniforce/errors.hpp"
#include "uniforce/rng.hpp"

namespace uniforce {

namespace {

constexpr std::uint64_t kBootstrapDomain = 0xd1b007;
constexpr std::uint64_t kTableDomain = 0xd17ab1e;

// Empirical CDF of a sorted sample over its unique values, in count units:
// clo[t] samples strictly below u[t], chi[t] samples <= u[t].
struct StepCdf {
    std::vector<double> u;
    std::vector<double> clo;
    std::vector<double> chi;
};

StepCdf dedupe(const std::vector<double>& sorted) {
    StepCdf f;
    const size_t n = sorted.size();
    f.u.reserve(n);
    f.clo.reserve(n);
    f.chi.reserve(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        f.u.push_back(sorted[i]);
        f.clo.push_back(static_cast<double>(i));
        f.chi.push_back(static_cast<double>(j));
        i = j;
    }
    return f;
}

// Touch indices of the greatest convex minorant of (u[t], clo[t]) over [lo, hi],
// or the least concave majorant of (u[t], chi[t]) when `upper`.
void hull_indices(const StepCdf& f, int lo, int hi, bool upper, std::vector<int>& out) {
    const std::vector<double>& y = upper ? f.chi : f.clo;
    out.clear();
    for (int t = lo; t <= hi; ++t) {
        while (out.size() >= 2) {
            const int a = out[out.size() - 2];
            const int b = out.back();
            // slope(a,b) vs slope(b,t), cross-multiplied (u strictly increasing)
            const double lhs = (y[b] - y[a]) * (f.u[t] - f.u[b]);
            const double rhs = (y[t] - y[b]) * (f.u[b] - f.u[a]);
            const bool pop = upper ? (lhs <= rhs) : (lhs >= rhs);
            if (!pop) break;
            out.pop_back();
        }
        out.push_back(t);
    }
}

// Piecewise-linear evaluation of a hull polyline at the abscissas of increasing t.
struct CurveWalker {
    const StepCdf& f;
    const std::vector<int>& idx;
    const std::vector<double>& y;
    size_t seg = 0;

    double at(int t) {
        while (f.u[idx[seg + 1]] < f.u[t]) ++seg;
        const int a = idx[seg];
        const int b = idx[seg + 1];
        const double w = (f.u[t] - f.u[a]) / (f.u[b] - f.u[a]);
        return y[a] + w * (y[b] - y[a]);
    }

    int right_end() const { return idx[seg + 1]; }
    int left_end() const { return idx[seg]; }
};

}  // namespace

double dip_of_sorted(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || x.front() == x.back()) return 0.0;

    const StepCdf f = dedupe(x);
    const int m = static_cast<int>(f.u.size());

    int low = 0;
    int high = m - 1;
    double best = 1.0;  // max two-sided band gap so far, in counts; dip = best / (2n)

    std::vector<int> gcm, lcm;
    for (int iter = 0; iter < 2 * m + 2 && low < high; ++iter) {
        hull_indices(f, low, high, false, gcm);
        hull_indices(f, low, high, true, lcm);

        // Largest gap between the two hull curves. A terminal value stack is its own
        // candidate: the modal interval may collapse onto it, where an atom of the
        // unimodal CDF absorbs the whole jump.
        double d = f.chi[low] - f.clo[low];
        int new_low = low, new_high = low;
        if (f.chi[high] - f.clo[high] > d) {
            d = f.chi[high] - f.clo[high];
            new_low = high;
            new_high = high;
        }

        // Interior touch points: the gap at a minorant touch is measured against the
        // majorant curve and vice versa.
        CurveWalker on_gcm{f, gcm, f.clo};
        CurveWalker on_lcm{f, lcm, f.chi};
        size_t gi = 1, li = 1;
        while (gi + 1 < gcm.size() || li + 1 < lcm.size()) {
            const bool take_gcm =
                li + 1 >= lcm.size() || (gi + 1 < gcm.size() && gcm[gi] <= lcm[li]);
            if (take_gcm) {
                const int t = gcm[gi++];
                const double gap = on_lcm.at(t) - f.clo[t];
                if (gap > d) {
                    d = gap;
                    new_low = t;
                    new_high = on_lcm.right_end();
                }
            } else {
                const int t = lcm[li++];
                const double gap = f.chi[t] - on_gcm.at(t);
                if (gap > d) {
                    d = gap;
                    new_low = on_gcm.left_end();
                    new_high = t;
                }
            }
        }

        if (d <= best || (new_low == low && new_high == high)) break;

        // Fit errors of the convex minorant over the stretch leaving the modal interval
        // on the left, and of the concave majorant on the right. The deviation at the
        // new modal boundary itself is skipped: if the mode settles there, its atom
        // absorbs that jump, and otherwise a later cycle charges it.
        double dl = 0.0;
        for (size_t s = 0; s + 1 < gcm.size() && gcm[s + 1] <= new_low; ++s) {
            const int a = gcm[s], b = gcm[s + 1];
            const double slope = (f.clo[b] - f.clo[a]) / (f.u[b] - f.u[a]);
            for (int t = a; t <= b; ++t) {
                if (t == new_low) continue;
                dl = std::max(dl, f.chi[t] - (f.clo[a] + slope * (f.u[t] - f.u[a])));
            }
        }
        double du = 0.0;
        for (size_t s = 0; s + 1 < lcm.size(); ++s) {
            const int a = lcm[s], b = lcm[s + 1];
            if (a < new_high) continue;
            const double slope = (f.chi[b] - f.chi[a]) / (f.u[b] - f.u[a]);
            for (int t = a; t <= b; ++t) {
                if (t == new_high) continue;
                du = std::max(du, (f.chi[a] + slope * (f.u[t] - f.u[a])) - f.clo[t]);
            }
        }

        best = std::max({best, dl, du});
        low = new_low;
        high = new_high;
        if (best >= d) break;
    }

    return best / (2.0 * n);
}

double dip_statistic(std::vector<double> sample) {
    if (sample.size() < 2)
        throw TooFewPoints("dip statistic needs at least 2 values, got " +
                           std::to_string(sample.size()));
    for (double v : sample)
        if (!std::isfinite(v)) throw NonFiniteValue("dip statistic input contains a non-finite value");
    std::sort(sample.begin(), sample.end());
    return dip_of_sorted(sample);
}

namespace {

// Runs fn(r) for r in [0, count) over a few worker threads; fn must only touch
// its own slot so the schedule cannot influence results.
void parallel_for(int count, const std::function<void(int)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, 8);
    if (workers <= 1 || count < 32) {
        for (int r = 0; r < count; ++r) fn(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int r = next.fetch_add(1); r < count; r = next.fetch_add(1)) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

double uniform_sample_dip(std::uint64_t seed, int n, std::vector<double>& buf) {
    Rng rng(seed);
    buf.resize(static_cast<size_t>(n));
    for (double& v : buf) v = rng.uniform();
    std::sort(buf.begin(), buf.end());
    return dip_of_sorted(buf);
}

}  // namespace

double dip_pvalue_bootstrap(double dip, int n, int reps, std::uint64_t seed) {
    if (reps < 100) throw InvalidReps("bootstrap repetitions must be >= 100");
    if (n < 2) throw TooFewPoints("bootstrap p-value needs sample size >= 2");
    if (dip < 0.0) throw InternalError("negative dip passed to bootstrap p-value");

    std::atomic<int> hits{0};
    parallel_for(reps, [&](int r) {
        thread_local std::vector<double> buf;
        const double d = uniform_sample_dip(
            mix_seed({kBootstrapDomain, seed, static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(r)}),
            n, buf);
        if (d >= dip) hits.fetch_add(1, std::memory_order_relaxed);
    });
    return (1.0 + hits.load()) / (reps + 1.0);
}

DipTable build_dip_table(const std::vector<int>& sizes, const std::vector<double>& probs, int reps,
                         std::uint64_t seed) {
    if (sizes.empty() || probs.empty()) throw InvalidGrid("dip table grid must be non-empty");
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 4) throw InvalidGrid("dip table sizes must be >= 4");
        if (i && sizes[i] <= sizes[i - 1]) throw InvalidGrid("dip table sizes must be ascending");
    }
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0 || probs[i] >= 1.0) throw InvalidGrid("dip table probs must lie in (0,1)");
        if (i && probs[i] <= probs[i - 1]) throw InvalidGrid("dip table probs must be ascending");
    }
    if (reps < 1000) throw InvalidGrid("dip table needs at least 1000 repetitions");

    DipTable table;
    table.sizes = sizes;
    table.probs = probs;
    table.reps = reps;
    table.seed = seed;
    table.quantiles.resize(static_cast<Eigen::Index>(sizes.size()),
                           static_cast<Eigen::Index>(probs.size()));

    std::vector<double> dips(static_cast<size_t>(reps));
    for (size_t si = 0; si < sizes.size(); ++si) {
        const int n = sizes[si];
        parallel_for(reps, [&](int r) {
            thread_local std::vector<double> buf;
            dips[static_cast<size_t>(r)] = uniform_sample_dip(
                mix_seed({kTableDomain, seed, static_cast<std::uint64_t>(n),
                          static_cast<std::uint64_t>(r)}),
                n, buf);
        });
        std::sort(dips.begin(), dips.end());
        for (size_t pi = 0; pi < probs.size(); ++pi) {
            const double h = probs[pi] * (reps - 1);
            const size_t i0 = static_cast<size_t>(std::floor(h));
            const size_t i1 = std::min(i0 + 1, static_cast<size_t>(reps - 1));
            const double w = h - static_cast<double>(i0);
            table.quantiles(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(pi)) =
                dips[i0] + w * (dips[i1] - dips[i0]);
        }
    }
    return table;
}

double DipTable::p_value(double dip, int n) const {
    if (sizes.empty() || probs.empty()) throw EmptyTable("dip table is empty");
    const int n_clamped = std::clamp(n, sizes.front(), sizes.back());
    if (n_clamped != n) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::cerr << "warning: sample size " << n << " outside dip table range ["
                      << sizes.front() << ", " << sizes.back() << "], clamping\n";
    }

    // Bracket n between tabulated sizes and blend the z = sqrt(n)*dip quantile curves.
    size_t hi = 0;
    while (hi + 1 < sizes.size() && sizes[hi] < n_clamped) ++hi;
    const size_t lo = hi > 0 && sizes[hi] >= n_clamped ? hi - 1 : hi;
    double w = 0.0;
    if (sizes[hi] != sizes[lo])
        w = static_cast<double>(n_clamped - sizes[lo]) / (sizes[hi] - sizes[lo]);
    w = std::clamp(w, 0.0, 1.0);

    const double rl = std::sqrt(static_cast<double>(sizes[lo]));
    const double rh = std::sqrt(static_cast<double>(sizes[hi]));
    const double z = std::sqrt(static_cast<double>(n_clamped)) * dip;

    std::vector<double> zq(probs.size());
    for (size_t pi = 0; pi < probs.size(); ++pi)
        zq[pi] = (1.0 - w) * rl * quantiles(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(pi)) +
                 w * rh * quantiles(static_cast<Eigen::Index>(hi), static_cast<Eigen::Index>(pi));

    // CDF of the null dip in z units: piecewise linear through (0,0) and the grid,
    // extrapolated with the last segment's slope above the grid.
    double cdf;
    if (z <= 0.0) {
        cdf = 0.0;
    } else if (z <= zq.front()) {
        cdf = probs.front() * z / zq.front();
    } else if (z >= zq.back()) {
        if (zq.size() >= 2 && zq.back() > zq[zq.size() - 2]) {
            const double slope =
                (probs.back() - probs[probs.size() - 2]) / (zq.back() - zq[zq.size() - 2]);
            cdf = probs.back() + slope * (z - zq.back());
        } else {
            cdf = probs.back();
        }
    } else {
        size_t j = 1;
        while (zq[j] < z) ++j;
        const double t = (z - zq[j - 1]) / (zq[j] - zq[j - 1]);
        cdf = probs[j - 1] + t * (probs[j] - probs[j - 1]);
    }
    cdf = std::clamp(cdf, 0.0, 1.0);

    const double floor_p = reps > 0 ? 1.0 / (reps + 1.0) : 0.0;
    return std::clamp(1.0 - cdf, floor_p, 1.0);
}

void DipTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dip table: " + path);
    out << "version,1,probs";
    for (double p : probs) out << ',' << format_double(p);
    out << "\nreps," << reps << "\nseed," << seed << '\n';
    for (size_t si = 0; si < sizes.size(); ++si) {
        out << sizes[si];
        for (size_t pi = 0; pi < probs.size(); ++pi)
            out << ',' << format_double(quantiles(static_cast<Eigen::Index>(si),
                                                  static_cast<Eigen::Index>(pi)));
        out << '\n';
    }
}

DipTable DipTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dip table: " + path);

    auto next_line = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line)) throw ParseError(std::string("dip table: missing ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        return cells;
    };

    DipTable t;
    const auto head = split(next_line("version line"));
    if (head.size() < 4 || head[0] != "version" || head[1] != "1" || head[2] != "probs")
        throw ParseError("dip table: unrecognized version line");
    for (size_t i = 3; i < head.size(); ++i) t.probs.push_back(std::stod(head[i]));

    const auto reps_line = split(next_line("reps line"));
    if (reps_line.size() != 2 || reps_line[0] != "reps")
        throw ParseError("dip table: malformed reps line");
    t.reps = std::stoi(reps_line[1]);

    const auto seed_line = split(next_line("seed line"));
    if (seed_line.size() != 2 || seed_line[0] != "seed")
        throw ParseError("dip table: malformed seed line");
    t.seed = std::stoull(seed_line[1]);

    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.probs.size() + 1)
            throw ParseError("dip table: row has wrong column count");
        t.sizes.push_back(std::stoi(cells[0]));
        std::vector<double> q;
        for (size_t i = 1; i < cells.size(); ++i) q.push_back(std::stod(cells[i]));
        rows.push_back(std::move(q));
    }
    if (rows.empty()) throw EmptyTable("dip table has no size rows: " + path);

    t.quantiles.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(t.probs.size()));
    for (size_t si = 0; si < rows.size(); ++si) {
        if (si && t.sizes[si] <= t.sizes[si - 1])
            throw ParseError("dip table: sizes not ascending");
        for (size_t pi = 0; pi < t.probs.size(); ++pi) {
            t.quantiles(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(pi)) = rows[si][pi];
            if (pi && rows[si][pi] + 1e-12 < rows[si][pi - 1])
                throw ParseError("dip table: quantiles not monotone in probs");
        }
    }
    return t;
}

std::vector<int> DipTable::default_sizes() {
    return {30, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
}

std::vector<double> DipTable::default_probs() {
    return {0.5, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9995, 0.9999};
}

std::string to_string(PValueMethod m) {
    return m == PValueMethod::bootstrap ? "bootstrap" : "table";
}

}  // namespace uniforce
