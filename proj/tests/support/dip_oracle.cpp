#include "support/dip_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uniforce::testing {

namespace {

constexpr double kTol = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower convex hull of (x_i, y_i), evaluated back at every x_i.
std::vector<double> lower_hull_values(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t p = x.size();
    std::vector<size_t> hull;
    for (size_t t = 0; t < p; ++t) {
        while (hull.size() >= 2) {
            const size_t a = hull[hull.size() - 2], b = hull.back();
            if ((y[b] - y[a]) * (x[t] - x[b]) >= (y[t] - y[b]) * (x[b] - x[a]))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(t);
    }
    std::vector<double> vals(p);
    size_t seg = 0;
    for (size_t t = 0; t < p; ++t) {
        while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[t]) ++seg;
        const size_t a = hull[seg];
        const size_t b = seg + 1 < hull.size() ? hull[seg + 1] : hull[seg];
        if (a == b || x[b] == x[a]) {
            vals[t] = y[a];
        } else {
            const double w = (x[t] - x[a]) / (x[b] - x[a]);
            vals[t] = y[a] + w * (y[b] - y[a]);
        }
    }
    return vals;
}

}  // namespace

bool convex_band_feasible(const std::vector<double>& x, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
    const size_t p = x.size();
    if (p == 0) return true;
    for (size_t i = 0; i < p; ++i) {
        if (lo[i] > hi[i] + kTol) return false;
        if (hi[i] < -kTol) return false;  // g is nondecreasing from 0
    }

    // Virtual origin far left pins g to 0 there; a convex nondecreasing extension to
    // -inf always exists from it (flat at zero, then rise).
    const double span = std::max(1.0, x.back() - x.front());
    std::vector<double> xs(p + 1), his(p + 1), los(p + 1);
    xs[0] = x.front() - 10.0 * span - 1.0;
    his[0] = 0.0;
    los[0] = 0.0;
    for (size_t i = 0; i < p; ++i) {
        xs[i + 1] = x[i];
        his[i + 1] = hi[i];
        los[i + 1] = lo[i];
    }
    // Monotone g obeys every later upper bound too.
    for (size_t i = p; i-- > 0;) his[i] = std::min(his[i], his[i + 1]);
    if (his[0] < -kTol) return false;

    // Any valid g is below the hull of the effective upper bounds, and the hull itself
    // is a valid witness, so feasibility is exactly "hull clears the lower bounds".
    const std::vector<double> hull = lower_hull_values(xs, his);
    for (size_t i = 0; i <= p; ++i)
        if (hull[i] < los[i] - kTol) return false;
    return true;
}

namespace {

bool concave_band_feasible(const std::vector<double>& x, const std::vector<double>& lo,
                           const std::vector<double>& hi) {
    // Mirror map (t, y) -> (-t, 1-y) turns a concave CDF tail rising to 1 into a
    // convex one rising from 0.
    const size_t p = x.size();
    std::vector<double> xs(p), los(p), his(p);
    for (size_t i = 0; i < p; ++i) {
        xs[i] = -x[p - 1 - i];
        los[i] = 1.0 - hi[p - 1 - i];
        his[i] = 1.0 - lo[p - 1 - i];
    }
    return convex_band_feasible(xs, los, his);
}

struct Bands {
    std::vector<double> x, lo, hi;

    void push(double xi, double l, double h) {
        x.push_back(xi);
        lo.push_back(l);
        hi.push_back(h);
    }
};

// Smallest feasible pinned value at the last point of the convex piece, +inf if none.
// Feasibility is monotone in the pin: raising it only loosens the effective bounds.
double min_convex_end(Bands b) {
    if (b.x.empty()) return 0.0;
    const size_t e = b.x.size() - 1;
    double vlo = std::max(b.lo[e], 0.0), vhi = b.hi[e];
    if (vlo > vhi + kTol) return kInf;
    b.lo[e] = vhi;
    b.hi[e] = vhi;
    if (!convex_band_feasible(b.x, b.lo, b.hi)) return kInf;
    for (int it = 0; it < 32; ++it) {
        const double mid = 0.5 * (vlo + vhi);
        b.lo[e] = mid;
        b.hi[e] = mid;
        if (convex_band_feasible(b.x, b.lo, b.hi))
            vhi = mid;
        else
            vlo = mid;
    }
    return vhi;
}

// Largest feasible pinned value at the first point of the concave piece, -inf if none.
double max_concave_start(Bands b) {
    if (b.x.empty()) return 1.0;
    double vlo = b.lo[0], vhi = std::min(b.hi[0], 1.0);
    if (vlo > vhi + kTol) return -kInf;
    b.lo[0] = vlo;
    b.hi[0] = vlo;
    if (!concave_band_feasible(b.x, b.lo, b.hi)) return -kInf;
    for (int it = 0; it < 32; ++it) {
        const double mid = 0.5 * (vlo + vhi);
        b.lo[0] = mid;
        b.hi[0] = mid;
        if (concave_band_feasible(b.x, b.lo, b.hi))
            vlo = mid;
        else
            vhi = mid;
    }
    return vlo;
}

struct Ecdf {
    std::vector<double> u;    // unique values
    std::vector<double> flo;  // F(u-), in [0,1]
    std::vector<double> fhi;  // F(u)
    int m = 0;
};

// Error-band feasibility for one mode description at error eps.
// mode_point >= 0: single mode at u[mode_point] (atom allowed there).
// mode_point == -1: single mode at position mx inside the open gap right of gap_left.
// mode_point == -2: relaxed mode interval spanning the whole gap right of gap_left
//                   (gap_left == -1 means the interval left of u[0], m-1 right of u[m-1]).
bool mode_feasible(const Ecdf& f, int mode_point, int gap_left, double mx, double eps) {
    Bands left, right;
    auto band_two_sided = [&](int t) {
        return std::pair<double, double>{f.fhi[t] - eps, f.flo[t] + eps};
    };

    if (mode_point >= 0) {
        const int t = mode_point;
        for (int i = 0; i < t; ++i) {
            auto [l, h] = band_two_sided(i);
            left.push(f.u[i], l, h);
        }
        left.push(f.u[t], f.flo[t] - eps, f.flo[t] + eps);  // G(mode-)
        right.push(f.u[t], f.fhi[t] - eps, f.fhi[t] + eps);  // G(mode)
        for (int i = t + 1; i < f.m; ++i) {
            auto [l, h] = band_two_sided(i);
            right.push(f.u[i], l, h);
        }
    } else if (mode_point == -1) {
        const int t = gap_left;
        for (int i = 0; i <= t; ++i) {
            auto [l, h] = band_two_sided(i);
            left.push(f.u[i], l, h);
        }
        left.push(mx, f.fhi[t] - eps, f.fhi[t] + eps);
        right.push(mx, f.fhi[t] - eps, f.fhi[t] + eps);
        for (int i = t + 1; i < f.m; ++i) {
            auto [l, h] = band_two_sided(i);
            right.push(f.u[i], l, h);
        }
    } else {
        for (int i = 0; i <= gap_left; ++i) {
            auto [l, h] = band_two_sided(i);
            left.push(f.u[i], l, h);
        }
        for (int i = gap_left + 1; i < f.m; ++i) {
            auto [l, h] = band_two_sided(i);
            right.push(f.u[i], l, h);
        }
    }

    const double vl = min_convex_end(left);
    if (vl == kInf) return false;
    const double vr = max_concave_start(right);
    if (vr == -kInf) return false;
    return vl <= vr + kTol;
}

double dip_for_mode(const Ecdf& f, int mode_point, int gap_left, double mx) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 34; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mode_feasible(f, mode_point, gap_left, mx, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

DipBounds dip_bruteforce_bounds(std::vector<double> sample) {
    if (sample.size() < 2) throw std::invalid_argument("oracle needs n >= 2");
    std::sort(sample.begin(), sample.end());
    const int n = static_cast<int>(sample.size());

    Ecdf f;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && sample[j] == sample[i]) ++j;
        f.u.push_back(sample[i]);
        f.flo.push_back(static_cast<double>(i) / n);
        f.fhi.push_back(static_cast<double>(j) / n);
        i = j;
    }
    f.m = static_cast<int>(f.u.size());
    if (f.m == 1) return {0.0, 0.0};

    // Upper bound: exact single-mode dips at every value and ternary-refined gap modes.
    double ub = kInf;
    for (int t = 0; t < f.m; ++t) ub = std::min(ub, dip_for_mode(f, t, -1, 0.0));
    for (int t = 0; t + 1 < f.m; ++t) {
        double a = f.u[t], b = f.u[t + 1];
        ub = std::min(ub, dip_for_mode(f, -1, t, 0.5 * (a + b)));
        for (int it = 0; it < 24; ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (dip_for_mode(f, -1, t, m1) <= dip_for_mode(f, -1, t, m2))
                b = m2;
            else
                a = m1;
        }
        ub = std::min(ub, dip_for_mode(f, -1, t, 0.5 * (a + b)));
    }

    // Lower bound: the mode interval relaxed to whole gaps covers every unimodal CDF.
    double lb = kInf;
    for (int t = -1; t < f.m; ++t) lb = std::min(lb, dip_for_mode(f, -2, t, 0.0));

    return {std::min(lb, ub), ub};
}

}  // namespace uniforce::testing
