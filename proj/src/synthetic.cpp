#include "uniforce/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "uniforce/errors.hpp"
#include "uniforce/rng.hpp"

namespace uniforce {

namespace {

constexpr double kPi = std::numbers::pi;

// Split n points over component weights, largest-remainder rounding.
std::vector<int> allocate(int n, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<int> sizes(weights.size());
    std::vector<std::pair<double, size_t>> rema;
    int assigned = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        const double exact = n * weights[i] / total;
        sizes[i] = static_cast<int>(std::floor(exact));
        assigned += sizes[i];
        rema.emplace_back(exact - sizes[i], i);
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    for (int r = 0; r < n - assigned; ++r) sizes[rema[static_cast<size_t>(r)].second]++;
    return sizes;
}

struct Builder {
    Matrix points;
    std::vector<int> labels;
    Eigen::Index row = 0;

    Builder(int n, int d) : points(n, d) { labels.reserve(static_cast<size_t>(n)); }

    void add(double x, double y, int label) {
        points(row, 0) = x;
        points(row, 1) = y;
        ++row;
        labels.push_back(label);
    }
};

void gen_blob(Builder& b, Rng& rng, int n, double cx, double cy, double sx, double sy, int label) {
    for (int i = 0; i < n; ++i) b.add(cx + sx * rng.normal(), cy + sy * rng.normal(), label);
}

void gen_ring(Builder& b, Rng& rng, int n, double cx, double cy, double radius, double sigma,
              int label, double a0 = 0.0, double a1 = 2.0 * kPi) {
    for (int i = 0; i < n; ++i) {
        const double t = rng.uniform(a0, a1);
        const double r = radius + sigma * rng.normal();
        b.add(cx + r * std::cos(t), cy + r * std::sin(t), label);
    }
}

void gen_bar(Builder& b, Rng& rng, int n, double x0, double y0, double x1, double y1, double sigma,
             int label) {
    const double dx = x1 - x0, dy = y1 - y0;
    const double len = std::hypot(dx, dy);
    const double nx = -dy / len, ny = dx / len;
    for (int i = 0; i < n; ++i) {
        const double t = rng.uniform();
        const double off = sigma * rng.normal();
        b.add(x0 + t * dx + off * nx, y0 + t * dy + off * ny, label);
    }
}

}  // namespace

Shape shape_from_string(const std::string& s) {
    if (s == "blobs") return Shape::blobs;
    if (s == "rings") return Shape::rings;
    if (s == "moons") return Shape::moons;
    if (s == "ring_with_structures") return Shape::ring_with_structures;
    throw InvalidSpec("unknown shape: " + s);
}

std::string to_string(Shape s) {
    switch (s) {
        case Shape::blobs: return "blobs";
        case Shape::rings: return "rings";
        case Shape::moons: return "moons";
        case Shape::ring_with_structures: return "ring_with_structures";
    }
    return "?";
}

Dataset generate(const SyntheticSpec& spec) {
    if (spec.n_points < 4) throw InvalidSpec("n_points must be at least 4");
    if (spec.scale <= 0.0) throw InvalidSpec("scale must be positive");
    if (spec.noise < 0.0) throw InvalidSpec("noise must be non-negative");

    Rng rng(spec.seed);
    Builder b(spec.n_points, 2);

    switch (spec.shape) {
        case Shape::blobs: {
            // Three components at (0,0), (10,0), (0,10), sigma = noise.
            const double c[3][2] = {{0, 0}, {10, 0}, {0, 10}};
            const auto sizes = allocate(spec.n_points, {1, 1, 1});
            for (int k = 0; k < 3; ++k)
                gen_blob(b, rng, sizes[static_cast<size_t>(k)], c[k][0] * spec.scale,
                         c[k][1] * spec.scale, spec.noise, spec.noise, k);
            break;
        }
        case Shape::rings: {
            // Two concentric rings, radii 1 and 5 (times scale), radial sigma = noise.
            const double radii[2] = {1.0, 5.0};
            const auto sizes = allocate(spec.n_points, {1, 1});
            for (int k = 0; k < 2; ++k)
                gen_ring(b, rng, sizes[static_cast<size_t>(k)], 0, 0, radii[k] * spec.scale,
                         spec.noise, k);
            break;
        }
        case Shape::moons: {
            const auto sizes = allocate(spec.n_points, {1, 1});
            for (int i = 0; i < sizes[0]; ++i) {
                const double t = rng.uniform(0.0, kPi);
                b.add(spec.scale * (std::cos(t) + spec.noise * rng.normal()),
                      spec.scale * (std::sin(t) + spec.noise * rng.normal()), 0);
            }
            for (int i = 0; i < sizes[1]; ++i) {
                const double t = rng.uniform(0.0, kPi);
                b.add(spec.scale * (1.0 - std::cos(t) + spec.noise * rng.normal()),
                      spec.scale * (0.5 - std::sin(t) + spec.noise * rng.normal()), 1);
            }
            break;
        }
        case Shape::ring_with_structures: {
            // One enclosing ring around five interior structures (6 labels).
            // Geometry, in units of `scale`, jitter sigmas multiplied by `noise`:
            //   0 enclosing ring   center (0,0)      radius 10    sigma 0.40
            //   1 gaussian blob    center (-4.5,3.5) sx 0.80  sy 0.80
            //   2 gaussian blob    center (4.5,4.0)  sx 0.70  sy 0.45
            //   3 elongated bar    (-5.5,-3.0)..(-0.5,-4.5)     sigma 0.30
            //   4 arc              center (3.5,-1.5) radius 3, angles [-80,80] deg, sigma 0.28
            //   5 small ring       center (0.0,0.5)  radius 1.6  sigma 0.22
            const auto sizes = allocate(spec.n_points, {0.30, 0.14, 0.14, 0.14, 0.14, 0.14});
            const double s = spec.scale, nz = spec.noise;
            gen_ring(b, rng, sizes[0], 0, 0, 10 * s, 0.40 * nz * s, 0);
            gen_blob(b, rng, sizes[1], -4.5 * s, 3.5 * s, 0.80 * nz * s, 0.80 * nz * s, 1);
            gen_blob(b, rng, sizes[2], 4.5 * s, 4.0 * s, 0.70 * nz * s, 0.45 * nz * s, 2);
            gen_bar(b, rng, sizes[3], -5.5 * s, -3.0 * s, -0.5 * s, -4.5 * s, 0.30 * nz * s, 3);
            gen_ring(b, rng, sizes[4], 3.5 * s, -1.5 * s, 3.0 * s, 0.28 * nz * s, 4,
                     -80.0 * kPi / 180.0, 80.0 * kPi / 180.0);
            gen_ring(b, rng, sizes[5], 0.0 * s, 0.5 * s, 1.6 * s, 0.22 * nz * s, 5);
            break;
        }
    }

    Dataset ds;
    ds.points = std::move(b.points);
    ds.labels = std::move(b.labels);
    ds.feature_names = {"x", "y"};
    return ds;
}

}  // namespace uniforce
