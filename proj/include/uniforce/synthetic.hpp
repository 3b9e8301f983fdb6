#pragma once

#include <cstdint>
#include <string>

#include "uniforce/dataset.hpp"

namespace uniforce {

enum class Shape { blobs, rings, moons, ring_with_structures };

Shape shape_from_string(const std::string& s);
std::string to_string(Shape s);

// Deterministic for a fixed spec (including seed). Labels record the generating component.
// `noise` is the per-shape jitter sigma, `scale` a global coordinate multiplier.
struct SyntheticSpec {
    Shape shape = Shape::blobs;
    int n_points = 1500;
    double noise = 1.0;
    double scale = 1.0;
    std::uint64_t seed = 0;
};

Dataset generate(const SyntheticSpec& spec);

}  // namespace uniforce
