#include "subgap/grid.hpp"

#include <cmath>

namespace subgap::gaplab {

DiscGrid DiscGrid::make(Complex center, double radius, int resolution) {
    if (radius <= 0.0) throw InputError("DiscGrid: radius must be positive");
    if (resolution < 4) throw InputError("DiscGrid: resolution too small");
    DiscGrid g;
    g.center = center;
    g.radius = radius;
    g.resolution = resolution;
    g.spacing = 2.0 * radius / resolution;
    g.index_of.assign(static_cast<size_t>(resolution) * resolution, -1);
    for (int y = 0; y < resolution; ++y) {
        for (int x = 0; x < resolution; ++x) {
            const Complex z = center + Complex(-radius + (x + 0.5) * g.spacing,
                                               -radius + (y + 0.5) * g.spacing);
            if (std::abs(z - center) < radius) {
                g.index_of[static_cast<size_t>(g.lattice_index(x, y))] = g.active_count();
                g.ix.push_back(x);
                g.iy.push_back(y);
                g.points.push_back(z);
            }
        }
    }
    if (g.active_count() < 100) throw InputError("DiscGrid: under-resolved grid (< 100 active points)");
    return g;
}

DiscGrid DiscGrid::scaled(double R) const {
    if (R <= 0.0) throw InputError("DiscGrid::scaled: R must be positive");
    DiscGrid g = *this;
    g.center = center * R;
    g.radius = radius * R;
    g.spacing = spacing * R;
    for (auto& z : g.points) z *= R;
    return g;
}

} // namespace subgap::gaplab
