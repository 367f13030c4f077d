#pragma once

#include <complex>
#include <vector>

#include "subgap/errors.hpp"

namespace subgap::gaplab {

using Complex = std::complex<double>;

// Cell-centered grid on the bounding square of a disc; points with
// |z - center| < radius are active. spacing h = 2 * radius / resolution.
struct DiscGrid {
    Complex center{0.0, 0.0};
    double radius = 1.0;
    int resolution = 0;
    double spacing = 0.0;

    std::vector<int> index_of;  // size N*N; -1 when inactive, else active index
    std::vector<int> ix, iy;    // lattice coordinates per active point
    std::vector<Complex> points;

    static DiscGrid make(Complex center, double radius, int resolution);

    // Same lattice and mask with every point scaled by R (exact change of
    // variables used by the scaling identity).
    DiscGrid scaled(double R) const;

    int active_count() const { return static_cast<int>(points.size()); }
    int lattice_index(int x, int y) const { return y * resolution + x; }
    int active_at(int x, int y) const {
        if (x < 0 || y < 0 || x >= resolution || y >= resolution) return -1;
        return index_of[static_cast<size_t>(lattice_index(x, y))];
    }
};

} // namespace subgap::gaplab
