#include "geo/grid.hpp"

namespace geo {

Grid::Grid(int nodes, double radius) : nodes_(nodes), radius_(radius) {}

double Grid::coord(int k) const {
    return static_cast<double>(2 * k - (nodes_ - 1)) * radius_ / static_cast<double>(nodes_ - 1);
}

bool in_disc(double u, double v, double radius) {
    return u * u + v * v <= radius * radius * (1.0 + 1e-12);
}

bool Grid::inside(int i, int j) const { return in_disc(coord(i), coord(j), radius_); }

std::vector<GridPoint> Grid::masked_points() const {
    std::vector<GridPoint> pts;
    for (int j = 0; j < nodes_; ++j) {
        for (int i = 0; i < nodes_; ++i) {
            if (inside(i, j)) pts.push_back({i, j, coord(i), coord(j)});
        }
    }
    return pts;
}

}  // namespace geo
