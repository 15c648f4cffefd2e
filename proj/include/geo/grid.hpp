#pragma once

#include <cstddef>
#include <vector>

namespace geo {

struct GridPoint {
    int i = 0;  ///< u index
    int j = 0;  ///< v index
    double u = 0.0;
    double v = 0.0;
};

/// Cartesian nodes x n nodes sampling of [-r, r]^2 with a disc mask.
///
/// Node k sits at (2k - (nodes-1)) r / (nodes-1), so for odd node counts
/// the middle node is exactly 0. Masked points are listed in row-major
/// order: v index outer, u index inner.
class Grid {
public:
    Grid(int nodes, double radius);

    int nodes() const { return nodes_; }
    double radius() const { return radius_; }
    double spacing() const { return 2.0 * radius_ / (nodes_ - 1); }
    double coord(int k) const;
    bool has_center() const { return nodes_ % 2 == 1; }
    int center() const { return (nodes_ - 1) / 2; }
    bool inside(int i, int j) const;
    std::size_t flat(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_) + static_cast<std::size_t>(i);
    }
    std::vector<GridPoint> masked_points() const;

private:
    int nodes_;
    double radius_;
};

/// True when u^2 + v^2 <= radius^2 up to a relative 1e-12 slack.
bool in_disc(double u, double v, double radius);

}  // namespace geo
