#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mml/grid.hpp"

namespace mml {

enum class Shape { ball, cube };

/// Relative cell offsets of an open ball, organized as runs along the last
/// axis. Membership is strict and evaluated in index space: a cell at integer
/// offset o belongs iff |o|^2 < (radius / spacing)^2. For dyadic radii on
/// power-of-two grids this predicate is exact.
struct BallMask {
    struct Row {
        std::array<int, kMaxDim - 1> pre{};  // offsets on the leading axes
        int halfwidth = 0;                   // last-axis run [-halfwidth, +halfwidth]
    };
    double radius = 0.0;
    std::vector<Row> rows;
    std::int64_t cell_total = 0;  // unclipped count

    static BallMask build(const GridSpec& grid, double radius);
};

/// Masks for every radius of a set, aligned by index.
std::vector<BallMask> build_ball_masks(const GridSpec& grid, const RadiusSet& radii);

/// Fast region sums over one spatial slice.
///
/// A prefix sum along the last axis makes a ball sum cost one subtraction per
/// mask row; the summed-area table (built on demand) makes cube sums cost 2^n
/// corner lookups. Both paths sum exactly the cells the direct scans visit;
/// only summation rounding differs.
class RegionSums {
public:
    RegionSums(const GridSpec& grid, std::span<const double> slice);

    const GridSpec& grid() const { return grid_; }

    // Ball queries at a lattice center (mask fast path).
    double ball_sum(const Index& center, const BallMask& mask) const;
    std::int64_t ball_count(const Index& center, const BallMask& mask) const;
    // Sum of |f - shift| over the ball; used by oscillation statistics.
    double ball_deviation(const Index& center, const BallMask& mask, double shift) const;

    // Cube queries at an arbitrary center via the summed-area table.
    double cube_sum(const Point& center, double radius);
    std::int64_t cube_count(const Point& center, double radius) const;

    // Reference paths: direct scans with the same membership predicates.
    double scan_cube_sum(const Point& center, double radius) const;
    double scan_ball_sum(const Point& center, double radius) const;
    std::int64_t scan_ball_count(const Point& center, double radius) const;

private:
    void ensure_sat();
    double sat_corner(const std::array<int, kMaxDim>& hi_exclusive) const;
    void cube_bounds(const Point& center, double radius, Index& lo, Index& hi) const;

    GridSpec grid_;
    std::span<const double> slice_;
    std::vector<double> prefix_;  // per row: cells + 1 entries, leading zero
    std::vector<double> sat_;     // (cells + 1)^n, built on demand
    bool sat_built_ = false;
};

/// Midpoint-rule integral of the slice over (region ∩ box): the sum of cell
/// values whose centers lie strictly inside the region, times cell volume.
/// Throws radius_too_small below the grid spacing.
double region_integral(const GridSpec& grid, std::span<const double> slice,
                       const Point& center, double radius, Shape shape);

/// Discrete volume |region ∩ box| = (cell count) * h^n under the same predicate.
double region_volume(const GridSpec& grid, const Point& center, double radius, Shape shape);

}  // namespace mml
