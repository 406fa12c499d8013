#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mml/error.hpp"

namespace mml {

/// Grids are supported for spatial dimension 1..3; higher dimensions appear
/// only in exponent arithmetic, which never touches a grid.
inline constexpr int kMaxDim = 3;

/// Coordinates beyond the grid dimension are kept at zero.
using Point = std::array<double, kMaxDim>;
using Index = std::array<int, kMaxDim>;

inline Point make_point(double x0, double x1 = 0.0, double x2 = 0.0) {
    return Point{x0, x1, x2};
}

/// Uniform cell-centered grid over a cubic axis-aligned box.
/// Cell (i0,...,i_{n-1}) has center origin[a] + (i_a + 1/2) h on each axis;
/// every axis shares the same spacing and cell count.
struct GridSpec {
    int n = 0;
    Point origin{};
    int cells = 0;
    double h = 0.0;

    std::int64_t cell_count() const;
    double cell_volume() const;
    double edge() const { return cells * h; }
    double diameter() const;

    Point center(const Index& idx) const;
    Point center(std::int64_t linear) const { return center(decode(linear)); }
    Index decode(std::int64_t linear) const;
    std::int64_t encode(const Index& idx) const;
    bool contains(const Index& idx) const;

    bool same_layout(const GridSpec& other) const;
};

/// Validates the box and resolution. The box must be nondegenerate and cubic
/// (all edges equal), so that one spacing serves every axis.
GridSpec build_grid(int n, const Point& lo, const Point& hi, int cells_per_axis);

/// Uniform partition of (0, t_end) into cells centered at (j + 1/2) dt.
struct TimeAxis {
    double t_end = 0.0;
    int steps = 0;
    double dt = 0.0;

    double center(int j) const { return (j + 0.5) * dt; }
    bool same_layout(const TimeAxis& other) const;
};

TimeAxis build_time_axis(double t_end, int steps);

/// Ascending list of admissible region radii. Norm and operator suprema range
/// over exactly this set; the default is dyadic, spacing * 2^k up to the cap.
struct RadiusSet {
    std::vector<double> radii;

    static RadiusSet dyadic(double spacing, double cap);
    static RadiusSet from_list(std::vector<double> radii, double spacing, double cap);

    std::size_t size() const { return radii.size(); }
    double operator[](std::size_t i) const { return radii[i]; }
    double max() const { return radii.back(); }
};

inline RadiusSet dyadic_radii(const GridSpec& grid) {
    return RadiusSet::dyadic(grid.h, grid.diameter());
}
inline RadiusSet dyadic_radii(const TimeAxis& time) {
    return RadiusSet::dyadic(time.dt, time.t_end);
}

/// Function values at cell centers, one slab of cells per time step for
/// space-time fields. Layout: values[t * cell_count + linear_cell] with the
/// last spatial axis fastest. Values are always finite.
struct SampledField {
    GridSpec grid;
    std::optional<TimeAxis> time;
    std::vector<double> values;

    static SampledField sample(const GridSpec& grid,
                               const std::function<double(const Point&)>& f);
    static SampledField sample(const GridSpec& grid, const TimeAxis& time,
                               const std::function<double(const Point&, double)>& f);
    static SampledField from_values(const GridSpec& grid, std::vector<double> values);
    static SampledField from_values(const GridSpec& grid, const TimeAxis& time,
                                    std::vector<double> values);
    static SampledField zeros(const GridSpec& grid);
    static SampledField zeros(const GridSpec& grid, const TimeAxis& time);

    bool has_time() const { return time.has_value(); }
    int slices() const { return has_time() ? time->steps : 1; }
    std::span<const double> slice(int j) const;
    std::span<double> slice(int j);

    double at(const Index& idx) const { return values[grid.encode(idx)]; }
    double at(int t, const Index& idx) const {
        return values[static_cast<std::size_t>(t) * grid.cell_count() + grid.encode(idx)];
    }

    SampledField& operator+=(const SampledField& other);
    SampledField& operator-=(const SampledField& other);
    SampledField& operator*=(double c);
};

SampledField operator+(SampledField a, const SampledField& b);
SampledField operator-(SampledField a, const SampledField& b);
SampledField operator*(double c, SampledField a);

/// Throws incompatible_fields unless both fields share grid and time layout.
void check_compatible(const SampledField& a, const SampledField& b);

}  // namespace mml
