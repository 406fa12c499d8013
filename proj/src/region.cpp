#include "mml/region.hpp"

#include <algorithm>
#include <cmath>

namespace mml {

namespace {

// Largest integer w with w^2 < remaining, or -1. The float guesses are fixed
// up against the exact predicate so boundary offsets never flip.
int run_halfwidth(double remaining) {
    if (!(remaining > 0.0)) return -1;
    int w = static_cast<int>(std::floor(std::sqrt(remaining)));
    while (static_cast<double>(w + 1) * (w + 1) < remaining) ++w;
    while (w >= 0 && static_cast<double>(w) * w >= remaining) --w;
    return w;
}

double cell_coord(const GridSpec& grid, int axis, int i) {
    return grid.origin[axis] + (i + 0.5) * grid.h;
}

// Index window of the open cube |coord - center| < radius, per axis.
// Returns false if the intersection with the box is empty.
bool cube_window(const GridSpec& grid, const Point& center, double radius,
                 Index& lo, Index& hi) {
    for (int a = 0; a < grid.n; ++a) {
        const double x = center[a];
        int l = static_cast<int>(std::floor((x - radius - grid.origin[a]) / grid.h - 0.5));
        l = std::clamp(l, 0, grid.cells);
        while (l > 0 && cell_coord(grid, a, l - 1) > x - radius) --l;
        while (l < grid.cells && !(cell_coord(grid, a, l) > x - radius)) ++l;

        int r = static_cast<int>(std::ceil((x + radius - grid.origin[a]) / grid.h - 0.5));
        r = std::clamp(r, -1, grid.cells - 1);
        while (r < grid.cells - 1 && cell_coord(grid, a, r + 1) < x + radius) ++r;
        while (r >= 0 && !(cell_coord(grid, a, r) < x + radius)) --r;

        if (l > r) return false;
        lo[a] = l;
        hi[a] = r;
    }
    return true;
}

template <typename Visit>
void visit_window(const GridSpec& grid, const Index& lo, const Index& hi, Visit&& visit) {
    Index idx = lo;
    if (grid.n == 1) {
        for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0]) visit(idx);
        return;
    }
    if (grid.n == 2) {
        for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0])
            for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1]) visit(idx);
        return;
    }
    for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0])
        for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1])
            for (idx[2] = lo[2]; idx[2] <= hi[2]; ++idx[2]) visit(idx);
}

bool in_ball(const GridSpec& grid, const Point& center, double radius, const Index& idx) {
    double d2 = 0.0;
    for (int a = 0; a < grid.n; ++a) {
        const double d = cell_coord(grid, a, idx[a]) - center[a];
        d2 += d * d;
    }
    return d2 < radius * radius;
}

}  // namespace

BallMask BallMask::build(const GridSpec& grid, double radius) {
    if (radius < grid.h)
        fail(ErrorKind::radius_too_small, "ball radius is below the grid spacing");
    BallMask mask;
    mask.radius = radius;
    const double rr = radius / grid.h;
    const double r2 = rr * rr;
    const int K = static_cast<int>(std::ceil(rr));
    const int lead = grid.n - 1;

    auto emit = [&](const std::array<int, kMaxDim - 1>& pre, double s2) {
        const int w = run_halfwidth(r2 - s2);
        if (w < 0) return;
        mask.rows.push_back({pre, w});
        mask.cell_total += 2 * w + 1;
    };

    std::array<int, kMaxDim - 1> pre{};
    if (lead == 0) {
        emit(pre, 0.0);
    } else if (lead == 1) {
        for (int o0 = -K; o0 <= K; ++o0) {
            pre[0] = o0;
            emit(pre, static_cast<double>(o0) * o0);
        }
    } else {
        for (int o0 = -K; o0 <= K; ++o0)
            for (int o1 = -K; o1 <= K; ++o1) {
                pre[0] = o0;
                pre[1] = o1;
                emit(pre, static_cast<double>(o0) * o0 + static_cast<double>(o1) * o1);
            }
    }
    return mask;
}

std::vector<BallMask> build_ball_masks(const GridSpec& grid, const RadiusSet& radii) {
    std::vector<BallMask> masks;
    masks.reserve(radii.size());
    for (double r : radii.radii) masks.push_back(BallMask::build(grid, r));
    return masks;
}

RegionSums::RegionSums(const GridSpec& grid, std::span<const double> slice)
    : grid_(grid), slice_(slice) {
    if (static_cast<std::int64_t>(slice.size()) != grid.cell_count())
        fail(ErrorKind::invalid_field, "slice size does not match the grid");
    const std::int64_t count = grid.cell_count();
    const int nc = grid.cells;
    const std::int64_t rows = count / nc;
    prefix_.resize(static_cast<std::size_t>(rows) * (nc + 1));
    for (std::int64_t r = 0; r < rows; ++r) {
        const double* f = slice_.data() + r * nc;
        double* p = prefix_.data() + r * (nc + 1);
        p[0] = 0.0;
        for (int k = 0; k < nc; ++k) p[k + 1] = p[k] + f[k];
    }
}

double RegionSums::ball_sum(const Index& center, const BallMask& mask) const {
    const int nc = grid_.cells;
    const int lead = grid_.n - 1;
    double total = 0.0;
    for (const auto& row : mask.rows) {
        std::int64_t rowindex = 0;
        bool ok = true;
        for (int a = 0; a < lead; ++a) {
            const int g = center[a] + row.pre[a];
            if (g < 0 || g >= nc) {
                ok = false;
                break;
            }
            rowindex = rowindex * nc + g;
        }
        if (!ok) continue;
        const int lo = std::max(0, center[lead] - row.halfwidth);
        const int hi = std::min(nc - 1, center[lead] + row.halfwidth);
        if (lo > hi) continue;
        const double* p = prefix_.data() + rowindex * (nc + 1);
        total += p[hi + 1] - p[lo];
    }
    return total * grid_.cell_volume();
}

std::int64_t RegionSums::ball_count(const Index& center, const BallMask& mask) const {
    const int nc = grid_.cells;
    const int lead = grid_.n - 1;
    std::int64_t total = 0;
    for (const auto& row : mask.rows) {
        bool ok = true;
        for (int a = 0; a < lead; ++a) {
            const int g = center[a] + row.pre[a];
            if (g < 0 || g >= nc) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        const int lo = std::max(0, center[lead] - row.halfwidth);
        const int hi = std::min(nc - 1, center[lead] + row.halfwidth);
        if (lo <= hi) total += hi - lo + 1;
    }
    return total;
}

double RegionSums::ball_deviation(const Index& center, const BallMask& mask,
                                  double shift) const {
    const int nc = grid_.cells;
    const int lead = grid_.n - 1;
    double total = 0.0;
    for (const auto& row : mask.rows) {
        std::int64_t rowindex = 0;
        bool ok = true;
        for (int a = 0; a < lead; ++a) {
            const int g = center[a] + row.pre[a];
            if (g < 0 || g >= nc) {
                ok = false;
                break;
            }
            rowindex = rowindex * nc + g;
        }
        if (!ok) continue;
        const int lo = std::max(0, center[lead] - row.halfwidth);
        const int hi = std::min(nc - 1, center[lead] + row.halfwidth);
        const double* f = slice_.data() + rowindex * nc;
        for (int k = lo; k <= hi; ++k) total += std::abs(f[k] - shift);
    }
    return total;
}

void RegionSums::ensure_sat() {
    if (sat_built_) return;
    const int n = grid_.n;
    const int nc = grid_.cells;
    const std::int64_t pc = nc + 1;
    std::int64_t padded = 1;
    for (int a = 0; a < n; ++a) padded *= pc;
    sat_.assign(static_cast<std::size_t>(padded), 0.0);

    std::array<std::int64_t, kMaxDim> pstride{};
    {
        std::int64_t s = 1;
        for (int a = n - 1; a >= 0; --a) {
            pstride[a] = s;
            s *= pc;
        }
    }
    const std::int64_t count = grid_.cell_count();
    for (std::int64_t c = 0; c < count; ++c) {
        const Index idx = grid_.decode(c);
        std::int64_t p = 0;
        for (int a = 0; a < n; ++a) p += (idx[a] + 1) * pstride[a];
        sat_[p] = slice_[static_cast<std::size_t>(c)];
    }
    // prefix along each axis in turn
    for (int a = 0; a < n; ++a) {
        for (std::int64_t p = 0; p < padded; ++p) {
            const std::int64_t comp = (p / pstride[a]) % pc;
            if (comp >= 1) sat_[p] += sat_[p - pstride[a]];
        }
    }
    sat_built_ = true;
}

double RegionSums::cube_sum(const Point& center, double radius) {
    ensure_sat();
    Index lo{}, hi{};
    if (!cube_window(grid_, center, radius, lo, hi)) return 0.0;
    const int n = grid_.n;
    const std::int64_t pc = grid_.cells + 1;
    std::array<std::int64_t, kMaxDim> pstride{};
    {
        std::int64_t s = 1;
        for (int a = n - 1; a >= 0; --a) {
            pstride[a] = s;
            s *= pc;
        }
    }
    double total = 0.0;
    for (unsigned msk = 0; msk < (1u << n); ++msk) {
        std::int64_t p = 0;
        int sign = 1;
        for (int a = 0; a < n; ++a) {
            if ((msk >> a) & 1u) {
                p += lo[a] * pstride[a];
                sign = -sign;
            } else {
                p += (hi[a] + 1) * pstride[a];
            }
        }
        total += sign * sat_[p];
    }
    return total * grid_.cell_volume();
}

std::int64_t RegionSums::cube_count(const Point& center, double radius) const {
    Index lo{}, hi{};
    if (!cube_window(grid_, center, radius, lo, hi)) return 0;
    std::int64_t count = 1;
    for (int a = 0; a < grid_.n; ++a) count *= hi[a] - lo[a] + 1;
    return count;
}

double RegionSums::scan_cube_sum(const Point& center, double radius) const {
    Index lo{}, hi{};
    if (!cube_window(grid_, center, radius, lo, hi)) return 0.0;
    double total = 0.0;
    visit_window(grid_, lo, hi,
                 [&](const Index& idx) { total += slice_[grid_.encode(idx)]; });
    return total * grid_.cell_volume();
}

double RegionSums::scan_ball_sum(const Point& center, double radius) const {
    Index lo{}, hi{};
    if (!cube_window(grid_, center, radius, lo, hi)) return 0.0;
    double total = 0.0;
    visit_window(grid_, lo, hi, [&](const Index& idx) {
        if (in_ball(grid_, center, radius, idx)) total += slice_[grid_.encode(idx)];
    });
    return total * grid_.cell_volume();
}

std::int64_t RegionSums::scan_ball_count(const Point& center, double radius) const {
    Index lo{}, hi{};
    if (!cube_window(grid_, center, radius, lo, hi)) return 0;
    std::int64_t count = 0;
    visit_window(grid_, lo, hi, [&](const Index& idx) {
        if (in_ball(grid_, center, radius, idx)) ++count;
    });
    return count;
}

double region_integral(const GridSpec& grid, std::span<const double> slice,
                       const Point& center, double radius, Shape shape) {
    if (static_cast<std::int64_t>(slice.size()) != grid.cell_count())
        fail(ErrorKind::invalid_field, "slice size does not match the grid");
    if (radius < grid.h)
        fail(ErrorKind::radius_too_small, "region radius is below the grid spacing");
    RegionSums sums(grid, slice);
    return shape == Shape::ball ? sums.scan_ball_sum(center, radius)
                                : sums.scan_cube_sum(center, radius);
}

double region_volume(const GridSpec& grid, const Point& center, double radius, Shape shape) {
    if (radius < grid.h)
        fail(ErrorKind::radius_too_small, "region radius is below the grid spacing");
    Index lo{}, hi{};
    if (!cube_window(grid, center, radius, lo, hi)) return 0.0;
    std::int64_t count = 0;
    if (shape == Shape::cube) {
        count = 1;
        for (int a = 0; a < grid.n; ++a) count *= hi[a] - lo[a] + 1;
    } else {
        visit_window(grid, lo, hi, [&](const Index& idx) {
            if (in_ball(grid, center, radius, idx)) ++count;
        });
    }
    return count * grid.cell_volume();
}

}  // namespace mml
