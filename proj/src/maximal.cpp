#include "mml/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace mml {

namespace {

void check_spatial(const SampledField& f) {
    if (f.has_time())
        fail(ErrorKind::invalid_field, "maximal functions act on spatial slices");
}

void check_radii(const GridSpec& grid, const RadiusSet& radii) {
    if (radii.radii.empty()) fail(ErrorKind::invalid_radii, "radius set is empty");
    if (radii.radii.front() < grid.h)
        fail(ErrorKind::radius_too_small, "minimum radius is below the grid spacing");
    if (radii.radii.back() > grid.diameter() * (1.0 + 1e-12))
        fail(ErrorKind::invalid_radii, "maximum radius exceeds the domain");
}

std::vector<double> abs_values(std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::abs(values[i]);
    return out;
}

/// Per-(center, radius) ball statistic table, radius-major so each radius
/// slice is contiguous in cell order.
using StatTable = std::vector<std::vector<double>>;

/// out[x] = max over radii r and centers c with x ∈ B_r(c) of stats[r][c].
/// Containment is symmetric in index space (x ∈ B_r(c) iff c ∈ B_r(x)), so
/// the gather walks the same mask rows the ball sums use.
SampledField gather_containing(const GridSpec& grid, const std::vector<BallMask>& masks,
                               const StatTable& stats) {
    SampledField out = SampledField::zeros(grid);
    const std::int64_t count = grid.cell_count();
    const int nc = grid.cells;
    const int lead = grid.n - 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t x = 0; x < count; ++x) {
        const Index idx = grid.decode(x);
        double best = 0.0;
        for (std::size_t r = 0; r < masks.size(); ++r) {
            const std::vector<double>& slab = stats[r];
            for (const auto& row : masks[r].rows) {
                std::int64_t rowindex = 0;
                bool ok = true;
                for (int a = 0; a < lead; ++a) {
                    const int g = idx[a] + row.pre[a];
                    if (g < 0 || g >= nc) {
                        ok = false;
                        break;
                    }
                    rowindex = rowindex * nc + g;
                }
                if (!ok) continue;
                const int lo = std::max(0, idx[lead] - row.halfwidth);
                const int hi = std::min(nc - 1, idx[lead] + row.halfwidth);
                const double* s = slab.data() + rowindex * nc;
                for (int k = lo; k <= hi; ++k) best = std::max(best, s[k]);
            }
        }
        out.values[static_cast<std::size_t>(x)] = best;
    }
    return out;
}

}  // namespace

MaximalParams MaximalParams::hardy_littlewood() {
    return {Variant::hardy_littlewood, 0.0, false};
}

MaximalParams MaximalParams::sharp() { return {Variant::sharp, 0.0, true}; }

MaximalParams MaximalParams::fractional(double eta, bool oscillation) {
    if (!std::isfinite(eta) || !(eta > 0.0) || !(eta < 1.0))
        fail(ErrorKind::invalid_exponent, "fractional order must lie in (0, 1)");
    return {Variant::fractional, eta, oscillation};
}

SampledField hl_maximal(const SampledField& f, const RadiusSet& radii) {
    check_spatial(f);
    check_radii(f.grid, radii);
    const auto masks = build_ball_masks(f.grid, radii);
    const auto avals = abs_values(f.values);
    RegionSums sums(f.grid, avals);
    const double vol = f.grid.cell_volume();

    SampledField out = SampledField::zeros(f.grid);
    const std::int64_t count = f.grid.cell_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t x = 0; x < count; ++x) {
        const Index idx = f.grid.decode(x);
        double best = 0.0;
        for (const auto& mask : masks) {
            const std::int64_t cnt = sums.ball_count(idx, mask);
            if (cnt == 0) continue;
            best = std::max(best, sums.ball_sum(idx, mask) / (cnt * vol));
        }
        out.values[static_cast<std::size_t>(x)] = best;
    }
    return out;
}

SampledField sharp_maximal(const SampledField& f, const RadiusSet& radii) {
    check_spatial(f);
    check_radii(f.grid, radii);
    const auto masks = build_ball_masks(f.grid, radii);
    RegionSums sums(f.grid, f.values);
    const double vol = f.grid.cell_volume();
    const std::int64_t count = f.grid.cell_count();

    StatTable stats(masks.size(), std::vector<double>(static_cast<std::size_t>(count)));
    for (std::size_t r = 0; r < masks.size(); ++r) {
        std::vector<double>& slab = stats[r];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t c = 0; c < count; ++c) {
            const Index idx = f.grid.decode(c);
            const std::int64_t cnt = sums.ball_count(idx, masks[r]);
            if (cnt == 0) {
                slab[static_cast<std::size_t>(c)] = 0.0;
                continue;
            }
            const double mean = sums.ball_sum(idx, masks[r]) / (cnt * vol);
            slab[static_cast<std::size_t>(c)] =
                sums.ball_deviation(idx, masks[r], mean) / cnt;
        }
    }
    return gather_containing(f.grid, masks, stats);
}

SampledField fractional_maximal(const SampledField& f, const MaximalParams& params,
                                const RadiusSet& radii) {
    check_spatial(f);
    if (params.variant != MaximalParams::Variant::fractional)
        fail(ErrorKind::invalid_exponent, "params do not select the fractional variant");
    if (!std::isfinite(params.eta) || !(params.eta > 0.0) || !(params.eta < 1.0))
        fail(ErrorKind::invalid_exponent, "fractional order must lie in (0, 1)");
    check_radii(f.grid, radii);

    const auto masks = build_ball_masks(f.grid, radii);
    const double vol = f.grid.cell_volume();
    const std::int64_t count = f.grid.cell_count();

    const auto avals = abs_values(f.values);
    RegionSums abs_sums(f.grid, avals);
    RegionSums raw_sums(f.grid, f.values);

    StatTable stats(masks.size(), std::vector<double>(static_cast<std::size_t>(count)));
    for (std::size_t r = 0; r < masks.size(); ++r) {
        std::vector<double>& slab = stats[r];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t c = 0; c < count; ++c) {
            const Index idx = f.grid.decode(c);
            const std::int64_t cnt = raw_sums.ball_count(idx, masks[r]);
            if (cnt == 0) {
                slab[static_cast<std::size_t>(c)] = 0.0;
                continue;
            }
            double integral;
            if (params.oscillation) {
                const double mean = raw_sums.ball_sum(idx, masks[r]) / (cnt * vol);
                integral = raw_sums.ball_deviation(idx, masks[r], mean) * vol;
            } else {
                integral = abs_sums.ball_sum(idx, masks[r]);
            }
            slab[static_cast<std::size_t>(c)] =
                std::pow(cnt * vol, params.eta - 1.0) * integral;
        }
    }
    return gather_containing(f.grid, masks, stats);
}

SampledField maximal_function(const SampledField& f, const MaximalParams& params,
                              const RadiusSet& radii) {
    switch (params.variant) {
        case MaximalParams::Variant::hardy_littlewood: return hl_maximal(f, radii);
        case MaximalParams::Variant::sharp: return sharp_maximal(f, radii);
        case MaximalParams::Variant::fractional:
            return fractional_maximal(f, params, radii);
    }
    fail(ErrorKind::unknown_operator, "unrecognized maximal variant");
}

}  // namespace mml
