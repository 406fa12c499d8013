#include "mml/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mml {

namespace {

#ifdef _OPENMP
int max_threads() { return omp_get_max_threads(); }
int thread_num() { return omp_get_thread_num(); }
#else
int max_threads() { return 1; }
int thread_num() { return 0; }
#endif

void check_radii(const GridSpec& grid, const RadiusSet& radii, double cap) {
    if (radii.radii.empty()) fail(ErrorKind::invalid_radii, "radius set is empty");
    if (radii.radii.front() < grid.h)
        fail(ErrorKind::radius_too_small, "minimum radius is below the grid spacing");
    if (radii.radii.back() > cap * (1.0 + 1e-12))
        fail(ErrorKind::invalid_radii, "maximum radius exceeds the domain");
}

struct SupWitness {
    double sup = -1.0;  // region scores are nonnegative; -1 sorts below all of them
    int radius_idx = 0;
    std::int64_t center = 0;
};

// The canonical argmax is the first maximizer in (center, radius) order; a
// strict comparison keeps it regardless of how the center range is chunked.
void keep_better(SupWitness& into, const SupWitness& other) {
    if (other.sup > into.sup) into = other;
}

/// sup over centers and radii of scale[r] * ball_sum(|f|-power slice).
/// `powered` must already hold |f|^p.
SupWitness powered_sup(const GridSpec& grid, std::span<const double> powered,
                       const std::vector<BallMask>& masks,
                       std::span<const double> scale) {
    RegionSums sums(grid, powered);
    const std::int64_t count = grid.cell_count();
    const int nr = static_cast<int>(masks.size());
    std::vector<SupWitness> partial(max_threads());
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        SupWitness local;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::int64_t c = 0; c < count; ++c) {
            const Index idx = grid.decode(c);
            for (int r = 0; r < nr; ++r) {
                const double score = scale[r] * sums.ball_sum(idx, masks[r]);
                if (score > local.sup) local = {score, r, c};
            }
        }
        partial[thread_num()] = local;
    }
    SupWitness best;
    for (const auto& w : partial) keep_better(best, w);
    if (best.sup < 0.0) best.sup = 0.0;
    return best;
}

std::vector<double> abs_power(std::span<const double> values, double p) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::pow(std::abs(values[i]), p);
    return out;
}

// Largest integer halfwidth w with w < rho/dt (strict open-interval membership
// in index space, matching the ball predicate).
int time_halfwidth(double rho, double dt) {
    const double rr = rho / dt;
    int w = static_cast<int>(std::floor(rr));
    while (!(static_cast<double>(w) < rr)) --w;
    while (static_cast<double>(w + 1) < rr) ++w;
    return w;
}

}  // namespace

double lp_norm(const SampledField& f, double p) {
    if (!std::isfinite(p) || !(p >= 1.0))
        fail(ErrorKind::invalid_exponent, "p must be at least 1");
    double total = 0.0;
    for (double v : f.values) total += std::pow(std::abs(v), p);
    double weight = f.grid.cell_volume();
    if (f.has_time()) weight *= f.time->dt;
    return std::pow(total * weight, 1.0 / p);
}

NormReport morrey_norm(const SampledField& f, const MorreyParams& params,
                       const RadiusSet& radii) {
    if (f.has_time()) fail(ErrorKind::invalid_field, "morrey_norm expects a spatial field");
    if (params.n != f.grid.n)
        fail(ErrorKind::invalid_exponent, "exponent dimension does not match the grid");
    check_radii(f.grid, radii, f.grid.diameter());

    const auto masks = build_ball_masks(f.grid, radii);
    const auto powered = abs_power(f.values, params.p);
    std::vector<double> scale(radii.size());
    for (std::size_t r = 0; r < radii.size(); ++r) scale[r] = std::pow(radii[r], -params.lambda);

    const SupWitness best = powered_sup(f.grid, powered, masks, scale);

    NormReport report;
    report.name = "morrey";
    report.value = std::pow(best.sup, 1.0 / params.p);
    report.center_index = f.grid.decode(best.center);
    report.center = f.grid.center(report.center_index);
    report.radius = radii[best.radius_idx];
    return report;
}

NormReport mixed_morrey_norm(const SampledField& f, const MixedParams& params,
                             const RadiusSet& space_radii, const RadiusSet& time_radii) {
    if (!f.has_time())
        fail(ErrorKind::invalid_field, "mixed_morrey_norm expects a space-time field");
    if (params.space.n != f.grid.n)
        fail(ErrorKind::invalid_exponent, "exponent dimension does not match the grid");
    check_radii(f.grid, space_radii, f.grid.diameter());
    const TimeAxis& time = *f.time;
    if (time_radii.radii.empty() || time_radii.radii.front() < time.dt)
        fail(ErrorKind::radius_too_small, "minimum temporal radius is below the step");
    if (time_radii.radii.back() > time.t_end * (1.0 + 1e-12))
        fail(ErrorKind::invalid_radii, "maximum temporal radius exceeds the horizon");

    const auto masks = build_ball_masks(f.grid, space_radii);
    std::vector<double> scale(space_radii.size());
    for (std::size_t r = 0; r < space_radii.size(); ++r)
        scale[r] = std::pow(space_radii[r], -params.space.lambda);

    const int m = time.steps;
    std::vector<SupWitness> slice_sup(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < m; ++j) {
        const auto powered = abs_power(f.slice(j), params.space.p);
        slice_sup[j] = powered_sup(f.grid, powered, masks, scale);
    }

    // temporal Morrey layer over S(t)^(q/p)
    const double qp = params.q / params.space.p;
    std::vector<double> w(m), W(m + 1, 0.0);
    for (int j = 0; j < m; ++j) {
        w[j] = std::pow(slice_sup[j].sup, qp);
        W[j + 1] = W[j] + w[j];
    }

    double best = -1.0;
    int best_t0 = 0, best_r = 0, best_lo = 0, best_hi = 0;
    for (int t0 = 0; t0 < m; ++t0) {
        for (std::size_t r = 0; r < time_radii.size(); ++r) {
            const int hw = time_halfwidth(time_radii[r], time.dt);
            const int lo = std::max(0, t0 - hw);
            const int hi = std::min(m - 1, t0 + hw);
            const double integral = (W[hi + 1] - W[lo]) * time.dt;
            const double score = std::pow(time_radii[r], -params.mu) * integral;
            if (score > best) {
                best = score;
                best_t0 = t0;
                best_r = static_cast<int>(r);
                best_lo = lo;
                best_hi = hi;
            }
        }
    }
    if (best < 0.0) best = 0.0;

    // spatial witness: the dominant slice inside the winning window
    int jbest = best_lo;
    for (int j = best_lo + 1; j <= best_hi; ++j)
        if (slice_sup[j].sup > slice_sup[jbest].sup) jbest = j;

    NormReport report;
    report.name = "mixed-morrey";
    report.value = std::pow(best, 1.0 / params.q);
    report.center_index = f.grid.decode(slice_sup[jbest].center);
    report.center = f.grid.center(report.center_index);
    report.radius = space_radii[slice_sup[jbest].radius_idx];
    report.t_index = best_t0;
    report.t_center = time.center(best_t0);
    report.t_radius = time_radii[best_r];
    return report;
}

namespace {

SupWitness oscillation_sup(const GridSpec& grid, std::span<const double> slice,
                           const std::vector<BallMask>& masks) {
    RegionSums sums(grid, slice);
    const std::int64_t count = grid.cell_count();
    const int nr = static_cast<int>(masks.size());
    const double vol = grid.cell_volume();
    std::vector<SupWitness> partial(max_threads());
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        SupWitness local;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::int64_t c = 0; c < count; ++c) {
            const Index idx = grid.decode(c);
            for (int r = 0; r < nr; ++r) {
                const std::int64_t cnt = sums.ball_count(idx, masks[r]);
                if (cnt == 0) continue;
                const double mean = sums.ball_sum(idx, masks[r]) / (cnt * vol);
                const double osc = sums.ball_deviation(idx, masks[r], mean) / cnt;
                if (osc > local.sup) local = {osc, r, c};
            }
        }
        partial[thread_num()] = local;
    }
    SupWitness best;
    for (const auto& w : partial) keep_better(best, w);
    if (best.sup < 0.0) best.sup = 0.0;
    return best;
}

}  // namespace

NormReport bmo_seminorm(const SampledField& f, const RadiusSet& radii) {
    if (f.has_time()) fail(ErrorKind::invalid_field, "bmo_seminorm expects a spatial field");
    check_radii(f.grid, radii, f.grid.diameter());
    const auto masks = build_ball_masks(f.grid, radii);
    const SupWitness best = oscillation_sup(f.grid, f.slice(0), masks);

    NormReport report;
    report.name = "bmo";
    report.value = best.sup;
    report.center_index = f.grid.decode(best.center);
    report.center = f.grid.center(report.center_index);
    report.radius = radii[best.radius_idx];
    return report;
}

double vmo_modulus(const SampledField& f, double r, const RadiusSet& radii) {
    if (f.has_time()) fail(ErrorKind::invalid_field, "vmo_modulus expects a spatial field");
    if (!(r > 0.0)) fail(ErrorKind::invalid_radii, "modulus radius must be positive");
    check_radii(f.grid, radii, f.grid.diameter());
    std::vector<double> restricted;
    for (double rho : radii.radii)
        if (rho <= r) restricted.push_back(rho);
    if (restricted.empty()) return 0.0;
    RadiusSet sub;
    sub.radii = std::move(restricted);
    const auto masks = build_ball_masks(f.grid, sub);
    return oscillation_sup(f.grid, f.slice(0), masks).sup;
}

SampledField extract_slice(const SampledField& f, int j) {
    if (j < 0 || j >= f.slices()) fail(ErrorKind::invalid_field, "slice index out of range");
    const auto s = f.slice(j);
    return SampledField::from_values(f.grid, std::vector<double>(s.begin(), s.end()));
}

}  // namespace mml
