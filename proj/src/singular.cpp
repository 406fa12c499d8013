#include "mml/singular.hpp"

#include <algorithm>
#include <cmath>

namespace mml {

EpsilonSchedule EpsilonSchedule::from_list(std::vector<double> epsilons) {
    if (epsilons.empty()) fail(ErrorKind::invalid_radii, "truncation schedule is empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i]))
            fail(ErrorKind::invalid_radii, "truncation radii must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            fail(ErrorKind::invalid_radii, "truncation radii must decrease strictly");
    }
    EpsilonSchedule s;
    s.epsilons = std::move(epsilons);
    return s;
}

EpsilonSchedule EpsilonSchedule::geometric(double start, double factor, int count) {
    if (!(start > 0.0) || !std::isfinite(start))
        fail(ErrorKind::invalid_radii, "truncation start must be positive");
    if (!(factor > 0.0) || !(factor < 1.0))
        fail(ErrorKind::invalid_radii, "truncation factor must lie in (0, 1)");
    if (count < 1) fail(ErrorKind::invalid_radii, "truncation count must be positive");
    std::vector<double> eps(count);
    double e = start;
    for (int i = 0; i < count; ++i) {
        eps[i] = e;
        e *= factor;
    }
    return from_list(std::move(eps));
}

namespace {

void check_kernel_ready(const KernelDescriptor& k) {
    const KernelValidation v = kernel_validate(k, 32);
    if (!v.homogeneous(1e-8))
        fail(ErrorKind::invalid_kernel,
             "kernel '" + k.name + "' breaks the homogeneity requirement");
    if (!v.zero_mean(1e-6))
        fail(ErrorKind::invalid_kernel,
             "kernel '" + k.name + "' breaks the vanishing-mean requirement");
    if (!v.within_smoothness)
        fail(ErrorKind::invalid_kernel,
             "kernel '" + k.name + "' exceeds its smoothness bound");
}

// Offset index helpers for a (2*nc - 1)^n weight table, last axis fastest.
struct OffsetTable {
    int nc = 0;
    int w = 0;
    std::vector<double> values;

    double at1(int o0) const { return values[o0 + nc - 1]; }
    double at2(int o0, int o1) const {
        return values[static_cast<std::size_t>(o0 + nc - 1) * w + (o1 + nc - 1)];
    }
};

OffsetTable euclidean_weights(const GridSpec& g, const KernelDescriptor& k, double eps) {
    OffsetTable table;
    table.nc = g.cells;
    table.w = 2 * g.cells - 1;
    std::int64_t size = 1;
    for (int a = 0; a < g.n; ++a) size *= table.w;
    table.values.assign(static_cast<std::size_t>(size), 0.0);
    const double vol = g.cell_volume();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t o = 0; o < size; ++o) {
        std::int64_t rest = o;
        STPoint z;
        double d2 = 0.0;
        for (int a = g.n - 1; a >= 0; --a) {
            z.x[a] = static_cast<double>(rest % table.w - (g.cells - 1)) * g.h;
            rest /= table.w;
            d2 += z.x[a] * z.x[a];
        }
        if (std::sqrt(d2) > eps)
            table.values[static_cast<std::size_t>(o)] = k(STPoint{}, z) * vol;
    }
    return table;
}

// weight[(ot + steps - 1) * spatial + offset] over space-time offsets
std::vector<double> parabolic_weights(const GridSpec& g, const TimeAxis& time,
                                      const KernelDescriptor& k, double eps) {
    const int w = 2 * g.cells - 1;
    const int wt = 2 * time.steps - 1;
    std::int64_t spatial = 1;
    for (int a = 0; a < g.n; ++a) spatial *= w;
    std::vector<double> values(static_cast<std::size_t>(spatial) * wt, 0.0);
    const double measure = g.cell_volume() * time.dt;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
        const std::int64_t ot = i / spatial;
        std::int64_t rest = i % spatial;
        STPoint z;
        z.t = static_cast<double>(ot - (time.steps - 1)) * time.dt;
        for (int a = g.n - 1; a >= 0; --a) {
            z.x[a] = static_cast<double>(rest % w - (g.cells - 1)) * g.h;
            rest /= w;
        }
        if (parabolic_distance(z.x, z.t, g.n) > eps)
            values[static_cast<std::size_t>(i)] = k(STPoint{}, z) * measure;
    }
    return values;
}

// Direct convolution of one slice with a classical-kernel weight table.
void convolve_slice(const GridSpec& g, const OffsetTable& table,
                    std::span<const double> in, std::span<double> out) {
    const int nc = g.cells;
    if (g.n == 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < nc; ++i) {
            double acc = 0.0;
            for (int j = 0; j < nc; ++j) acc += in[j] * table.at1(i - j);
            out[i] = acc;
        }
    } else if (g.n == 2) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i0 = 0; i0 < nc; ++i0)
            for (int i1 = 0; i1 < nc; ++i1) {
                double acc = 0.0;
                for (int j0 = 0; j0 < nc; ++j0) {
                    const double* row = in.data() + static_cast<std::int64_t>(j0) * nc;
                    const double* wrow =
                        table.values.data() +
                        static_cast<std::int64_t>(i0 - j0 + nc - 1) * table.w +
                        (i1 + nc - 1);
                    for (int j1 = 0; j1 < nc; ++j1) acc += row[j1] * wrow[-j1];
                }
                out[static_cast<std::int64_t>(i0) * nc + i1] = acc;
            }
    } else {
        const std::int64_t count = g.cell_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t c = 0; c < count; ++c) {
            const Index xi = g.decode(c);
            double acc = 0.0;
            for (std::int64_t y = 0; y < count; ++y) {
                const Index yi = g.decode(y);
                const std::size_t o =
                    (static_cast<std::size_t>(xi[0] - yi[0] + nc - 1) * table.w +
                     (xi[1] - yi[1] + nc - 1)) *
                        table.w +
                    (xi[2] - yi[2] + nc - 1);
                acc += in[y] * table.values[o];
            }
            out[c] = acc;
        }
    }
}

// Generic space-time application for cases without a shared weight table
// (variable kernels) or with one (values != nullptr).
template <typename WeightAt>
void apply_spacetime(const SampledField& f, SampledField& out, WeightAt&& weight_at) {
    const GridSpec& g = f.grid;
    const TimeAxis& time = *f.time;
    const std::int64_t count = g.cell_count();
    const int m = time.steps;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
    for (int ti = 0; ti < m; ++ti)
        for (std::int64_t c = 0; c < count; ++c) {
            const Index xi = g.decode(c);
            double acc = 0.0;
            for (int tj = 0; tj < m; ++tj) {
                const std::span<const double> slice = f.slice(tj);
                for (std::int64_t y = 0; y < count; ++y)
                    acc += slice[y] * weight_at(ti, xi, c, tj, g.decode(y), y);
            }
            out.slice(ti)[c] = acc;
        }
}

void check_field_kernel(const SampledField& f, const KernelDescriptor& k) {
    if (k.n != f.grid.n)
        fail(ErrorKind::invalid_kernel, "kernel dimension does not match the grid");
    if (k.metric == KernelMetric::parabolic && !f.has_time())
        fail(ErrorKind::invalid_field, "parabolic kernels need a space-time field");
}

}  // namespace

SampledField truncated_singular_integral(const SampledField& f, const KernelDescriptor& k,
                                         double eps) {
    check_field_kernel(f, k);
    if (!(eps >= f.grid.h))
        fail(ErrorKind::truncation_below_grid,
             "truncation radius is below the grid spacing");
    check_kernel_ready(k);
    const GridSpec& g = f.grid;

    SampledField out = f.has_time() ? SampledField::zeros(g, *f.time)
                                    : SampledField::zeros(g);
    if (k.metric == KernelMetric::euclidean) {
        if (k.kind == KernelKind::classical) {
            const OffsetTable table = euclidean_weights(g, k, eps);
            for (int j = 0; j < f.slices(); ++j)
                convolve_slice(g, table, f.slice(j), out.slice(j));
        } else {
            const double vol = g.cell_volume();
            for (int j = 0; j < f.slices(); ++j) {
                const auto in = f.slice(j);
                auto o = out.slice(j);
                const std::int64_t count = g.cell_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
                for (std::int64_t c = 0; c < count; ++c) {
                    const STPoint base{g.center(c), 0.0};
                    double acc = 0.0;
                    for (std::int64_t y = 0; y < count; ++y) {
                        STPoint z;
                        const Index yi = g.decode(y);
                        const Index xi = g.decode(c);
                        double d2 = 0.0;
                        for (int a = 0; a < g.n; ++a) {
                            z.x[a] = static_cast<double>(xi[a] - yi[a]) * g.h;
                            d2 += z.x[a] * z.x[a];
                        }
                        if (std::sqrt(d2) > eps) acc += in[y] * k(base, z) * vol;
                    }
                    o[c] = acc;
                }
            }
        }
        return out;
    }

    // parabolic metric over space-time cells
    const TimeAxis& time = *f.time;
    if (k.kind == KernelKind::classical) {
        const int w = 2 * g.cells - 1;
        std::int64_t spatial = 1;
        for (int a = 0; a < g.n; ++a) spatial *= w;
        const std::vector<double> weights = parabolic_weights(g, time, k, eps);
        apply_spacetime(f, out,
                       [&](int ti, const Index& xi, std::int64_t, int tj, const Index& yi,
                           std::int64_t) {
                           std::int64_t o = 0;
                           for (int a = 0; a < g.n; ++a)
                               o = o * w + (xi[a] - yi[a] + g.cells - 1);
                           return weights[static_cast<std::size_t>(
                               (ti - tj + time.steps - 1) * spatial + o)];
                       });
    } else {
        const double measure = g.cell_volume() * time.dt;
        apply_spacetime(
            f, out,
            [&](int ti, const Index& xi, std::int64_t c, int tj, const Index& yi,
                std::int64_t) {
                (void)c;
                STPoint z;
                for (int a = 0; a < g.n; ++a)
                    z.x[a] = static_cast<double>(xi[a] - yi[a]) * g.h;
                z.t = static_cast<double>(ti - tj) * time.dt;
                if (!(parabolic_distance(z.x, z.t, g.n) > eps)) return 0.0;
                const STPoint base{g.center(g.encode(xi)), time.center(ti)};
                return k(base, z) * measure;
            });
    }
    return out;
}

SampledField commutator(const SampledField& a, const SampledField& f,
                        const KernelDescriptor& k, double eps) {
    check_compatible(a, f);
    check_field_kernel(f, k);
    if (!(eps >= f.grid.h))
        fail(ErrorKind::truncation_below_grid,
             "truncation radius is below the grid spacing");
    check_kernel_ready(k);
    const GridSpec& g = f.grid;
    const double vol = g.cell_volume();

    SampledField out = f.has_time() ? SampledField::zeros(g, *f.time)
                                    : SampledField::zeros(g);
    if (k.metric == KernelMetric::euclidean) {
        for (int j = 0; j < f.slices(); ++j) {
            const auto fin = f.slice(j);
            const auto ain = a.slice(j);
            auto o = out.slice(j);
            const std::int64_t count = g.cell_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (std::int64_t c = 0; c < count; ++c) {
                const Index xi = g.decode(c);
                const STPoint base{g.center(c), 0.0};
                const double ax = ain[c];
                double acc = 0.0;
                for (std::int64_t y = 0; y < count; ++y) {
                    const Index yi = g.decode(y);
                    STPoint z;
                    double d2 = 0.0;
                    for (int aa = 0; aa < g.n; ++aa) {
                        z.x[aa] = static_cast<double>(xi[aa] - yi[aa]) * g.h;
                        d2 += z.x[aa] * z.x[aa];
                    }
                    if (std::sqrt(d2) > eps)
                        acc += k(base, z) * (ax - ain[y]) * fin[y] * vol;
                }
                o[c] = acc;
            }
        }
        return out;
    }

    const TimeAxis& time = *f.time;
    const double measure = vol * time.dt;
    const std::int64_t count = g.cell_count();
    const int m = time.steps;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
    for (int ti = 0; ti < m; ++ti)
        for (std::int64_t c = 0; c < count; ++c) {
            const Index xi = g.decode(c);
            const STPoint base{g.center(c), time.center(ti)};
            const double ax = a.slice(ti)[c];
            double acc = 0.0;
            for (int tj = 0; tj < m; ++tj) {
                const auto fin = f.slice(tj);
                const auto ain = a.slice(tj);
                for (std::int64_t y = 0; y < count; ++y) {
                    const Index yi = g.decode(y);
                    STPoint z;
                    for (int aa = 0; aa < g.n; ++aa)
                        z.x[aa] = static_cast<double>(xi[aa] - yi[aa]) * g.h;
                    z.t = static_cast<double>(ti - tj) * time.dt;
                    if (parabolic_distance(z.x, z.t, g.n) > eps)
                        acc += k(base, z) * (ax - ain[y]) * fin[y] * measure;
                }
            }
            out.slice(ti)[c] = acc;
        }
    return out;
}

std::pair<SampledField, ConvergenceReport> epsilon_limit(
    const std::function<SampledField(double)>& family, const EpsilonSchedule& schedule,
    const MixedParams& norm, const RadiusSet& space_radii, const RadiusSet& time_radii,
    double tolerance) {
    if (schedule.size() < 3)
        fail(ErrorKind::invalid_radii, "the schedule needs at least 3 truncation radii");
    if (!(tolerance > 0.0)) fail(ErrorKind::invalid_radii, "tolerance must be positive");

    ConvergenceReport report;
    report.epsilons = schedule.epsilons;
    report.tolerance = tolerance;

    SampledField current = family(schedule[0]);
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        SampledField next = family(schedule[i]);
        const SampledField diff = next - current;
        report.distances.push_back(
            mixed_morrey_norm(diff, norm, space_radii, time_radii).value);
        current = std::move(next);
    }
    report.converged = !report.distances.empty() &&
                       report.distances.back() <= tolerance;
    for (std::size_t i = 1; i < report.distances.size() && report.converged; ++i)
        if (!(report.distances[i] < report.distances[i - 1] ||
              (report.distances[i] == 0.0 && report.distances[i - 1] == 0.0)))
            report.converged = false;
    return {std::move(current), report};
}

}  // namespace mml
