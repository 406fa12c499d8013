#include "mml/grid.hpp"

#include <cmath>
#include <sstream>

namespace mml {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_domain: return "invalid-domain";
        case ErrorKind::sampling_error: return "sampling-error";
        case ErrorKind::invalid_field: return "invalid-field";
        case ErrorKind::incompatible_fields: return "incompatible-fields";
        case ErrorKind::invalid_radii: return "invalid-radii";
        case ErrorKind::radius_too_small: return "radius-too-small";
        case ErrorKind::invalid_exponent: return "invalid-exponent";
        case ErrorKind::inadmissible_exponents: return "inadmissible-exponents";
        case ErrorKind::truncation_below_grid: return "truncation-below-grid";
        case ErrorKind::invalid_kernel: return "invalid-kernel";
        case ErrorKind::unknown_operator: return "unknown-operator";
        case ErrorKind::invalid_corpus: return "invalid-corpus";
        case ErrorKind::invalid_coefficients: return "invalid-coefficients";
        case ErrorKind::support_violation: return "support-violation";
        case ErrorKind::config_error: return "config-error";
        case ErrorKind::io_error: return "io-error";
    }
    return "unknown-error";
}

std::int64_t GridSpec::cell_count() const {
    std::int64_t count = 1;
    for (int a = 0; a < n; ++a) count *= cells;
    return count;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < n; ++a) v *= h;
    return v;
}

double GridSpec::diameter() const { return std::sqrt(static_cast<double>(n)) * edge(); }

Point GridSpec::center(const Index& idx) const {
    Point p{};
    for (int a = 0; a < n; ++a) p[a] = origin[a] + (idx[a] + 0.5) * h;
    return p;
}

Index GridSpec::decode(std::int64_t linear) const {
    Index idx{};
    for (int a = n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(linear % cells);
        linear /= cells;
    }
    return idx;
}

std::int64_t GridSpec::encode(const Index& idx) const {
    std::int64_t linear = 0;
    for (int a = 0; a < n; ++a) linear = linear * cells + idx[a];
    return linear;
}

bool GridSpec::contains(const Index& idx) const {
    for (int a = 0; a < n; ++a)
        if (idx[a] < 0 || idx[a] >= cells) return false;
    return true;
}

bool GridSpec::same_layout(const GridSpec& other) const {
    if (n != other.n || cells != other.cells || h != other.h) return false;
    for (int a = 0; a < n; ++a)
        if (origin[a] != other.origin[a]) return false;
    return true;
}

GridSpec build_grid(int n, const Point& lo, const Point& hi, int cells_per_axis) {
    if (n < 1 || n > kMaxDim)
        fail(ErrorKind::invalid_domain, "dimension must be 1.." + std::to_string(kMaxDim));
    if (cells_per_axis < 1) fail(ErrorKind::invalid_domain, "resolution must be positive");
    const double edge = hi[0] - lo[0];
    for (int a = 0; a < n; ++a) {
        const double e = hi[a] - lo[a];
        if (!(e > 0.0)) fail(ErrorKind::invalid_domain, "degenerate box");
        if (std::abs(e - edge) > 1e-12 * std::abs(edge))
            fail(ErrorKind::invalid_domain, "box must be cubic; axes share one spacing");
    }
    GridSpec g;
    g.n = n;
    g.origin = lo;
    g.cells = cells_per_axis;
    g.h = edge / cells_per_axis;
    if (g.cell_count() > (std::int64_t{1} << 28))
        fail(ErrorKind::invalid_domain, "grid too large");
    return g;
}

bool TimeAxis::same_layout(const TimeAxis& other) const {
    return t_end == other.t_end && steps == other.steps;
}

TimeAxis build_time_axis(double t_end, int steps) {
    if (!(t_end > 0.0)) fail(ErrorKind::invalid_domain, "time horizon must be positive");
    if (steps < 1) fail(ErrorKind::invalid_domain, "time steps must be positive");
    return TimeAxis{t_end, steps, t_end / steps};
}

RadiusSet RadiusSet::dyadic(double spacing, double cap) {
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        fail(ErrorKind::invalid_radii, "spacing must be positive");
    if (spacing > cap) fail(ErrorKind::invalid_radii, "spacing exceeds the domain diameter");
    RadiusSet set;
    for (double r = spacing; r <= cap; r *= 2.0) set.radii.push_back(r);
    return set;
}

RadiusSet RadiusSet::from_list(std::vector<double> radii, double spacing, double cap) {
    if (radii.empty()) fail(ErrorKind::invalid_radii, "radius set is empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || radii[i] <= 0.0)
            fail(ErrorKind::invalid_radii, "radii must be positive and finite");
        if (i > 0 && radii[i] <= radii[i - 1])
            fail(ErrorKind::invalid_radii, "radii must be strictly ascending");
    }
    if (radii.front() < spacing)
        fail(ErrorKind::radius_too_small, "minimum radius is below the grid spacing");
    if (radii.back() > cap) fail(ErrorKind::invalid_radii, "maximum radius exceeds the domain");
    RadiusSet set;
    set.radii = std::move(radii);
    return set;
}

namespace {

void check_finite(double v, std::int64_t cell, int step) {
    if (std::isfinite(v)) return;
    std::ostringstream msg;
    msg << "non-finite sample at cell " << cell;
    if (step >= 0) msg << ", step " << step;
    fail(ErrorKind::sampling_error, msg.str());
}

}  // namespace

SampledField SampledField::sample(const GridSpec& grid,
                                  const std::function<double(const Point&)>& f) {
    SampledField out = zeros(grid);
    const std::int64_t count = grid.cell_count();
    for (std::int64_t c = 0; c < count; ++c) {
        const double v = f(grid.center(c));
        check_finite(v, c, -1);
        out.values[static_cast<std::size_t>(c)] = v;
    }
    return out;
}

SampledField SampledField::sample(const GridSpec& grid, const TimeAxis& time,
                                  const std::function<double(const Point&, double)>& f) {
    SampledField out = zeros(grid, time);
    const std::int64_t count = grid.cell_count();
    for (int j = 0; j < time.steps; ++j) {
        const double t = time.center(j);
        double* slab = out.values.data() + static_cast<std::size_t>(j) * count;
        for (std::int64_t c = 0; c < count; ++c) {
            const double v = f(grid.center(c), t);
            check_finite(v, c, j);
            slab[c] = v;
        }
    }
    return out;
}

SampledField SampledField::from_values(const GridSpec& grid, std::vector<double> values) {
    if (static_cast<std::int64_t>(values.size()) != grid.cell_count())
        fail(ErrorKind::invalid_field, "value count does not match the grid");
    for (double v : values)
        if (!std::isfinite(v)) fail(ErrorKind::invalid_field, "non-finite value");
    SampledField out;
    out.grid = grid;
    out.values = std::move(values);
    return out;
}

SampledField SampledField::from_values(const GridSpec& grid, const TimeAxis& time,
                                       std::vector<double> values) {
    if (static_cast<std::int64_t>(values.size()) != grid.cell_count() * time.steps)
        fail(ErrorKind::invalid_field, "value count does not match the space-time grid");
    for (double v : values)
        if (!std::isfinite(v)) fail(ErrorKind::invalid_field, "non-finite value");
    SampledField out;
    out.grid = grid;
    out.time = time;
    out.values = std::move(values);
    return out;
}

SampledField SampledField::zeros(const GridSpec& grid) {
    SampledField out;
    out.grid = grid;
    out.values.assign(static_cast<std::size_t>(grid.cell_count()), 0.0);
    return out;
}

SampledField SampledField::zeros(const GridSpec& grid, const TimeAxis& time) {
    SampledField out;
    out.grid = grid;
    out.time = time;
    out.values.assign(static_cast<std::size_t>(grid.cell_count() * time.steps), 0.0);
    return out;
}

std::span<const double> SampledField::slice(int j) const {
    const std::size_t count = static_cast<std::size_t>(grid.cell_count());
    return {values.data() + static_cast<std::size_t>(j) * count, count};
}

std::span<double> SampledField::slice(int j) {
    const std::size_t count = static_cast<std::size_t>(grid.cell_count());
    return {values.data() + static_cast<std::size_t>(j) * count, count};
}

void check_compatible(const SampledField& a, const SampledField& b) {
    if (!a.grid.same_layout(b.grid))
        fail(ErrorKind::incompatible_fields, "grids differ");
    if (a.has_time() != b.has_time() ||
        (a.has_time() && !a.time->same_layout(*b.time)))
        fail(ErrorKind::incompatible_fields, "time axes differ");
}

SampledField& SampledField::operator+=(const SampledField& other) {
    check_compatible(*this, other);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
    return *this;
}

SampledField& SampledField::operator-=(const SampledField& other) {
    check_compatible(*this, other);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
    return *this;
}

SampledField& SampledField::operator*=(double c) {
    for (double& v : values) v *= c;
    return *this;
}

SampledField operator+(SampledField a, const SampledField& b) { return a += b; }
SampledField operator-(SampledField a, const SampledField& b) { return a -= b; }
SampledField operator*(double c, SampledField a) { return a *= c; }

}  // namespace mml
