#include "mml/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mml/format.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts need byte swaps");

namespace mml {

namespace {

constexpr char kMagic[8] = {'M', 'M', 'L', 'F', 'L', 'D', '0', '1'};
constexpr std::size_t kHeaderBytes = 64;

void put_i32(char* dst, std::int32_t v) { std::memcpy(dst, &v, sizeof v); }
void put_f64(char* dst, double v) { std::memcpy(dst, &v, sizeof v); }

std::int32_t get_i32(const char* src) {
    std::int32_t v;
    std::memcpy(&v, src, sizeof v);
    return v;
}

double get_f64(const char* src) {
    double v;
    std::memcpy(&v, src, sizeof v);
    return v;
}

[[noreturn]] void bad_file(const std::string& path, const std::string& what) {
    fail(ErrorKind::io_error, path + ": " + what);
}

}  // namespace

void write_field(const SampledField& f, const std::string& path) {
    char header[kHeaderBytes] = {};
    std::memcpy(header, kMagic, sizeof kMagic);
    put_i32(header + 8, f.grid.n);
    put_i32(header + 12, f.grid.cells);
    put_i32(header + 16, f.has_time() ? f.time->steps : 0);
    put_i32(header + 20, 0);
    put_f64(header + 24, f.grid.h);
    put_f64(header + 32, f.grid.origin[0]);
    put_f64(header + 40, f.grid.origin[1]);
    put_f64(header + 48, f.grid.origin[2]);
    put_f64(header + 56, f.has_time() ? f.time->t_end : 0.0);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) bad_file(path, "cannot open for writing");
    out.write(header, kHeaderBytes);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    out.flush();
    if (!out) bad_file(path, "write failed");
}

SampledField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_file(path, "cannot open for reading");

    char header[kHeaderBytes];
    in.read(header, kHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes))
        bad_file(path, "file shorter than the header");
    if (std::memcmp(header, kMagic, sizeof kMagic) != 0)
        bad_file(path, "not a field file (bad magic)");

    const std::int32_t n = get_i32(header + 8);
    const std::int32_t cells = get_i32(header + 12);
    const std::int32_t steps = get_i32(header + 16);
    const double h = get_f64(header + 24);
    Point origin{get_f64(header + 32), get_f64(header + 40), get_f64(header + 48)};
    const double t_end = get_f64(header + 56);

    if (n < 1 || n > kMaxDim) bad_file(path, "dimension out of range");
    if (cells < 1) bad_file(path, "cell count out of range");
    if (steps < 0) bad_file(path, "negative time step count");
    if (!(std::isfinite(h) && h > 0.0)) bad_file(path, "bad spacing");
    for (int a = 0; a < kMaxDim; ++a)
        if (!std::isfinite(origin[a])) bad_file(path, "bad origin");
    if (steps > 0 && !(std::isfinite(t_end) && t_end > 0.0))
        bad_file(path, "bad time interval");
    if (steps == 0 && t_end != 0.0)
        bad_file(path, "time interval without time steps");

    const GridSpec grid{n, origin, cells, h};
    std::int64_t count = grid.cell_count();
    if (steps > 0) count *= steps;

    std::vector<double> values(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double)))
        bad_file(path, "payload shorter than the header promises");
    if (in.peek() != std::ifstream::traits_type::eof())
        bad_file(path, "trailing bytes after the payload");

    try {
        if (steps > 0)
            return SampledField::from_values(grid, build_time_axis(t_end, steps),
                                             std::move(values));
        return SampledField::from_values(grid, std::move(values));
    } catch (const Error& e) {
        bad_file(path, e.what());
    }
}

std::string field_csv(const SampledField& f) {
    const int n = f.grid.n;
    std::string out;
    if (f.has_time()) out += "t,";
    for (int a = 0; a < n; ++a) {
        out += 'x';
        out += static_cast<char>('1' + a);
        out += ',';
    }
    out += "value\n";

    const std::int64_t count = f.grid.cell_count();
    for (int j = 0; j < f.slices(); ++j) {
        for (std::int64_t c = 0; c < count; ++c) {
            if (f.has_time()) {
                out += format_number(f.time->center(j));
                out += ',';
            }
            const Point x = f.grid.center(c);
            for (int a = 0; a < n; ++a) {
                out += format_number(x[a]);
                out += ',';
            }
            out += format_number(
                f.values[static_cast<std::size_t>(j) * count + static_cast<std::size_t>(c)]);
            out += '\n';
        }
    }
    return out;
}

std::string norm_csv(const NormReport& r) {
    std::string out = "norm,value,x1,x2,x3,radius,t,t_radius\n";
    out += r.name;
    out += ',';
    out += format_number(r.value);
    for (int a = 0; a < kMaxDim; ++a) {
        out += ',';
        out += format_number(r.center[a]);
    }
    out += ',';
    out += format_number(r.radius);
    out += ',';
    out += format_number(r.t_index >= 0 ? r.t_center : 0.0);
    out += ',';
    out += format_number(r.t_index >= 0 ? r.t_radius : 0.0);
    out += '\n';
    return out;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_file(path, "cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) bad_file(path, "read failed");
    return buf.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) bad_file(path, "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) bad_file(path, "write failed");
}

}  // namespace mml
