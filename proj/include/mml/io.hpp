#pragma once

#include <string>

#include "mml/grid.hpp"
#include "mml/norms.hpp"

namespace mml {

/// Flat binary field file, little-endian throughout:
///   bytes 0..7   magic "MMLFLD01"
///   bytes 8..23  int32 n, cells per axis, time steps (0 = spatial only), 0
///   bytes 24..55 float64 spacing, then the three origin coordinates
///   bytes 56..63 float64 end of the time interval (0 when there is no axis)
/// followed by the samples as float64, time-major then row-major — the exact
/// in-memory layout of SampledField::values.
void write_field(const SampledField& f, const std::string& path);

/// Reads a field written by write_field. Malformed headers, truncated
/// payloads, and unreadable files raise io_error.
SampledField read_field(const std::string& path);

/// CSV text for a field, one sample per row in storage order. Columns are
/// x1..xn,value for spatial fields and t,x1..xn,value for space-time fields;
/// coordinates are cell centers. Intended for small fields — the text holds
/// every sample.
std::string field_csv(const SampledField& f);

/// One-line CSV (with header) for a norm report: the norm name, the value,
/// and the witness region that attains it.
std::string norm_csv(const NormReport& r);

/// Whole-file text helpers; both raise io_error on failure.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

}  // namespace mml
