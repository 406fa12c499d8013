#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mml/grid.hpp"

namespace mml {

/// One corpus entry: an analytic closure evaluated at (point, time, scale),
/// where `scale` is the sampling grid's spacing — only the scale-truncated
/// power-law profiles depend on it. Closures are otherwise
/// resolution-independent, so one function can be resampled across a
/// refinement schedule and the samples describe the same underlying function.
struct CorpusFunction {
    std::string id;         // generator name + within-generator index, e.g. "bump-2"
    std::string generator;  // generator name
    std::function<double(const Point&, double, double)> eval;  // (x, t, scale)
};

/// Recipe for a deterministic corpus: (generator, count) pairs plus a seed.
/// Known generators:
///   "bump"      — smooth radial bump, compactly supported inside the box
///   "indicator" — indicator of a random sub-box
///   "tensor"    — product of per-axis parabolic bells
///   "trig"      — signed trigonometric polynomial over the whole box
///   "extremal"  — truncated power-law peak |x-c|^(-s), the near-maximizer
///                 profile for scaled ball-mass suprema; the peak is clamped
///                 at the sampling grid scale
/// All generated fields are finite and vanish outside the box; every
/// generator carries a strictly positive temporal modulation so the t = 0
/// spatial snapshot is never identically zero.
struct CorpusSpec {
    std::vector<std::pair<std::string, int>> generators;
    std::uint64_t seed = 0;
    double extremal_power = 0.0;  // decay exponent s for "extremal"; 0 selects n/3

    /// 20 functions: 5 bumps, 4 indicators, 4 tensors, 4 trig, 3 extremal.
    static CorpusSpec standard(std::uint64_t seed);
    /// Same spec with every count doubled; reproduces the original functions
    /// and appends new ones (streams are keyed by generator and index).
    CorpusSpec doubled() const;
};

/// Instantiates the corpus over the box geometry of `box` (its resolution is
/// ignored). Throws invalid_corpus on an empty generator list, an unknown
/// generator, a count < 1, or an extremal power outside [0, n).
std::vector<CorpusFunction> build_corpus(const CorpusSpec& spec, const GridSpec& box);

/// Samples a corpus function on a spatial grid (time frozen at 0) or on a
/// space-time grid (one slab per time-cell center).
SampledField sample_spatial(const CorpusFunction& f, const GridSpec& grid);
SampledField sample_spacetime(const CorpusFunction& f, const GridSpec& grid,
                              const TimeAxis& time);

}  // namespace mml
