#pragma once

#include "mml/grid.hpp"

namespace mml {

/// Fractional integral of order alpha in (0, n):
///   (I_alpha f)(x) = sum over cells y of f(y) |x - y|^(alpha - n) * cell volume,
/// where the singular self cell y = x contributes the kernel's exact integral
/// over one cell (closed form in 1-d, midpoint-refined elsewhere). Values
/// outside the box are treated as zero, so f should be supported inside it.
SampledField riesz_potential(const SampledField& f, double alpha);

/// The self-cell weight: integral of |u|^(alpha - n) over one grid cell
/// centered at the origin. Exposed for quadrature tests.
double riesz_self_weight(int n, double h, double alpha);

}  // namespace mml
