#pragma once

#include <string>

#include "mml/grid.hpp"
#include "mml/params.hpp"
#include "mml/region.hpp"

namespace mml {

/// Norm value plus the witness where the defining supremum is attained.
/// Re-evaluating the reported region reproduces the value exactly.
struct NormReport {
    std::string name;
    double value = 0.0;

    Index center_index{};
    Point center{};
    double radius = 0.0;

    // mixed norms only
    int t_index = -1;
    double t_center = 0.0;
    double t_radius = 0.0;
};

/// Plain L^p norm with midpoint weights (h^n, and dt for space-time fields).
double lp_norm(const SampledField& f, double p);

/// sup over cell centers x and radii rho of
///   ( rho^-lambda * integral_{box ∩ B_rho(x)} |f|^p )^(1/p).
NormReport morrey_norm(const SampledField& f, const MorreyParams& params,
                       const RadiusSet& radii);

/// Outer temporal Morrey norm of the slice-wise spatial Morrey norm:
///   sup over t0, rho_t of ( rho_t^-mu * integral_{(0,T) ∩ (t0-rho_t, t0+rho_t)}
///       S(t)^(q/p) dt )^(1/q),  S(t) = sup_{x,rho} rho^-lambda int |f(.,t)|^p.
NormReport mixed_morrey_norm(const SampledField& f, const MixedParams& params,
                             const RadiusSet& space_radii, const RadiusSet& time_radii);

/// sup over balls of the mean oscillation (1/|B|) integral_B |f - f_B|,
/// with B ∩ box and its discrete volume.
NormReport bmo_seminorm(const SampledField& f, const RadiusSet& radii);

/// sup of the mean oscillation over balls with radius <= r from the set.
/// An empty restriction yields 0.
double vmo_modulus(const SampledField& f, double r, const RadiusSet& radii);

/// Spatial slice j as a standalone field (shares grid, drops the time axis).
SampledField extract_slice(const SampledField& f, int j);

}  // namespace mml
