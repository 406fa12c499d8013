#pragma once

#include "mml/grid.hpp"
#include "mml/region.hpp"

namespace mml {

/// Selects one of the three maximal-function variants. The fractional variant
/// carries an order eta in (0, 1) and a flag choosing the integrand: the
/// mean-oscillation form |f - f_B| when set, plain |f| otherwise.
struct MaximalParams {
    enum class Variant { hardy_littlewood, sharp, fractional };

    Variant variant = Variant::hardy_littlewood;
    double eta = 0.0;         // fractional only
    bool oscillation = true;  // fractional only

    static MaximalParams hardy_littlewood();
    static MaximalParams sharp();
    static MaximalParams fractional(double eta, bool oscillation);
};

/// Centered maximal function: at each cell center x, the sup over the radius
/// set of the average of |f| over B_rho(x) ∩ box (discrete intersected volume
/// as denominator). The cell itself always belongs, so the sup is never empty.
SampledField hl_maximal(const SampledField& f, const RadiusSet& radii);

/// Sharp maximal function: at each x, the sup over balls B (any admissible
/// center and radius) with x ∈ B of the mean oscillation (1/|B|) ∫_B |f - f_B|.
SampledField sharp_maximal(const SampledField& f, const RadiusSet& radii);

/// Fractional maximal function of order eta: at each x, the sup over balls
/// containing x of |B|^(eta-1) ∫_B g, with g = |f - f_B| or |f| per the flag.
SampledField fractional_maximal(const SampledField& f, const MaximalParams& params,
                                const RadiusSet& radii);

/// Dispatch on params.variant.
SampledField maximal_function(const SampledField& f, const MaximalParams& params,
                              const RadiusSet& radii);

}  // namespace mml
