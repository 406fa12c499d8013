#pragma once

#include <string>

#include "mml/error.hpp"

namespace mml {

/// Spatial Morrey exponent pair (p, lambda) in dimension n.
/// Strict range: 1 < p < inf, 0 < lambda < n. The relaxed factory admits the
/// boundary values p >= 1, lambda >= 0 that the limiting embeddings use.
struct MorreyParams {
    double p = 0.0;
    double lambda = 0.0;
    int n = 0;
    bool relaxed = false;

    static MorreyParams strict(double p, double lambda, int n);
    static MorreyParams relaxed_pair(double p, double lambda, int n);
};

/// Mixed-norm exponents: temporal pair (q, mu) over a spatial pair.
/// Strict temporal range: 1 < q < inf, 0 < mu < 1. The relaxed factory admits
/// q >= 1 and 0 <= mu < n (the second exponent regime reaches past 1).
struct MixedParams {
    double q = 0.0;
    double mu = 0.0;
    MorreyParams space;
    bool relaxed = false;

    static MixedParams strict(double q, double mu, const MorreyParams& space);
    static MixedParams relaxed_pair(double q, double mu, const MorreyParams& space);
};

std::string describe(const MorreyParams& p);
std::string describe(const MixedParams& p);

}  // namespace mml
