#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mml {

/// A named exponent relation: input exponents, derived exponents, and the
/// admissibility constraints that gate the derivation. Describers below build
/// these without throwing; `admissible` is false and `violation` names the
/// first failed constraint when the inputs fall outside the admissible range.
/// The throwing accessors wrap the describers and raise
/// ErrorKind::inadmissible_exponents instead.
struct ExponentRelation {
    std::string name;
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::pair<std::string, double>> outputs;  // empty when inadmissible
    std::vector<std::string> constraints;                 // human-readable admissibility conditions
    bool admissible = false;
    std::string violation;  // first violated constraint; empty when admissible

    double output(const std::string& key) const;  // throws if missing
};

/// Spatial Morrey embedding exponent: q = (n - mu) * p / (n - lambda), the
/// target integrability when L^{p,lambda} embeds into L^{q,mu} on a bounded
/// box. Strict admissibility: p > 1, 0 < lambda < mu < n. The relaxed flag
/// additionally accepts the boundary lambda <= mu (mu = lambda gives q = p)
/// and lambda = 0.
ExponentRelation spatial_embedding_relation(int n, double p, double lambda, double mu,
                                            bool relaxed = false);
double spatial_embedding_exponent(int n, double p, double lambda, double mu,
                                  bool relaxed = false);

/// Temporal Morrey embedding exponent: q = (1 - mu) * q1 / (1 - mu1), the
/// target temporal integrability when the one-dimensional Morrey class with
/// (q1, mu1) embeds into the one with (q, mu). Strict admissibility: q1 > 1,
/// 0 < mu1 < mu < 1, and the derived q must itself exceed 1. Relaxed accepts
/// mu1 <= mu (mu = mu1 gives q = q1) and derived q >= 1.
ExponentRelation temporal_embedding_relation(double q1, double mu1, double mu,
                                             bool relaxed = false);
double temporal_embedding_exponent(double q1, double mu1, double mu, bool relaxed = false);

/// Composite mixed-norm embedding: combines the spatial relation on
/// (n, p, lambda, mu) with the temporal relation on (q1, mu1, mu2), producing
/// the pair (q, q2) for which the mixed class with outer (q1, mu1) and inner
/// (p, lambda) embeds into the one with outer (q2, mu2) and inner (q, mu).
struct MixedEmbeddingExponents {
    double q;   // inner spatial target
    double q2;  // outer temporal target
};
ExponentRelation mixed_embedding_relation(int n, double p, double lambda, double mu, double q1,
                                          double mu1, double mu2, bool relaxed = false);
MixedEmbeddingExponents mixed_embedding_exponents(int n, double p, double lambda, double mu,
                                                  double q1, double mu1, double mu2,
                                                  bool relaxed = false);

/// Riesz-potential target exponent at fixed spatial Morrey parameter:
/// 1/q = 1/p - alpha/(n - lambda). Admissibility: 0 < alpha < n,
/// 1 < p < n/alpha, 0 < lambda < n - alpha*p. Relaxed accepts alpha = 0
/// (q = p) and lambda = 0. Derived identities exposed for testing:
/// (n - lambda - alpha*p)/(n - lambda) == p/q and
/// alpha*q/(n - lambda) + 1 == q/p.
ExponentRelation riesz_morrey_relation(int n, double p, double lambda, double alpha,
                                       bool relaxed = false);
double riesz_morrey_exponent(int n, double p, double lambda, double alpha, bool relaxed = false);

/// Riesz-potential Sobolev-type target: 1/q = 1/p - alpha/n together with the
/// rescaled Morrey parameter mu = n*lambda/(n - alpha*p), mapping (p, lambda)
/// to (q, mu). Admissibility as for riesz_morrey_relation; the derived mu
/// satisfies lambda < mu < n strictly (lambda = 0 gives mu = 0 under relaxed).
struct RieszSobolevExponents {
    double q;
    double mu;
};
ExponentRelation riesz_sobolev_relation(int n, double p, double lambda, double alpha,
                                        bool relaxed = false);
RieszSobolevExponents riesz_sobolev_exponents(int n, double p, double lambda, double alpha,
                                              bool relaxed = false);

/// Fractional-maximal target exponent: 1/q = 1/p - n*eta/(n - lambda), with
/// the auxiliary interpolation exponent epsilon = (n - lambda - n*eta*p)/(n - lambda)
/// exposed read-only; they satisfy p/epsilon = q. Admissibility: p > 1,
/// 0 <= lambda < n, 0 < eta < (1 - lambda/n)/p.
struct FractionalMaximalExponents {
    double q;
    double epsilon;
};
ExponentRelation fractional_maximal_relation(int n, double p, double lambda, double eta);
FractionalMaximalExponents fractional_maximal_exponents(int n, double p, double lambda,
                                                        double eta);

}  // namespace mml
