#include "mml/exponents.hpp"

#include <cmath>
#include <sstream>

#include "mml/error.hpp"

namespace mml {

double ExponentRelation::output(const std::string& key) const {
    for (const auto& [k, v] : outputs) {
        if (k == key) return v;
    }
    fail(ErrorKind::inadmissible_exponents,
         "relation '" + name + "' has no output named '" + key + "'");
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Appends a constraint to the relation and records the first violation.
void require(ExponentRelation& rel, bool ok, const std::string& text) {
    rel.constraints.push_back(text);
    if (!ok && rel.violation.empty()) rel.violation = text;
}

// Finalizes a relation: admissible iff no violation was recorded; outputs are
// dropped when inadmissible so callers cannot use half-valid values.
ExponentRelation seal(ExponentRelation rel) {
    rel.admissible = rel.violation.empty();
    if (!rel.admissible) rel.outputs.clear();
    return rel;
}

[[noreturn]] void reject(const ExponentRelation& rel) {
    fail(ErrorKind::inadmissible_exponents, rel.name + ": " + rel.violation);
}

}  // namespace

ExponentRelation spatial_embedding_relation(int n, double p, double lambda, double mu,
                                            bool relaxed) {
    ExponentRelation rel;
    rel.name = "spatial-embedding";
    rel.inputs = {{"n", double(n)}, {"p", p}, {"lambda", lambda}, {"mu", mu}};
    require(rel, n >= 1, "n >= 1 (got " + fmt(n) + ")");
    require(rel, std::isfinite(p) && p > 1.0, "p > 1 (got " + fmt(p) + ")");
    if (relaxed) {
        require(rel, std::isfinite(lambda) && lambda >= 0.0, "lambda >= 0 (got " + fmt(lambda) + ")");
        require(rel, std::isfinite(mu) && lambda <= mu, "lambda <= mu (got " + fmt(mu) + ")");
    } else {
        require(rel, std::isfinite(lambda) && lambda > 0.0, "lambda > 0 (got " + fmt(lambda) + ")");
        require(rel, std::isfinite(mu) && lambda < mu, "lambda < mu (got " + fmt(mu) + ")");
    }
    require(rel, mu < double(n), "mu < n (got " + fmt(mu) + ")");
    if (rel.violation.empty()) {
        const double q = (double(n) - mu) * p / (double(n) - lambda);
        rel.outputs = {{"q", q}};
    }
    return seal(rel);
}

double spatial_embedding_exponent(int n, double p, double lambda, double mu, bool relaxed) {
    const ExponentRelation rel = spatial_embedding_relation(n, p, lambda, mu, relaxed);
    if (!rel.admissible) reject(rel);
    return rel.output("q");
}

ExponentRelation temporal_embedding_relation(double q1, double mu1, double mu, bool relaxed) {
    ExponentRelation rel;
    rel.name = "temporal-embedding";
    rel.inputs = {{"q1", q1}, {"mu1", mu1}, {"mu", mu}};
    require(rel, std::isfinite(q1) && q1 > 1.0, "q1 > 1 (got " + fmt(q1) + ")");
    require(rel, std::isfinite(mu1) && mu1 > 0.0, "mu1 > 0 (got " + fmt(mu1) + ")");
    if (relaxed) {
        require(rel, std::isfinite(mu) && mu1 <= mu, "mu1 <= mu (got " + fmt(mu) + ")");
    } else {
        require(rel, std::isfinite(mu) && mu1 < mu, "mu1 < mu (got " + fmt(mu) + ")");
    }
    require(rel, mu < 1.0, "mu < 1 (got " + fmt(mu) + ")");
    if (rel.violation.empty()) {
        const double q = (1.0 - mu) * q1 / (1.0 - mu1);
        if (relaxed) {
            require(rel, q >= 1.0, "derived q >= 1 (got " + fmt(q) + ")");
        } else {
            require(rel, q > 1.0, "derived q > 1 (got " + fmt(q) + ")");
        }
        if (rel.violation.empty()) rel.outputs = {{"q", q}};
    }
    return seal(rel);
}

double temporal_embedding_exponent(double q1, double mu1, double mu, bool relaxed) {
    const ExponentRelation rel = temporal_embedding_relation(q1, mu1, mu, relaxed);
    if (!rel.admissible) reject(rel);
    return rel.output("q");
}

ExponentRelation mixed_embedding_relation(int n, double p, double lambda, double mu, double q1,
                                          double mu1, double mu2, bool relaxed) {
    ExponentRelation rel;
    rel.name = "mixed-embedding";
    rel.inputs = {{"n", double(n)}, {"p", p},   {"lambda", lambda}, {"mu", mu},
                  {"q1", q1},       {"mu1", mu1}, {"mu2", mu2}};
    const ExponentRelation spatial = spatial_embedding_relation(n, p, lambda, mu, relaxed);
    const ExponentRelation temporal = temporal_embedding_relation(q1, mu1, mu2, relaxed);
    for (const auto& c : spatial.constraints) rel.constraints.push_back("spatial: " + c);
    for (const auto& c : temporal.constraints) rel.constraints.push_back("temporal: " + c);
    if (!spatial.admissible && rel.violation.empty())
        rel.violation = "spatial: " + spatial.violation;
    if (!temporal.admissible && rel.violation.empty())
        rel.violation = "temporal: " + temporal.violation;
    if (rel.violation.empty()) {
        rel.outputs = {{"q", spatial.outputs.front().second},
                       {"q2", temporal.outputs.front().second}};
    }
    return seal(rel);
}

MixedEmbeddingExponents mixed_embedding_exponents(int n, double p, double lambda, double mu,
                                                  double q1, double mu1, double mu2,
                                                  bool relaxed) {
    const ExponentRelation rel =
        mixed_embedding_relation(n, p, lambda, mu, q1, mu1, mu2, relaxed);
    if (!rel.admissible) reject(rel);
    return MixedEmbeddingExponents{rel.output("q"), rel.output("q2")};
}

namespace {

// Shared admissibility block for both Riesz-potential relations.
void riesz_preconditions(ExponentRelation& rel, int n, double p, double lambda, double alpha,
                         bool relaxed) {
    require(rel, n >= 1, "n >= 1 (got " + fmt(n) + ")");
    if (relaxed) {
        require(rel, std::isfinite(alpha) && alpha >= 0.0 && alpha < double(n),
                "0 <= alpha < n (got " + fmt(alpha) + ")");
    } else {
        require(rel, std::isfinite(alpha) && alpha > 0.0 && alpha < double(n),
                "0 < alpha < n (got " + fmt(alpha) + ")");
    }
    require(rel, std::isfinite(p) && p > 1.0, "p > 1 (got " + fmt(p) + ")");
    require(rel, alpha * p < double(n), "p < n/alpha (got p = " + fmt(p) + ")");
    if (relaxed) {
        require(rel, std::isfinite(lambda) && lambda >= 0.0, "lambda >= 0 (got " + fmt(lambda) + ")");
    } else {
        require(rel, std::isfinite(lambda) && lambda > 0.0, "lambda > 0 (got " + fmt(lambda) + ")");
    }
    require(rel, lambda < double(n) - alpha * p,
            "lambda < n - alpha*p (got " + fmt(lambda) + ")");
}

}  // namespace

ExponentRelation riesz_morrey_relation(int n, double p, double lambda, double alpha,
                                       bool relaxed) {
    ExponentRelation rel;
    rel.name = "riesz-morrey";
    rel.inputs = {{"n", double(n)}, {"p", p}, {"lambda", lambda}, {"alpha", alpha}};
    riesz_preconditions(rel, n, p, lambda, alpha, relaxed);
    if (rel.violation.empty()) {
        const double q = 1.0 / (1.0 / p - alpha / (double(n) - lambda));
        rel.outputs = {{"q", q}};
    }
    return seal(rel);
}

double riesz_morrey_exponent(int n, double p, double lambda, double alpha, bool relaxed) {
    const ExponentRelation rel = riesz_morrey_relation(n, p, lambda, alpha, relaxed);
    if (!rel.admissible) reject(rel);
    return rel.output("q");
}

ExponentRelation riesz_sobolev_relation(int n, double p, double lambda, double alpha,
                                        bool relaxed) {
    ExponentRelation rel;
    rel.name = "riesz-sobolev";
    rel.inputs = {{"n", double(n)}, {"p", p}, {"lambda", lambda}, {"alpha", alpha}};
    riesz_preconditions(rel, n, p, lambda, alpha, relaxed);
    if (rel.violation.empty()) {
        const double q = 1.0 / (1.0 / p - alpha / double(n));
        const double mu = double(n) * lambda / (double(n) - alpha * p);
        rel.outputs = {{"q", q}, {"mu", mu}};
    }
    return seal(rel);
}

RieszSobolevExponents riesz_sobolev_exponents(int n, double p, double lambda, double alpha,
                                              bool relaxed) {
    const ExponentRelation rel = riesz_sobolev_relation(n, p, lambda, alpha, relaxed);
    if (!rel.admissible) reject(rel);
    return RieszSobolevExponents{rel.output("q"), rel.output("mu")};
}

ExponentRelation fractional_maximal_relation(int n, double p, double lambda, double eta) {
    ExponentRelation rel;
    rel.name = "fractional-maximal";
    rel.inputs = {{"n", double(n)}, {"p", p}, {"lambda", lambda}, {"eta", eta}};
    require(rel, n >= 1, "n >= 1 (got " + fmt(n) + ")");
    require(rel, std::isfinite(p) && p > 1.0, "p > 1 (got " + fmt(p) + ")");
    require(rel, std::isfinite(lambda) && lambda >= 0.0 && lambda < double(n),
            "0 <= lambda < n (got " + fmt(lambda) + ")");
    const double eta_cap = (1.0 - lambda / double(n)) / p;
    require(rel, std::isfinite(eta) && eta > 0.0 && eta < eta_cap,
            "0 < eta < (1 - lambda/n)/p = " + fmt(eta_cap) + " (got " + fmt(eta) + ")");
    if (rel.violation.empty()) {
        const double q = 1.0 / (1.0 / p - double(n) * eta / (double(n) - lambda));
        const double epsilon = (double(n) - lambda - double(n) * eta * p) / (double(n) - lambda);
        rel.outputs = {{"q", q}, {"epsilon", epsilon}};
    }
    return seal(rel);
}

FractionalMaximalExponents fractional_maximal_exponents(int n, double p, double lambda,
                                                        double eta) {
    const ExponentRelation rel = fractional_maximal_relation(n, p, lambda, eta);
    if (!rel.admissible) reject(rel);
    return FractionalMaximalExponents{rel.output("q"), rel.output("epsilon")};
}

}  // namespace mml
