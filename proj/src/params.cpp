#include "mml/params.hpp"

#include <cmath>
#include <sstream>

namespace mml {

MorreyParams MorreyParams::strict(double p, double lambda, int n) {
    if (n < 1) fail(ErrorKind::invalid_exponent, "dimension must be positive");
    if (!std::isfinite(p) || !(p > 1.0))
        fail(ErrorKind::invalid_exponent, "p must lie in (1, inf)");
    if (!std::isfinite(lambda) || !(lambda > 0.0) || !(lambda < n))
        fail(ErrorKind::invalid_exponent, "lambda must lie in (0, n)");
    return {p, lambda, n, false};
}

MorreyParams MorreyParams::relaxed_pair(double p, double lambda, int n) {
    if (n < 1) fail(ErrorKind::invalid_exponent, "dimension must be positive");
    if (!std::isfinite(p) || !(p >= 1.0))
        fail(ErrorKind::invalid_exponent, "p must be at least 1");
    if (!std::isfinite(lambda) || !(lambda >= 0.0) || !(lambda < n))
        fail(ErrorKind::invalid_exponent, "lambda must lie in [0, n)");
    return {p, lambda, n, true};
}

MixedParams MixedParams::strict(double q, double mu, const MorreyParams& space) {
    if (!std::isfinite(q) || !(q > 1.0))
        fail(ErrorKind::invalid_exponent, "q must lie in (1, inf)");
    if (!std::isfinite(mu) || !(mu > 0.0) || !(mu < 1.0))
        fail(ErrorKind::invalid_exponent, "mu must lie in (0, 1)");
    return {q, mu, space, false};
}

MixedParams MixedParams::relaxed_pair(double q, double mu, const MorreyParams& space) {
    if (!std::isfinite(q) || !(q >= 1.0))
        fail(ErrorKind::invalid_exponent, "q must be at least 1");
    if (!std::isfinite(mu) || !(mu >= 0.0) || !(mu < space.n))
        fail(ErrorKind::invalid_exponent, "mu must lie in [0, n)");
    return {q, mu, space, true};
}

std::string describe(const MorreyParams& p) {
    std::ostringstream s;
    s << "L^{" << p.p << "," << p.lambda << "} (n=" << p.n << ")";
    return s.str();
}

std::string describe(const MixedParams& p) {
    std::ostringstream s;
    s << "L^{" << p.q << "," << p.mu << "}(0,T; L^{" << p.space.p << "," << p.space.lambda
      << "}) (n=" << p.space.n << ")";
    return s.str();
}

}  // namespace mml
