#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mml/grid.hpp"

namespace mml {

/// Point in space-time; t stays 0 for purely spatial use.
struct STPoint {
    Point x{};
    double t = 0.0;
};

/// Anisotropic metric generated by the scaling (x, t) -> (s x, s^2 t):
///   rho(x, t) = sqrt((|x|^2 + sqrt(|x|^4 + 4 t^2)) / 2),
/// so rho(s x, s^2 t) = s rho(x, t). Its unit sphere {rho = 1} coincides with
/// the Euclidean unit sphere of R^(n+1).
double parabolic_distance(const Point& x, double t, int n);

enum class KernelKind { classical, variable };
enum class KernelMetric { euclidean, parabolic };

/// A convolution kernel for truncated singular integrals. Euclidean kernels
/// act on spatial offsets z (degree -n homogeneous); parabolic kernels act on
/// space-time offsets (z, tau) with anisotropic degree -(n+2). Variable
/// kernels additionally read the base point; classical ones ignore it.
struct KernelDescriptor {
    std::string name;
    KernelKind kind = KernelKind::classical;
    KernelMetric metric = KernelMetric::euclidean;
    int n = 0;             // spatial dimension
    double homogeneity = 0.0;
    std::function<double(const STPoint& base, const STPoint& z)> eval;
    double smoothness_bound = 0.0;  // cap on sampled base derivatives; 0 = unchecked

    double operator()(const STPoint& base, const STPoint& z) const { return eval(base, z); }
};

/// Results of the admissibility checks a kernel must pass before use:
/// homogeneity under the metric's scaling, vanishing sphere mean, and a finite
/// absolute sphere integral. Parabolic sphere integrals carry the surface
/// weight |omega_x|^2 + 2 omega_t^2 of the anisotropic polar decomposition.
struct KernelValidation {
    std::string kernel;
    int quadrature_order = 0;
    double homogeneity_defect = 0.0;   // max relative defect over samples and scales
    double mean_integral = 0.0;        // sphere mean (signed)
    double abs_integral = 0.0;         // sphere integral of |k|
    double derivative_bound = 0.0;     // max sampled base derivative, variable kernels
    bool within_smoothness = true;

    bool zero_mean(double tol) const {
        return std::abs(mean_integral) <= tol * std::max(1.0, abs_integral);
    }
    bool homogeneous(double tol) const { return homogeneity_defect <= tol; }
};

/// Samples the kernel over the metric's unit sphere at the given quadrature
/// order. Throws invalid_kernel if any sample is non-finite.
KernelValidation kernel_validate(const KernelDescriptor& k, int order);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int m);

/// Built-in kernels, referenced by name from configs and tests.
const std::vector<KernelDescriptor>& kernel_registry();
const KernelDescriptor& find_kernel(const std::string& name);

}  // namespace mml
