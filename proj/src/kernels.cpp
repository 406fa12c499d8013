#include "mml/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mml {

double parabolic_distance(const Point& x, double t, int n) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    return std::sqrt(0.5 * (r2 + std::sqrt(r2 * r2 + 4.0 * t * t)));
}

std::vector<std::pair<double, double>> gauss_legendre(int m) {
    std::vector<std::pair<double, double>> out(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = {-x, w};
        out[m - 1 - i] = {x, w};
    }
    return out;
}

namespace {

struct SphereSample {
    STPoint omega;
    double weight;  // quadrature weight times any metric surface factor
};

// Quadrature nodes over the unit sphere the metric sees. Euclidean kernels
// integrate over S^(n-1) with plain surface measure; parabolic kernels over
// the sphere S^n in space-time with the anisotropic polar weight
// |omega_x|^2 + 2 omega_t^2.
std::vector<SphereSample> sphere_samples(const KernelDescriptor& k, int order) {
    std::vector<SphereSample> samples;
    const double two_pi = 2.0 * std::numbers::pi;
    if (k.metric == KernelMetric::euclidean) {
        if (k.n == 1) {
            samples.push_back({{make_point(1.0), 0.0}, 1.0});
            samples.push_back({{make_point(-1.0), 0.0}, 1.0});
        } else if (k.n == 2) {
            const int m = 2 * order;
            for (int i = 0; i < m; ++i) {
                const double th = two_pi * (i + 0.5) / m;
                samples.push_back(
                    {{make_point(std::cos(th), std::sin(th)), 0.0}, two_pi / m});
            }
        } else {
            const auto gl = gauss_legendre(order);
            const int m = 2 * order;
            for (const auto& [c, wc] : gl) {
                const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
                for (int i = 0; i < m; ++i) {
                    const double th = two_pi * (i + 0.5) / m;
                    samples.push_back(
                        {{make_point(s * std::cos(th), s * std::sin(th), c), 0.0},
                         wc * two_pi / m});
                }
            }
        }
        return samples;
    }
    // parabolic: sphere of R^(n+1), last coordinate is time
    if (k.n == 1) {
        const int m = 2 * order;
        for (int i = 0; i < m; ++i) {
            const double th = two_pi * (i + 0.5) / m;
            const double sx = std::cos(th), st = std::sin(th);
            const double surface = sx * sx + 2.0 * st * st;
            samples.push_back({{make_point(sx), st}, surface * two_pi / m});
        }
    } else if (k.n == 2) {
        const auto gl = gauss_legendre(order);
        const int m = 2 * order;
        for (const auto& [c, wc] : gl) {
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            const double surface = s * s + 2.0 * c * c;
            for (int i = 0; i < m; ++i) {
                const double th = two_pi * (i + 0.5) / m;
                samples.push_back({{make_point(s * std::cos(th), s * std::sin(th)), c},
                                   surface * wc * two_pi / m});
            }
        }
    } else {
        fail(ErrorKind::invalid_kernel, "parabolic kernels support n = 1 or 2");
    }
    return samples;
}

STPoint scaled(const KernelDescriptor& k, const STPoint& z, double s) {
    STPoint out;
    for (int a = 0; a < k.n; ++a) out.x[a] = s * z.x[a];
    out.t = k.metric == KernelMetric::parabolic ? s * s * z.t : z.t;
    return out;
}

std::vector<STPoint> base_samples(const KernelDescriptor& k) {
    if (k.kind == KernelKind::classical) return {STPoint{}};
    std::vector<STPoint> bases;
    const double coords[3] = {-0.75, 0.0, 0.75};
    if (k.n == 1) {
        for (double c : coords) bases.push_back({make_point(c), 0.0});
    } else if (k.n == 2) {
        for (double c0 : coords)
            for (double c1 : coords) bases.push_back({make_point(c0, c1), 0.0});
    } else {
        for (double c0 : coords)
            for (double c1 : coords)
                for (double c2 : coords) bases.push_back({make_point(c0, c1, c2), 0.0});
    }
    return bases;
}

}  // namespace

KernelValidation kernel_validate(const KernelDescriptor& k, int order) {
    if (!k.eval) fail(ErrorKind::invalid_kernel, "kernel has no evaluator");
    if (k.n < 1 || k.n > kMaxDim)
        fail(ErrorKind::invalid_kernel, "kernel dimension out of range");
    if (order < 2) fail(ErrorKind::invalid_kernel, "quadrature order too small");

    KernelValidation report;
    report.kernel = k.name;
    report.quadrature_order = order;

    const auto samples = sphere_samples(k, order);
    const auto bases = base_samples(k);
    const double scales[3] = {0.5, 2.0, 4.0};

    for (const auto& base : bases) {
        double mean = 0.0, absint = 0.0;
        for (const auto& s : samples) {
            const double v = k(base, s.omega);
            if (!std::isfinite(v))
                fail(ErrorKind::invalid_kernel,
                     "kernel '" + k.name + "' is non-finite on the unit sphere");
            mean += v * s.weight;
            absint += std::abs(v) * s.weight;
        }
        if (std::abs(mean) > std::abs(report.mean_integral)) report.mean_integral = mean;
        report.abs_integral = std::max(report.abs_integral, absint);

        for (const auto& s : samples) {
            const double v = k(base, s.omega);
            for (double sc : scales) {
                const double vs = k(base, scaled(k, s.omega, sc));
                const double want = std::pow(sc, k.homogeneity) * v;
                if (!std::isfinite(vs))
                    fail(ErrorKind::invalid_kernel,
                         "kernel '" + k.name + "' is non-finite off the unit sphere");
                const double defect =
                    std::abs(vs - want) / std::max(1e-300, std::abs(want));
                if (std::abs(want) > 1e-14)
                    report.homogeneity_defect =
                        std::max(report.homogeneity_defect, defect);
                else
                    report.homogeneity_defect =
                        std::max(report.homogeneity_defect, std::abs(vs - want));
            }
        }
    }

    if (k.kind == KernelKind::variable) {
        // sampled base-derivative magnitudes, first and second order
        const double step = 1e-4;
        for (const auto& base : bases) {
            for (const auto& s : samples) {
                for (int a = 0; a < k.n; ++a) {
                    STPoint lo = base, hi = base;
                    lo.x[a] -= step;
                    hi.x[a] += step;
                    const double d1 = (k(hi, s.omega) - k(lo, s.omega)) / (2.0 * step);
                    const double d2 = (k(hi, s.omega) - 2.0 * k(base, s.omega) +
                                       k(lo, s.omega)) /
                                      (step * step);
                    report.derivative_bound =
                        std::max({report.derivative_bound, std::abs(d1), std::abs(d2)});
                }
            }
        }
        if (k.smoothness_bound > 0.0)
            report.within_smoothness = report.derivative_bound <= k.smoothness_bound;
    }
    return report;
}

namespace {

double heat_hessian_xy(const STPoint& z) {
    if (!(z.t > 0.0)) return 0.0;
    const double r2 = z.x[0] * z.x[0] + z.x[1] * z.x[1];
    const double e = r2 / (4.0 * z.t);
    if (e > 700.0) return 0.0;
    const double gauss = std::exp(-e) / (4.0 * std::numbers::pi * z.t);
    return z.x[0] * z.x[1] / (4.0 * z.t * z.t) * gauss;
}

std::vector<KernelDescriptor> make_registry() {
    std::vector<KernelDescriptor> kernels;

    kernels.push_back({"hilbert", KernelKind::classical, KernelMetric::euclidean, 1, -1.0,
                       [](const STPoint&, const STPoint& z) { return 1.0 / z.x[0]; }, 0.0});

    kernels.push_back({"riesz-x", KernelKind::classical, KernelMetric::euclidean, 2, -2.0,
                       [](const STPoint&, const STPoint& z) {
                           const double r = std::hypot(z.x[0], z.x[1]);
                           return z.x[0] / (r * r * r);
                       },
                       0.0});

    kernels.push_back({"riesz-y", KernelKind::classical, KernelMetric::euclidean, 2, -2.0,
                       [](const STPoint&, const STPoint& z) {
                           const double r = std::hypot(z.x[0], z.x[1]);
                           return z.x[1] / (r * r * r);
                       },
                       0.0});

    // positive radial kernel: correctly homogeneous but fails the zero-mean
    // requirement; kept for negative-path coverage
    kernels.push_back({"radial", KernelKind::classical, KernelMetric::euclidean, 2, -2.0,
                       [](const STPoint&, const STPoint& z) {
                           return 1.0 / (z.x[0] * z.x[0] + z.x[1] * z.x[1]);
                       },
                       0.0});

    kernels.push_back({"heat-xy", KernelKind::classical, KernelMetric::parabolic, 2, -4.0,
                       [](const STPoint&, const STPoint& z) { return heat_hessian_xy(z); },
                       0.0});

    kernels.push_back({"modulated-riesz-x", KernelKind::variable, KernelMetric::euclidean,
                       2, -2.0,
                       [](const STPoint& base, const STPoint& z) {
                           const double a =
                               1.0 + 0.5 * std::sin(base.x[0]) * std::cos(base.x[1]);
                           const double r = std::hypot(z.x[0], z.x[1]);
                           return a * z.x[0] / (r * r * r);
                       },
                       8.0});

    return kernels;
}

}  // namespace

const std::vector<KernelDescriptor>& kernel_registry() {
    static const std::vector<KernelDescriptor> registry = make_registry();
    return registry;
}

const KernelDescriptor& find_kernel(const std::string& name) {
    for (const auto& k : kernel_registry())
        if (k.name == name) return k;
    fail(ErrorKind::unknown_operator, "no kernel named '" + name + "'");
}

}  // namespace mml
