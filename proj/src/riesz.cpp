#include "mml/riesz.hpp"

#include <cmath>
#include <vector>

namespace mml {

double riesz_self_weight(int n, double h, double alpha) {
    if (n == 1) return 2.0 * std::pow(0.5 * h, alpha) / alpha;
    // midpoint refinement: 16 subcells per axis, none touching the origin
    const int m = 16;
    const double sh = h / m;
    const double subvol = std::pow(sh, n);
    double total = 0.0;
    if (n == 2) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double u = (i + 0.5) * sh - 0.5 * h;
                const double v = (j + 0.5) * sh - 0.5 * h;
                total += std::pow(u * u + v * v, 0.5 * (alpha - n)) * subvol;
            }
        return total;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double u = (i + 0.5) * sh - 0.5 * h;
                const double v = (j + 0.5) * sh - 0.5 * h;
                const double w = (k + 0.5) * sh - 0.5 * h;
                total += std::pow(u * u + v * v + w * w, 0.5 * (alpha - n)) * subvol;
            }
    return total;
}

SampledField riesz_potential(const SampledField& f, double alpha) {
    if (f.has_time())
        fail(ErrorKind::invalid_field, "riesz_potential acts on spatial slices");
    const GridSpec& g = f.grid;
    if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha < g.n))
        fail(ErrorKind::invalid_exponent, "order must lie in (0, n)");

    const int n = g.n;
    const int nc = g.cells;
    const int w = 2 * nc - 1;  // offsets -(nc-1) .. nc-1 per axis
    const double vol = g.cell_volume();
    const double self = riesz_self_weight(n, g.h, alpha);

    std::int64_t wsize = 1;
    for (int a = 0; a < n; ++a) wsize *= w;
    std::vector<double> weight(static_cast<std::size_t>(wsize));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t o = 0; o < wsize; ++o) {
        std::int64_t rest = o;
        double d2 = 0.0;
        for (int a = n - 1; a >= 0; --a) {
            const double off = static_cast<double>(rest % w - (nc - 1)) * g.h;
            rest /= w;
            d2 += off * off;
        }
        weight[static_cast<std::size_t>(o)] =
            d2 == 0.0 ? self : std::pow(d2, 0.5 * (alpha - n)) * vol;
    }

    SampledField out = SampledField::zeros(g);
    const double* fv = f.values.data();
    double* ov = out.values.data();
    const double* wv = weight.data();
    if (n == 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < nc; ++i) {
            double acc = 0.0;
            for (int j = 0; j < nc; ++j) acc += fv[j] * wv[i - j + nc - 1];
            ov[i] = acc;
        }
    } else if (n == 2) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i0 = 0; i0 < nc; ++i0)
            for (int i1 = 0; i1 < nc; ++i1) {
                double acc = 0.0;
                for (int j0 = 0; j0 < nc; ++j0) {
                    const double* frow = fv + static_cast<std::int64_t>(j0) * nc;
                    const double* wrow =
                        wv + static_cast<std::int64_t>(i0 - j0 + nc - 1) * w + (i1 + nc - 1);
                    for (int j1 = 0; j1 < nc; ++j1) acc += frow[j1] * wrow[-j1];
                }
                ov[static_cast<std::int64_t>(i0) * nc + i1] = acc;
            }
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i0 = 0; i0 < nc; ++i0)
            for (int i1 = 0; i1 < nc; ++i1)
                for (int i2 = 0; i2 < nc; ++i2) {
                    double acc = 0.0;
                    for (int j0 = 0; j0 < nc; ++j0)
                        for (int j1 = 0; j1 < nc; ++j1) {
                            const double* frow =
                                fv + (static_cast<std::int64_t>(j0) * nc + j1) * nc;
                            const double* wrow =
                                wv + ((static_cast<std::int64_t>(i0 - j0 + nc - 1) * w) +
                                      (i1 - j1 + nc - 1)) *
                                         w +
                                (i2 + nc - 1);
                            for (int j2 = 0; j2 < nc; ++j2) acc += frow[j2] * wrow[-j2];
                        }
                    ov[(static_cast<std::int64_t>(i0) * nc + i1) * nc + i2] = acc;
                }
    }
    return out;
}

}  // namespace mml
