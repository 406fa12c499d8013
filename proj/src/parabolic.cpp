#include "mml/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mml/error.hpp"
#include "mml/format.hpp"
#include "mml/hash.hpp"
#include "mml/kernels.hpp"
#include "mml/norms.hpp"

namespace mml {

namespace {

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

// Arguments of exp() below this magnitude underflow to zero anyway; cutting
// early keeps the Gaussian tails exactly zero, matching the registered heat
// kernels.
constexpr double kExpCutoff = 700.0;

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * u01(rng); }

double gaussian(std::mt19937_64& rng) {
    const double u1 = std::max(u01(rng), 0x1.0p-60);
    const double u2 = u01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Point unit_direction(std::mt19937_64& rng, int n) {
    while (true) {
        Point v{};
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = gaussian(rng);
            norm2 += v[i] * v[i];
        }
        if (norm2 > 1e-16) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (int i = 0; i < n; ++i) v[i] *= inv;
            return v;
        }
    }
}

double det_n(const Mat& m, int n) {
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat inverse_n(const Mat& m, int n, double det) {
    Mat inv{};
    const double d = 1.0 / det;
    if (n == 1) {
        inv[0][0] = d;
    } else if (n == 2) {
        inv[0][0] = m[1][1] * d;
        inv[0][1] = -m[0][1] * d;
        inv[1][0] = -m[1][0] * d;
        inv[1][1] = m[0][0] * d;
    } else {
        inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * d;
        inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * d;
        inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * d;
        inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * d;
        inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * d;
        inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * d;
        inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * d;
        inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * d;
        inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * d;
    }
    return inv;
}

bool positive_definite(const Mat& m, int n) {
    for (int k = 1; k <= n; ++k)
        if (!(det_n(m, k) > 0.0)) return false;
    return true;
}

void check_coefficient_shape(const CoefficientField& a) {
    if (a.n < 1 || a.n > kMaxDim)
        fail(ErrorKind::invalid_coefficients, "coefficient dimension must be 1..3");
    if (a.entries.size() != std::size_t(a.n) * std::size_t(a.n))
        fail(ErrorKind::invalid_coefficients, "coefficient field needs n*n entries");
    if (!(a.nu >= 1.0))
        fail(ErrorKind::invalid_coefficients, "ellipticity constant must be at least 1");
    const SampledField& ref = a.entries.front();
    for (const auto& e : a.entries) {
        if (!e.grid.same_layout(ref.grid) || e.has_time() != ref.has_time() ||
            (e.has_time() && !e.time->same_layout(*ref.time)))
            fail(ErrorKind::invalid_coefficients, "coefficient entries on mismatched grids");
    }
}

/// Core Gamma evaluation shared by the public derivative accessors; writes
/// Gamma itself and the vector A zeta without allocating.
struct GammaEval {
    double gamma = 0.0;
    std::array<double, kMaxDim> az{};
};

bool gamma_eval(const FundamentalSolutionParams& params, const Point& zeta, double tau,
                GammaEval& out) {
    if (!(tau > 0.0)) return false;
    const int n = params.n;
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += params.inverse[i][j] * zeta[j];
        out.az[i] = s;
        q += s * zeta[i];
    }
    const double e = q / (4.0 * tau);
    if (e > kExpCutoff) return false;
    out.gamma = std::pow(4.0 * std::numbers::pi * tau, params.prefactor_exponent) *
                params.normalizer * std::exp(-e);
    return true;
}

void check_params(const FundamentalSolutionParams& params) {
    if (params.n < 1 || params.n > kMaxDim)
        fail(ErrorKind::invalid_domain, "fundamental-solution dimension must be 1..3");
    if (!(params.normalizer > 0.0) || !std::isfinite(params.normalizer))
        fail(ErrorKind::invalid_coefficients, "normalizer must be finite and positive");
    if (!std::isfinite(params.prefactor_exponent))
        fail(ErrorKind::invalid_exponent, "prefactor exponent must be finite");
}

/// Euclidean-measure quadrature nodes (y, weight) on the upper half (time
/// component positive) of the unit sphere of R^(n+1), time component stored
/// in slot kMaxDim. The kernel integrands vanish to all orders where the
/// time component approaches zero but turn on steeply just above it, so the
/// polar angle chi from the time axis is parametrized as
/// chi = (pi/2)(1 - t^4): that maps the steep layer to the middle of the
/// Gauss-Legendre panel in t and restores spectral accuracy.
std::vector<std::pair<std::array<double, kMaxDim + 1>, double>> sphere_nodes(int n,
                                                                             int order) {
    std::vector<std::pair<std::array<double, kMaxDim + 1>, double>> nodes;
    const double two_pi = 2.0 * std::numbers::pi;
    const double half_pi = 0.5 * std::numbers::pi;
    const auto gl = gauss_legendre(order);

    // spatial directions omega on S^(n-1) with their weights
    std::vector<std::pair<std::array<double, kMaxDim>, double>> dirs;
    if (n == 1) {
        dirs.push_back({{1.0, 0.0, 0.0}, 1.0});
        dirs.push_back({{-1.0, 0.0, 0.0}, 1.0});
    } else if (n == 2) {
        const int m = 2 * order;
        for (int k = 0; k < m; ++k) {
            const double phi = (k + 0.5) * two_pi / m;
            dirs.push_back({{std::cos(phi), std::sin(phi), 0.0}, two_pi / m});
        }
    } else {
        const int m = 2 * order;
        for (const auto& [v, wv] : gl) {
            const double s = std::sqrt(std::max(0.0, 1.0 - v * v));
            for (int k = 0; k < m; ++k) {
                const double phi = (k + 0.5) * two_pi / m;
                dirs.push_back({{s * std::cos(phi), s * std::sin(phi), v}, wv * two_pi / m});
            }
        }
    }

    for (const auto& [x, wx] : gl) {
        const double t = 0.5 * (x + 1.0);  // map [-1,1] -> [0,1]
        const double chi = half_pi * (1.0 - t * t * t * t);
        const double sc = std::sin(chi);
        double band = 0.5 * wx * half_pi * 4.0 * t * t * t;  // d chi / d t, GL scaling
        for (int k = 1; k < n; ++k) band *= sc;              // sin^(n-1) chi
        const double yt = std::cos(chi);
        for (const auto& [omega, womega] : dirs) {
            std::array<double, kMaxDim + 1> y{};
            for (int a = 0; a < n; ++a) y[std::size_t(a)] = sc * omega[std::size_t(a)];
            y[kMaxDim] = yt;
            nodes.push_back({y, band * womega});
        }
    }
    return nodes;
}

}  // namespace

CoefficientField make_coefficients(
    int n, double nu, const GridSpec& grid, const TimeAxis& time,
    const std::function<double(int, int, const Point&, double)>& a) {
    if (!a) fail(ErrorKind::invalid_coefficients, "coefficient closure required");
    CoefficientField field;
    field.n = n;
    field.nu = nu;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            field.entries.push_back(SampledField::sample(
                grid, time,
                [&a, i, j](const Point& x, double t) { return a(i, j, x, t); }));
    check_coefficient_shape(field);
    return field;
}

CoefficientField coefficient_family(const std::string& name, const GridSpec& grid,
                                    const TimeAxis& time) {
    const int n = grid.n;
    if (name == "identity") {
        return make_coefficients(n, 1.0, grid, time,
                                 [](int i, int j, const Point&, double) {
                                     return i == j ? 1.0 : 0.0;
                                 });
    }
    if (name == "smooth-perturbation") {
        // diagonal 1 + 0.1 sin(x_1 + t/2); symmetric off-diagonal
        // 0.05 sin(x_i + x_j). Gershgorin keeps the spectrum inside
        // [0.8, 1.2], within the claimed constant 1.3.
        return make_coefficients(
            n, 1.3, grid, time, [](int i, int j, const Point& x, double t) {
                if (i == j) return 1.0 + 0.1 * std::sin(x[i] + 0.5 * t);
                return 0.05 * std::sin(x[i] + x[j]);
            });
    }
    if (name == "mollified-jump") {
        // diagonal jump of height 0.3 across the plane x_1 = 0, mollified at
        // scale 0.15. Values stay in [1, 1.3], within the constant 1.35; the
        // profile is Lipschitz, so its mean oscillation vanishes with the
        // ball radius.
        return make_coefficients(n, 1.35, grid, time,
                                 [](int i, int j, const Point& x, double) {
                                     if (i != j) return 0.0;
                                     return 1.0 + 0.15 * (1.0 + std::tanh(x[0] / 0.15));
                                 });
    }
    fail(ErrorKind::invalid_coefficients, "unknown coefficient family: " + name);
}

std::vector<std::string> coefficient_families() {
    return {"identity", "smooth-perturbation", "mollified-jump"};
}

CoefficientReport validate_coefficients(const CoefficientField& a,
                                        const std::vector<double>& vmo_sweep,
                                        int directions_per_sample, std::uint64_t seed) {
    check_coefficient_shape(a);
    if (directions_per_sample < 1)
        fail(ErrorKind::invalid_domain, "need at least one direction per sample");
    const int n = a.n;
    const std::size_t samples = a.entries.front().values.size();

    CoefficientReport report;

    double defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& ij = a.at(i, j).values;
            const auto& ji = a.at(j, i).values;
            for (std::size_t s = 0; s < samples; ++s)
                defect = std::max(defect, std::abs(ij[s] - ji[s]));
        }
    report.symmetry_defect = defect;
    if (defect > 0.0)
        fail(ErrorKind::invalid_coefficients, "coefficient matrix is not symmetric");

    const double* vals[kMaxDim][kMaxDim] = {};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals[i][j] = a.at(i, j).values.data();

    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : mn) reduction(max : mx)
#endif
    for (std::int64_t s = 0; s < std::int64_t(samples); ++s) {
        std::mt19937_64 rng((0x9E3779B97F4A7C15ULL * (std::uint64_t(s) + 1)) ^
                            (seed + fnv1a64("coefficient-directions")));
        for (int d = 0; d < directions_per_sample; ++d) {
            const Point xi = unit_direction(rng, n);
            double form = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    form += vals[i][j][std::size_t(s)] * xi[i] * xi[j];
            mn = std::min(mn, form);
            mx = std::max(mx, form);
        }
    }
    report.min_form = mn;
    report.max_form = mx;
    report.elliptic = mn >= 1.0 / a.nu - 1e-12 && mx <= a.nu + 1e-12;

    const RadiusSet radii = dyadic_radii(a.entries.front().grid);
    for (double r : vmo_sweep) {
        if (!(r > 0.0)) fail(ErrorKind::invalid_radii, "modulus radius must be positive");
        double modulus = 0.0;
        for (const auto& entry : a.entries) {
            // identical slices share their modulus; skip exact duplicates
            std::vector<int> reps;
            for (int j = 0; j < entry.slices(); ++j) {
                bool dup = false;
                const auto sj = entry.slice(j);
                for (int k : reps) {
                    const auto sk = entry.slice(k);
                    if (std::equal(sj.begin(), sj.end(), sk.begin())) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) reps.push_back(j);
            }
            for (int j : reps)
                modulus = std::max(modulus, vmo_modulus(extract_slice(entry, j), r, radii));
        }
        report.vmo_radii.push_back(r);
        report.vmo_moduli.push_back(modulus);
    }
    return report;
}

StrongSolutionSample make_solution_sample(const SampledField& u) {
    if (!u.has_time())
        fail(ErrorKind::invalid_field, "solution sampling needs a space-time field");
    const GridSpec& g = u.grid;
    const TimeAxis& tm = *u.time;
    const int n = g.n;
    const std::int64_t cc = g.cell_count();
    const int steps = tm.steps;

    StrongSolutionSample s;
    s.u = u;
    s.support.assign(u.values.size(), 0);
    for (int t = 0; t < steps; ++t)
        for (std::int64_t c = 0; c < cc; ++c) {
            const std::size_t pos = std::size_t(t) * std::size_t(cc) + std::size_t(c);
            if (u.values[pos] == 0.0) continue;
            s.support[pos] = 1;
            if (t < 2 || t >= steps - 2)
                fail(ErrorKind::support_violation,
                     "support must keep two zero slices at each end of the time axis");
            const Index idx = g.decode(c);
            for (int a = 0; a < n; ++a)
                if (idx[a] < 2 || idx[a] >= g.cells - 2)
                    fail(ErrorKind::support_violation,
                         "support must stay two cells inside the spatial box");
        }

    // Zero extension beyond the box: exact, because the support margins above
    // guarantee every stencil that reaches outside reads only zeros.
    auto val = [&](int t, Index idx) -> double {
        if (t < 0 || t >= steps) return 0.0;
        for (int a = 0; a < n; ++a)
            if (idx[a] < 0 || idx[a] >= g.cells) return 0.0;
        return u.values[std::size_t(t) * std::size_t(cc) + std::size_t(g.encode(idx))];
    };

    for (int i = 0; i < n; ++i) s.gradient.push_back(SampledField::zeros(g, tm));
    for (int i = 0; i < n * n; ++i) s.hessian.push_back(SampledField::zeros(g, tm));
    s.u_t = SampledField::zeros(g, tm);

    const double inv2h = 1.0 / (2.0 * g.h);
    const double invh2 = 1.0 / (g.h * g.h);
    const double inv4h2 = 0.25 * invh2;
    const double inv2dt = 1.0 / (2.0 * tm.dt);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t sidx = 0; sidx < std::int64_t(steps) * cc; ++sidx) {
        const int t = int(sidx / cc);
        const std::int64_t c = sidx % cc;
        const Index idx = g.decode(c);
        const std::size_t pos = std::size_t(sidx);
        const double center = u.values[pos];
        for (int i = 0; i < n; ++i) {
            Index p = idx, m = idx;
            ++p[i];
            --m[i];
            s.gradient[std::size_t(i)].values[pos] = (val(t, p) - val(t, m)) * inv2h;
            s.hessian[std::size_t(i * n + i)].values[pos] =
                (val(t, p) - 2.0 * center + val(t, m)) * invh2;
            for (int j = i + 1; j < n; ++j) {
                Index pp = p, pm = p, mp = m, mm = m;
                ++pp[j];
                --pm[j];
                ++mp[j];
                --mm[j];
                s.hessian[std::size_t(i * n + j)].values[pos] =
                    (val(t, pp) - val(t, pm) - val(t, mp) + val(t, mm)) * inv4h2;
            }
        }
        s.u_t.values[pos] = (val(t + 1, idx) - val(t - 1, idx)) * inv2dt;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            s.hessian[std::size_t(i * n + j)].values = s.hessian[std::size_t(j * n + i)].values;
    return s;
}

std::vector<CorpusFunction> solution_family(const std::string& name, int count,
                                            std::uint64_t seed, int n, const Point& center,
                                            double r, double t_end) {
    const bool oscillating = name == "oscillating-bump";
    if (!oscillating && name != "separable-bump")
        fail(ErrorKind::invalid_corpus, "unknown solution family: " + name);
    if (count < 1) fail(ErrorKind::invalid_corpus, "family count must be at least 1");
    if (n < 1 || n > kMaxDim) fail(ErrorKind::invalid_domain, "dimension must be 1..3");
    if (!(r > 0.0)) fail(ErrorKind::invalid_radii, "support radius must be positive");
    if (!(t_end > 0.0)) fail(ErrorKind::invalid_domain, "time horizon must be positive");

    auto bell = [](double q) {
        const double w = 1.0 - q;
        return w > 0.0 ? w * w * w * w : 0.0;
    };

    std::vector<CorpusFunction> out;
    for (int k = 0; k < count; ++k) {
        std::mt19937_64 rng((fnv1a64(name) * 0x9E3779B97F4A7C15ULL) ^
                            (seed + 0x100003ULL * std::uint64_t(k)));
        const double amp = uniform(rng, 0.5, 2.0);
        const double rho = r * uniform(rng, 0.55, 0.85);
        const Point dir = unit_direction(rng, n);
        const double shift = (0.9 * r - rho) * u01(rng);
        Point c = center;
        for (int a = 0; a < n; ++a) c[a] += shift * dir[a];
        const double omega =
            oscillating ? uniform(rng, 1.0, 3.0) * 2.0 * std::numbers::pi / t_end : 0.0;

        CorpusFunction f;
        f.id = name + "-" + std::to_string(k);
        f.generator = name;
        f.eval = [amp, rho, c, omega, t_end, n, bell, oscillating](const Point& x, double t,
                                                                   double) {
            double d2 = 0.0;
            for (int a = 0; a < n; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
            const double sq = (t - 0.5 * t_end) / (0.25 * t_end);
            double v = amp * bell(d2 / (rho * rho)) * bell(sq * sq);
            if (oscillating) v *= std::cos(omega * (t - 0.5 * t_end));
            return v;
        };
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<std::string> solution_families() {
    return {"separable-bump", "oscillating-bump"};
}

SampledField apply_L(const CoefficientField& a, const StrongSolutionSample& u) {
    check_coefficient_shape(a);
    check_compatible(a.entries.front(), u.u);
    const int n = a.n;
    SampledField lu = u.u_t;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& av = a.at(i, j).values;
            const auto& hv = u.hessian[std::size_t(i * n + j)].values;
            for (std::size_t s = 0; s < lu.values.size(); ++s)
                lu.values[s] -= av[s] * hv[s];
        }
    return lu;
}

double default_prefactor_exponent(int n) { return 0.5 * (1.0 - n); }
double classical_prefactor_exponent(int n) { return -0.5 * n; }

FundamentalSolutionParams freeze_coefficients(const CoefficientField& a, const Index& cell,
                                              int t_slice, double prefactor_exponent) {
    check_coefficient_shape(a);
    const SampledField& ref = a.entries.front();
    if (!ref.grid.contains(cell))
        fail(ErrorKind::invalid_domain, "freeze point is outside the grid");
    if (t_slice < 0 || t_slice >= ref.slices())
        fail(ErrorKind::invalid_domain, "freeze slice is outside the time axis");
    if (!std::isfinite(prefactor_exponent))
        fail(ErrorKind::invalid_exponent, "prefactor exponent must be finite");

    const int n = a.n;
    FundamentalSolutionParams params;
    params.n = n;
    params.prefactor_exponent = prefactor_exponent;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            params.matrix[i][j] = ref.has_time() ? a.at(i, j).at(t_slice, cell)
                                                 : a.at(i, j).at(cell);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (params.matrix[i][j] != params.matrix[j][i])
                fail(ErrorKind::invalid_coefficients, "frozen matrix is not symmetric");
    if (!positive_definite(params.matrix, n))
        fail(ErrorKind::invalid_coefficients, "frozen matrix is not positive definite");
    params.det = det_n(params.matrix, n);
    params.inverse = inverse_n(params.matrix, n, params.det);
    params.normalizer = 1.0 / std::sqrt(params.det);
    return params;
}

double fundamental_solution(const FundamentalSolutionParams& params, const Point& zeta,
                            double tau) {
    check_params(params);
    GammaEval e;
    if (!gamma_eval(params, zeta, tau, e)) return 0.0;
    return e.gamma;
}

std::vector<double> gamma_first_derivatives(const FundamentalSolutionParams& params,
                                            const Point& zeta, double tau) {
    check_params(params);
    const int n = params.n;
    std::vector<double> g(std::size_t(n), 0.0);
    GammaEval e;
    if (!gamma_eval(params, zeta, tau, e)) return g;
    const double inv2t = 1.0 / (2.0 * tau);
    for (int j = 0; j < n; ++j) g[std::size_t(j)] = -e.az[j] * inv2t * e.gamma;
    return g;
}

std::vector<double> gamma_second_derivatives(const FundamentalSolutionParams& params,
                                             const Point& zeta, double tau) {
    check_params(params);
    const int n = params.n;
    std::vector<double> g(std::size_t(n) * std::size_t(n), 0.0);
    GammaEval e;
    if (!gamma_eval(params, zeta, tau, e)) return g;
    const double inv2t = 1.0 / (2.0 * tau);
    const double inv4t2 = inv2t * inv2t;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g[std::size_t(i * n + j)] =
                (e.az[i] * e.az[j] * inv4t2 - params.inverse[i][j] * inv2t) * e.gamma;
    return g;
}

std::vector<double> representation_jump(const FundamentalSolutionParams& params,
                                        int quadrature_order) {
    check_params(params);
    if (quadrature_order < 2)
        fail(ErrorKind::invalid_domain, "quadrature order must be at least 2");
    const int n = params.n;
    std::vector<double> J(std::size_t(n) * std::size_t(n), 0.0);
    for (const auto& [y, w] : sphere_nodes(n, quadrature_order)) {
        const double yt = y[kMaxDim];
        if (!(yt > 0.0)) continue;  // the kernel vanishes for tau <= 0
        Point yx{};
        for (int a = 0; a < n; ++a) yx[a] = y[a];
        GammaEval e;
        if (!gamma_eval(params, yx, yt, e)) continue;
        const double inv2t = 1.0 / (2.0 * yt);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                J[std::size_t(i * n + j)] += w * yx[i] * (-e.az[j] * inv2t * e.gamma);
    }
    return J;
}

RepresentationResult representation_rhs(const StrongSolutionSample& u,
                                        const CoefficientField& a, double eps,
                                        int quadrature_order, double prefactor_exponent) {
    check_coefficient_shape(a);
    check_compatible(a.entries.front(), u.u);
    if (!u.u.has_time())
        fail(ErrorKind::invalid_field, "representation needs a space-time sample");
    const GridSpec& g = u.u.grid;
    const TimeAxis& tm = *u.u.time;
    const int n = g.n;
    double expo = prefactor_exponent;
    if (std::isnan(expo)) expo = classical_prefactor_exponent(n);
    if (!std::isfinite(expo))
        fail(ErrorKind::invalid_exponent, "prefactor exponent must be finite");
    if (!(eps >= g.h))
        fail(ErrorKind::truncation_below_grid, "truncation radius is below the grid spacing");
    if (quadrature_order < 2)
        fail(ErrorKind::invalid_domain, "quadrature order must be at least 2");

    const SampledField lu = apply_L(a, u);
    const std::int64_t cc = g.cell_count();
    const int steps = tm.steps;
    const double vol = g.cell_volume() * tm.dt;

    bool constant = true;
    for (const auto& e : a.entries) {
        const double first = e.values.front();
        for (double v : e.values)
            if (v != first) {
                constant = false;
                break;
            }
        if (!constant) break;
    }

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
    const int np = int(pairs.size());

    std::vector<Index> cells(static_cast<std::size_t>(cc));
    for (std::int64_t c = 0; c < cc; ++c) cells[std::size_t(c)] = g.decode(c);

    RepresentationResult out;
    out.n = n;
    for (int i = 0; i < n * n; ++i) out.entries.push_back(SampledField::zeros(g, tm));

    FundamentalSolutionParams frozen;
    std::vector<double> jump;
    if (constant) {
        frozen = freeze_coefficients(a, cells[0], 0, expo);
        jump = representation_jump(frozen, quadrature_order);
    }

    // Offset tables for the constant-coefficient fast path: the kernel value
    // depends only on the cell offset and slice gap, truncation included.
    const int width = 2 * g.cells - 1;
    std::int64_t stride = 1;
    for (int i = 0; i < n; ++i) stride *= width;
    const std::int64_t table_size = std::int64_t(std::max(steps - 1, 0)) * stride;
    const bool tabulate = constant && table_size > 0 && table_size * np <= std::int64_t(8e7);

    std::vector<std::vector<double>> tables;
    if (tabulate) {
        tables.assign(std::size_t(np), std::vector<double>(std::size_t(table_size), 0.0));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t q = 0; q < table_size; ++q) {
            const int gap = 1 + int(q / stride);
            std::int64_t off = q % stride;
            Point dz{};
            for (int a2 = n - 1; a2 >= 0; --a2) {
                dz[a2] = double(int(off % width) - (g.cells - 1)) * g.h;
                off /= width;
            }
            const double tau = gap * tm.dt;
            if (!(parabolic_distance(dz, tau, n) > eps)) continue;
            GammaEval e;
            if (!gamma_eval(frozen, dz, tau, e)) continue;
            const double inv2t = 1.0 / (2.0 * tau);
            const double inv4t2 = inv2t * inv2t;
            for (int p = 0; p < np; ++p) {
                const auto [i, j] = pairs[std::size_t(p)];
                tables[std::size_t(p)][std::size_t(q)] =
                    (e.az[i] * e.az[j] * inv4t2 - frozen.inverse[i][j] * inv2t) * e.gamma;
            }
        }
    }

    std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t s = 0; s < std::int64_t(steps) * cc; ++s) {
        if (first_error) continue;
        try {
            const int tx = int(s / cc);
            const std::int64_t cx = s % cc;
            const Index ix = cells[std::size_t(cx)];

            FundamentalSolutionParams fz;
            const std::vector<double>* jp = nullptr;
            std::vector<double> jlocal;
            double ax[kMaxDim][kMaxDim] = {};
            if (constant) {
                fz = frozen;
                jp = &jump;
            } else {
                fz = freeze_coefficients(a, ix, tx, expo);
                jlocal = representation_jump(fz, quadrature_order);
                jp = &jlocal;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        ax[i][j] = a.at(i, j).values[std::size_t(s)];
            }

            std::array<double, 6> acc{};
            for (int ty = 0; ty < tx; ++ty) {
                const double tau = (tx - ty) * tm.dt;
                const std::size_t base = std::size_t(ty) * std::size_t(cc);
                if (tabulate) {
                    const std::int64_t row = std::int64_t(tx - ty - 1) * stride;
                    for (std::int64_t cy = 0; cy < cc; ++cy) {
                        const double lv = lu.values[base + std::size_t(cy)];
                        if (lv == 0.0) continue;
                        const Index iy = cells[std::size_t(cy)];
                        std::int64_t off = 0;
                        for (int a2 = 0; a2 < n; ++a2)
                            off = off * width + (ix[a2] - iy[a2] + g.cells - 1);
                        for (int p = 0; p < np; ++p)
                            acc[std::size_t(p)] +=
                                tables[std::size_t(p)][std::size_t(row + off)] * lv;
                    }
                } else {
                    for (std::int64_t cy = 0; cy < cc; ++cy) {
                        double bracket = lu.values[base + std::size_t(cy)];
                        if (!constant) {
                            for (int h2 = 0; h2 < n; ++h2)
                                for (int k2 = 0; k2 < n; ++k2) {
                                    const double diff =
                                        a.at(h2, k2).values[base + std::size_t(cy)] -
                                        ax[h2][k2];
                                    if (diff != 0.0)
                                        bracket +=
                                            diff *
                                            u.hessian[std::size_t(h2 * n + k2)]
                                                .values[base + std::size_t(cy)];
                                }
                        }
                        if (bracket == 0.0) continue;
                        const Index iy = cells[std::size_t(cy)];
                        Point dz{};
                        for (int a2 = 0; a2 < n; ++a2) dz[a2] = (ix[a2] - iy[a2]) * g.h;
                        if (!(parabolic_distance(dz, tau, n) > eps)) continue;
                        GammaEval e;
                        if (!gamma_eval(fz, dz, tau, e)) continue;
                        const double inv2t = 1.0 / (2.0 * tau);
                        const double inv4t2 = inv2t * inv2t;
                        for (int p = 0; p < np; ++p) {
                            const auto [i, j] = pairs[std::size_t(p)];
                            acc[std::size_t(p)] +=
                                (e.az[i] * e.az[j] * inv4t2 -
                                 fz.inverse[i][j] * inv2t) *
                                e.gamma * bracket;
                        }
                    }
                }
            }
            const double lx = lu.values[std::size_t(s)];
            for (int p = 0; p < np; ++p) {
                const auto [i, j] = pairs[std::size_t(p)];
                const double value =
                    acc[std::size_t(p)] * vol + lx * (*jp)[std::size_t(i * n + j)];
                out.entries[std::size_t(i * n + j)].values[std::size_t(s)] = value;
                out.entries[std::size_t(j * n + i)].values[std::size_t(s)] = value;
            }
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

AprioriReport apriori_check(
    const std::string& name,
    const std::function<std::vector<CorpusFunction>(double)>& family_for_radius,
    const std::function<CoefficientField(const GridSpec&, const TimeAxis&)>& coefficients,
    const VerifyDomain& dom, const VerifySchedule& sched, const MixedParams& params,
    const Point& center, const std::vector<double>& radii) {
    if (!family_for_radius) fail(ErrorKind::invalid_field, "solution family required");
    if (!coefficients) fail(ErrorKind::invalid_field, "coefficient generator required");
    if (radii.empty()) fail(ErrorKind::invalid_radii, "radius sweep is empty");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0))
            fail(ErrorKind::invalid_radii, "sweep radii must be positive");
        if (k > 0 && !(radii[k] < radii[k - 1]))
            fail(ErrorKind::invalid_radii, "sweep radii must decrease strictly");
    }
    if (sched.resolutions.empty())
        fail(ErrorKind::invalid_domain, "refinement schedule lists no resolutions");
    for (std::size_t k = 1; k < sched.resolutions.size(); ++k)
        if (sched.resolutions[k] <= sched.resolutions[k - 1])
            fail(ErrorKind::invalid_domain, "resolutions must be strictly increasing");
    if (sched.time_steps.size() != sched.resolutions.size())
        fail(ErrorKind::invalid_domain,
             "space-time runs need one time-step count per resolution");
    if (!(sched.drift_factor >= 1.0))
        fail(ErrorKind::invalid_domain, "drift factor must be at least 1");

    AprioriReport report;
    report.hessian.name = name + "-d2";
    report.time_derivative.name = name + "-dt";
    report.hessian.drift_factor = sched.drift_factor;
    report.time_derivative.drift_factor = sched.drift_factor;

    const int n = dom.n;
    const int npairs = n * (n + 1) / 2;

    for (std::size_t k = 0; k < sched.resolutions.size(); ++k) {
        const int res = sched.resolutions[k];
        const GridSpec grid = build_grid(n, dom.lo, dom.hi, res);
        const TimeAxis time = build_time_axis(dom.t_end, sched.time_steps[k]);

        const CoefficientField a = coefficients(grid, time);
        const CoefficientReport creport = validate_coefficients(a, {}, 4, 0);
        if (!creport.elliptic)
            fail(ErrorKind::invalid_coefficients,
                 "coefficients violate their claimed ellipticity constant");

        struct Item {
            double r;
            CorpusFunction f;
        };
        std::vector<Item> items;
        for (double r : radii) {
            auto family = family_for_radius(r);
            if (family.empty())
                fail(ErrorKind::invalid_corpus, "solution family produced no functions");
            for (auto& f : family) items.push_back({r, std::move(f)});
        }

        const RadiusSet sradii = dyadic_radii(grid);
        const RadiusSet tradii = dyadic_radii(time);

        std::vector<RatioRow> hrows(items.size() * std::size_t(npairs));
        std::vector<RatioRow> trows(items.size());
        std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::int64_t it = 0; it < std::int64_t(items.size()); ++it) {
            if (first_error) continue;
            try {
                const Item& item = items[std::size_t(it)];
                const SampledField uf = sample_spacetime(item.f, grid, time);
                const StrongSolutionSample sample = make_solution_sample(uf);
                // the support must also stay inside the prescribed ball
                const double r2 = item.r * item.r;
                for (int t = 0; t < time.steps; ++t)
                    for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
                        if (uf.values[std::size_t(t) * std::size_t(grid.cell_count()) +
                                      std::size_t(c)] == 0.0)
                            continue;
                        const Point x = grid.center(c);
                        double d2 = 0.0;
                        for (int a2 = 0; a2 < n; ++a2)
                            d2 += (x[a2] - center[a2]) * (x[a2] - center[a2]);
                        if (!(d2 < r2))
                            fail(ErrorKind::support_violation,
                                 "function support leaves the prescribed ball");
                    }

                const SampledField lu = apply_L(a, sample);
                const double rhs = mixed_morrey_norm(lu, params, sradii, tradii).value;
                const std::string suffix = ":r=" + format_number(item.r);
                int p = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        const double lhs =
                            mixed_morrey_norm(sample.d2(i, j), params, sradii, tradii)
                                .value;
                        hrows[std::size_t(it) * std::size_t(npairs) + std::size_t(p)] =
                            make_ratio_row(item.f.id + ":D" + std::to_string(i + 1) +
                                               std::to_string(j + 1) + suffix,
                                           res, lhs, rhs);
                        ++p;
                    }
                const double lhs_t =
                    mixed_morrey_norm(sample.u_t, params, sradii, tradii).value;
                trows[std::size_t(it)] =
                    make_ratio_row(item.f.id + ":Dt" + suffix, res, lhs_t, rhs);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);

        report.hessian.history.push_back(
            HistoryEntry{res, int(items.size()), max_nondegenerate_ratio(hrows)});
        report.time_derivative.history.push_back(
            HistoryEntry{res, int(items.size()), max_nondegenerate_ratio(trows)});
        report.hessian.rows.insert(report.hessian.rows.end(), hrows.begin(), hrows.end());
        report.time_derivative.rows.insert(report.time_derivative.rows.end(), trows.begin(),
                                           trows.end());
    }

    report.hessian.max_ratio = report.hessian.history.back().max_ratio;
    report.time_derivative.max_ratio = report.time_derivative.history.back().max_ratio;
    report.hessian.pass = drift_ok(report.hessian.history, sched.drift_factor);
    report.time_derivative.pass =
        drift_ok(report.time_derivative.history, sched.drift_factor);
    return report;
}

}  // namespace mml
