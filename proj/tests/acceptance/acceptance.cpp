// Acceptance gate for the numerical laboratory. Each criterion is a
// self-contained check with every threshold pinned in code; the binary prints
// one [PASS]/[FAIL] line per criterion plus a detail line, and exits nonzero
// when anything fails.
//
// Usage: acceptance [--only N ...] [--cli <path-to-runner>] [--list]

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mml/corpus.hpp"
#include "mml/error.hpp"
#include "mml/exponents.hpp"
#include "mml/format.hpp"
#include "mml/grid.hpp"
#include "mml/kernels.hpp"
#include "mml/maximal.hpp"
#include "mml/norms.hpp"
#include "mml/parabolic.hpp"
#include "mml/params.hpp"
#include "mml/riesz.hpp"
#include "mml/singular.hpp"
#include "mml/verify.hpp"

namespace {

using namespace mml;

// ---------------------------------------------------------------------------
// Reporting plumbing

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& label) {
        if (!cond) {
            ok = false;
            note("FAILED: " + label);
        }
    }
    void note(const std::string& line) {
        if (!detail.empty()) detail += "; ";
        detail += line;
    }
};

std::string runner_binary = MORREYLAB_BIN;  // overridable with --cli
const std::string config_dir = MML_CONFIG_DIR;

double rel_gap(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---------------------------------------------------------------------------
// Criterion 1 — norm oracle equivalence.
//
// Independent exhaustive evaluation of both norms straight from their
// definitions: every cell center, every radius, direct membership scans,
// no prefix sums, no masks.

double oracle_spatial_sup(const SampledField& f, double p, double lambda,
                          const RadiusSet& radii, std::span<const double> slice) {
    const GridSpec& g = f.grid;
    const std::int64_t count = g.cell_count();
    double best = 0.0;
    for (std::int64_t c = 0; c < count; ++c) {
        const Index ic = g.decode(c);
        for (std::size_t r = 0; r < radii.size(); ++r) {
            const double rr = radii[r] / g.h;
            const double rr2 = rr * rr;
            double integral = 0.0;
            for (std::int64_t y = 0; y < count; ++y) {
                const Index iy = g.decode(y);
                double d2 = 0.0;
                for (int a = 0; a < g.n; ++a) {
                    const double d = iy[std::size_t(a)] - ic[std::size_t(a)];
                    d2 += d * d;
                }
                if (d2 < rr2) integral += std::pow(std::abs(slice[std::size_t(y)]), p);
            }
            integral *= g.cell_volume();
            best = std::max(best, std::pow(radii[r], -lambda) * integral);
        }
    }
    return best;
}

double oracle_morrey(const SampledField& f, const MorreyParams& params,
                     const RadiusSet& radii) {
    return std::pow(
        oracle_spatial_sup(f, params.p, params.lambda, radii,
                           std::span<const double>(f.values.data(), f.values.size())),
        1.0 / params.p);
}

double oracle_mixed(const SampledField& f, const MixedParams& params,
                    const RadiusSet& space_radii, const RadiusSet& time_radii) {
    const TimeAxis& time = *f.time;
    const int m = time.steps;
    std::vector<double> w(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double s = oracle_spatial_sup(f, params.space.p, params.space.lambda,
                                            space_radii, f.slice(j));
        w[std::size_t(j)] = std::pow(s, params.q / params.space.p);
    }
    double best = 0.0;
    for (int t0 = 0; t0 < m; ++t0) {
        for (std::size_t r = 0; r < time_radii.size(); ++r) {
            const double rr = time_radii[r] / time.dt;
            double integral = 0.0;
            for (int j = 0; j < m; ++j) {
                const double d = j - t0;
                if (d * d < rr * rr) integral += w[std::size_t(j)];
            }
            integral *= time.dt;
            best = std::max(best, std::pow(time_radii[r], -params.mu) * integral);
        }
    }
    return std::pow(best, 1.0 / params.q);
}

Outcome criterion_norm_oracle() {
    Outcome out;
    double worst = 0.0;
    for (int n = 1; n <= 2; ++n) {
        const GridSpec grid = build_grid(n, make_point(-1, -1), make_point(1, 1), 8);
        const TimeAxis time = build_time_axis(1.0, 8);
        const auto corpus = build_corpus(CorpusSpec::standard(101), grid);
        out.require(corpus.size() == 20, "standard corpus has 20 functions");

        const MorreyParams spatial[] = {MorreyParams::strict(2.0, 0.5 * n, n),
                                        MorreyParams::strict(3.0, 0.25 * n, n)};
        const MixedParams mixed[] = {MixedParams::strict(2.0, 0.5, spatial[0]),
                                     MixedParams::strict(3.0, 0.25, spatial[1])};
        const RadiusSet sr = dyadic_radii(grid);
        const RadiusSet tr = dyadic_radii(time);

        for (const auto& fn : corpus) {
            const SampledField fs = sample_spatial(fn, grid);
            const SampledField ft = sample_spacetime(fn, grid, time);
            for (const auto& mp : spatial) {
                const double lib = morrey_norm(fs, mp, sr).value;
                const double ora = oracle_morrey(fs, mp, sr);
                worst = std::max(worst, rel_gap(lib, ora));
            }
            for (const auto& xp : mixed) {
                const double lib = mixed_morrey_norm(ft, xp, sr, tr).value;
                const double ora = oracle_mixed(ft, xp, sr, tr);
                worst = std::max(worst, rel_gap(lib, ora));
            }
        }
    }
    out.require(worst <= 1e-10, "library and oracle agree to 1e-10");
    out.note("max relative gap " + format_number(worst) +
             " over 20 functions x {1,2}-d x 2 exponent tuples per norm");
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 2 — spatial embedding ratio protocol.

Outcome criterion_spatial_embedding() {
    Outcome out;
    const int n = 2;
    const double p = 3.0, lambda = 0.5, mu = 1.0;
    const double q = spatial_embedding_exponent(n, p, lambda, mu);
    out.require(rel_gap(q, 2.0) <= 1e-14, "derived exponent q = 2");

    const VerifyDomain dom{n, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {64, 128};
    sched.drift_factor = 1.25;
    const RatioReport report = verify_embedding(
        "spatial-embedding", CorpusSpec::standard(202), dom, sched,
        MorreyParams::strict(p, lambda, n), MorreyParams::strict(q, mu, n));

    out.require(std::isfinite(report.max_ratio), "max ratio is finite");
    out.require(report.pass, "drift below 1.25 from 64^2 to 128^2");
    out.note("max ratio " + format_number(report.history.front().max_ratio) + " -> " +
             format_number(report.history.back().max_ratio));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 3 — temporal and composite mixed embeddings.

Outcome criterion_mixed_embeddings() {
    Outcome out;
    const int n = 2;
    const double p = 3.0, lambda = 0.5, mu_sp = 1.0;
    const double q1 = 2.0, mu1 = 0.25, mu2 = 0.5;

    const double qt = temporal_embedding_exponent(q1, mu1, mu2);
    out.require(rel_gap(qt, 4.0 / 3.0) <= 1e-14, "derived temporal exponent q = 4/3");
    const MixedEmbeddingExponents comp =
        mixed_embedding_exponents(n, p, lambda, mu_sp, q1, mu1, mu2);
    out.require(rel_gap(comp.q, 2.0) <= 1e-14 && rel_gap(comp.q2, 4.0 / 3.0) <= 1e-14,
                "derived composite exponents (2, 4/3)");

    const VerifyDomain dom{n, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {64, 128};
    sched.time_steps = {64, 128};
    sched.drift_factor = 1.25;

    const MorreyParams inner = MorreyParams::strict(p, lambda, n);
    const MixedParams source = MixedParams::strict(q1, mu1, inner);

    const RatioReport temporal = verify_embedding(
        "temporal-embedding", CorpusSpec::standard(303), dom, sched, source,
        MixedParams::strict(qt, mu2, inner));
    out.require(temporal.pass && std::isfinite(temporal.max_ratio),
                "temporal embedding drift below 1.25");
    out.note("temporal max ratio " + format_number(temporal.max_ratio));

    const RatioReport composite = verify_embedding(
        "composite-embedding", CorpusSpec::standard(303), dom, sched, source,
        MixedParams::strict(comp.q2, mu2, MorreyParams::strict(comp.q, mu_sp, n)));
    out.require(composite.pass && std::isfinite(composite.max_ratio),
                "composite embedding drift below 1.25");
    out.note("composite max ratio " + format_number(composite.max_ratio));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 4 — maximal-operator bound and the 1-d closed form.

Outcome criterion_maximal() {
    Outcome out;
    const VerifyDomain dom{2, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {64, 128};
    sched.time_steps = {32, 64};
    sched.drift_factor = 1.25;
    const MixedParams params = MixedParams::strict(2.0, 0.5, MorreyParams::strict(2.0, 0.5, 2));
    OperatorBinding op;
    op.name = "hl-maximal";
    const RatioReport report = verify_operator_bound("maximal-bound", CorpusSpec::standard(404),
                                                     dom, sched, op, params, params);
    out.require(report.pass && std::isfinite(report.max_ratio),
                "maximal ratio finite with drift below 1.25");
    out.note("max ratio " + format_number(report.max_ratio));

    // 1-d closed form: the maximal function of the indicator of [-1,1],
    // evaluated at 3, equals 1/4 (attained by the ball of radius 4).
    const GridSpec grid = build_grid(1, make_point(-8), make_point(8), 4096);
    out.require(rel_gap(grid.h, 1.0 / 256.0) <= 1e-15, "1-d spacing is 1/256");
    SampledField chi = SampledField::sample(
        grid, [](const Point& x) { return std::abs(x[0]) <= 1.0 ? 1.0 : 0.0; });
    const SampledField m = hl_maximal(chi, dyadic_radii(grid));
    const std::int64_t at3 =
        static_cast<std::int64_t>(std::llround((3.0 - (-8.0)) / grid.h - 0.5));
    const double value = m.values[static_cast<std::size_t>(at3)];
    out.require(std::abs(value - 0.25) <= 0.02 * 0.25, "M chi(3) = 1/4 within 2%");
    out.note("M chi(3) = " + format_number(value));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 5 — Riesz potential bound and dilation covariance.

Outcome criterion_riesz() {
    Outcome out;
    const int n = 2;
    const double p = 2.0, alpha = 0.5, lambda = 0.4;
    const double q = riesz_morrey_exponent(n, p, lambda, alpha);
    out.require(rel_gap(q, 16.0 / 3.0) <= 1e-13, "derived exponent q = 16/3");

    const VerifyDomain dom{n, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {32, 64};
    sched.time_steps = {8, 16};
    sched.drift_factor = 1.25;
    OperatorBinding op;
    op.name = "riesz";
    op.alpha = alpha;
    const MixedParams source = MixedParams::strict(2.0, 0.5, MorreyParams::strict(p, lambda, n));
    const MixedParams target = MixedParams::strict(2.0, 0.5, MorreyParams::strict(q, lambda, n));
    const RatioReport report = verify_operator_bound("riesz-bound", CorpusSpec::standard(505),
                                                     dom, sched, op, source, target);
    out.require(report.pass && std::isfinite(report.max_ratio),
                "riesz ratio finite with drift below 1.25");
    out.note("max ratio " + format_number(report.max_ratio));

    // Dilation covariance I_a f_s(x) = s^-a (I_a f)(s x) with s = 2: the
    // dilated grid's centers are exactly twice the fine grid's centers, so
    // both sides live on the same index set.
    const int cells = 128;
    const GridSpec fine = build_grid(n, make_point(-1, -1), make_point(1, 1), cells);
    const GridSpec wide = build_grid(n, make_point(-2, -2), make_point(2, 2), cells);
    out.require(rel_gap(fine.h, 1.0 / 64.0) <= 1e-15, "fine spacing is 1/64");
    auto bump = [](const Point& x) {
        const double u2 = (x[0] * x[0] + x[1] * x[1]) / 0.25;
        return u2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u2)) : 0.0;
    };
    const SampledField fs = SampledField::sample(
        fine, [&](const Point& x) { return bump(Point{2 * x[0], 2 * x[1], 0.0}); });
    const SampledField f = SampledField::sample(wide, bump);
    const SampledField lhs = riesz_potential(fs, alpha);
    const SampledField rhs = riesz_potential(f, alpha);
    double peak = 0.0;
    for (double v : rhs.values) peak = std::max(peak, std::abs(v));
    double worst = 0.0;
    const double scale = std::pow(2.0, -alpha);
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        if (std::abs(rhs.values[i]) < 0.1 * peak) continue;
        worst = std::max(worst,
                         std::abs(lhs.values[i] - scale * rhs.values[i]) /
                             (scale * std::abs(rhs.values[i])));
    }
    out.require(worst <= 0.02, "dilation covariance within 2%");
    out.note("max covariance defect " + format_number(worst));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 6 — sharp-maximal comparison and the constant sanity leg.

Outcome criterion_sharp_vs_maximal() {
    Outcome out;
    const VerifyDomain dom{2, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {64, 128};
    sched.time_steps = {32, 64};
    sched.drift_factor = 1.25;
    const MixedParams params = MixedParams::strict(2.0, 0.5, MorreyParams::strict(2.0, 0.5, 2));
    OperatorBinding op;
    op.name = "sharp-vs-maximal";
    const RatioReport report = verify_operator_bound(
        "sharp-vs-maximal", CorpusSpec::standard(606), dom, sched, op, params, params);
    out.require(report.pass && std::isfinite(report.max_ratio),
                "sharp comparison finite with drift below 1.25");
    out.note("max ratio " + format_number(report.max_ratio));

    // Constants have zero sharp function, so their rows must come back
    // degenerate. The zero constant has both sides exactly zero; a nonzero
    // constant keeps a positive maximal side and is logged as a zero
    // denominator.
    std::vector<CorpusFunction> constants(2);
    constants[0] = {"constant-0", "constant", [](const Point&, double, double) { return 0.0; }};
    constants[1] = {"constant-1", "constant", [](const Point&, double, double) { return 1.0; }};
    VerifySchedule small;
    small.resolutions = {32};
    small.time_steps = {8};
    const RatioReport sanity =
        verify_operator_bound("sharp-constants", constants, dom, small, op, params, params);
    out.require(sanity.rows.size() == 2, "one row per constant");
    for (const RatioRow& row : sanity.rows) {
        out.require(row.degenerate, row.function_id + " row logged degenerate");
        out.require(row.rhs == 0.0, row.function_id + " sharp side exactly zero");
        if (row.function_id == "constant-0")
            out.require(row.lhs == 0.0 && row.ratio == 0.0,
                        "zero constant: both sides exactly zero");
    }
    out.note("constant rows degenerate (notes: " + sanity.rows[0].note + " / " +
             sanity.rows[1].note + ")");
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 7 — fractional maximal bound and the exponent identity.

Outcome criterion_fractional_maximal() {
    Outcome out;
    const int n = 2;
    const double p = 2.0, lambda = 0.4, eta = 0.2;
    const FractionalMaximalExponents fm = fractional_maximal_exponents(n, p, lambda, eta);
    out.require(rel_gap(fm.q, 4.0) <= 1e-13 && rel_gap(fm.epsilon, 0.5) <= 1e-13,
                "derived exponents (q, epsilon) = (4, 1/2)");

    const VerifyDomain dom{n, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {64, 128};
    sched.time_steps = {32, 64};
    sched.drift_factor = 1.25;
    OperatorBinding op;
    op.name = "fractional-maximal";
    op.eta = eta;
    op.oscillation = true;
    const MixedParams source =
        MixedParams::strict(2.0, 0.5, MorreyParams::strict(p, lambda, n));
    const MixedParams target =
        MixedParams::strict(2.0, 0.5, MorreyParams::strict(fm.q, lambda, n));
    const RatioReport report = verify_operator_bound(
        "fractional-maximal", CorpusSpec::standard(707), dom, sched, op, source, target);
    out.require(report.pass && std::isfinite(report.max_ratio),
                "fractional maximal finite with drift below 1.25");
    out.note("max ratio " + format_number(report.max_ratio));

    // p / epsilon = q for 100 random admissible tuples.
    std::mt19937_64 rng(7007);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int nn = 1 + static_cast<int>(rng() % 3);
        const double pp = uniform(1.1, 6.0);
        const double ll = uniform(0.05, 0.95) * nn;
        const double cap = (1.0 - ll / nn) / pp;
        const double ee = uniform(0.05, 0.95) * cap;
        const FractionalMaximalExponents e = fractional_maximal_exponents(nn, pp, ll, ee);
        worst = std::max(worst, std::abs(pp / e.epsilon - e.q) / e.q);
    }
    out.require(worst <= 1e-12, "p/epsilon = q to 1e-12 over 100 random tuples");
    out.note("max identity defect " + format_number(worst));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 8 — singular integrals and commutators.

Outcome criterion_singular() {
    Outcome out;
    const VerifyDomain dom{2, make_point(-1, -1), make_point(1, 1), 1.0};
    const MixedParams params = MixedParams::strict(2.0, 0.5, MorreyParams::strict(2.0, 0.5, 2));

    // (a) truncation ratio protocol with a Riesz-transform-style kernel.
    VerifySchedule sched;
    sched.resolutions = {32, 64};
    sched.time_steps = {8, 16};
    sched.drift_factor = 1.25;
    OperatorBinding op;
    op.name = "singular-integral";
    op.kernel = "riesz-x";
    const RatioReport report = verify_operator_bound("singular-bound", CorpusSpec::standard(808),
                                                     dom, sched, op, params, params);
    out.require(report.pass && std::isfinite(report.max_ratio),
                "singular-integral drift below 1.25");
    out.note("max ratio " + format_number(report.max_ratio));

    // (b) the commutator against a constant coefficient vanishes identically.
    {
        const GridSpec grid = build_grid(2, make_point(-1, -1), make_point(1, 1), 48);
        const auto corpus = build_corpus(CorpusSpec::standard(809), grid);
        const SampledField f = sample_spatial(corpus.front(), grid);
        const SampledField a = SampledField::sample(grid, [](const Point&) { return 3.5; });
        const SampledField c = commutator(a, f, find_kernel("riesz-x"), 4.0 * grid.h);
        double peak = 0.0;
        for (double v : c.values) peak = std::max(peak, std::abs(v));
        out.require(peak <= 1e-12, "constant-coefficient commutator is 0 to 1e-12");
        out.note("constant commutator max |value| = " + format_number(peak));
    }

    // (c) shrinking-ball trend for a mollified-jump coefficient.
    {
        const VerifyDomain line{1, make_point(-1), make_point(1), 1.0};
        OperatorBinding cop;
        cop.name = "commutator";
        cop.kernel = "hilbert";
        cop.symbol = [](const Point& x, double) { return std::tanh(x[0] / 0.25); };
        CorpusSpec spec;
        spec.generators = {{"bump", 4}, {"trig", 2}};
        spec.seed = 810;
        const MixedParams line_params =
            MixedParams::strict(2.0, 0.5, MorreyParams::strict(2.0, 0.4, 1));
        const std::vector<double> radii = {0.5, 0.25, 0.125, 0.0625};
        const GridSpec line_grid = build_grid(1, line.lo, line.hi, 256);
        const CommutatorTrend trend =
            commutator_vmo_trend("vmo-trend", build_corpus(spec, line_grid), line, 256, 8,
                                 cop, line_params, make_point(0.0), radii);
        out.require(trend.max_ratios.size() == 4, "four radii in the sweep");
        out.require(trend.nonincreasing(1.1), "ratio column nonincreasing within 10%");
        std::string column;
        for (double r : trend.max_ratios) column += format_number(r) + " ";
        out.note("trend column " + column);
    }

    // (d) truncation limit: distances decrease monotonically for a smooth
    // input over a dyadic schedule.
    {
        const GridSpec grid = build_grid(2, make_point(-1, -1), make_point(1, 1), 64);
        const TimeAxis time = build_time_axis(1.0, 8);
        CorpusSpec spec;
        spec.generators = {{"bump", 1}};
        spec.seed = 811;
        const auto corpus = build_corpus(spec, grid);
        const SampledField f = sample_spacetime(corpus.front(), grid, time);
        const KernelDescriptor& kernel = find_kernel("riesz-x");
        const ConvergenceReport conv =
            epsilon_limit([&](double e) { return truncated_singular_integral(f, kernel, e); },
                          EpsilonSchedule::geometric(0.25, 0.5, 4), params,
                          dyadic_radii(grid), dyadic_radii(time), 1.0)
                .second;
        bool monotone = conv.distances.size() == 3;
        for (std::size_t i = 1; i < conv.distances.size(); ++i)
            monotone = monotone && conv.distances[i] < conv.distances[i - 1];
        out.require(monotone, "3 consecutive distances strictly decrease");
        out.require(conv.converged, "limit report converged");
        std::string d;
        for (double v : conv.distances) d += format_number(v) + " ";
        out.note("distances " + d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 9 — kernel axioms at quadrature order 64.

Outcome criterion_kernel_axioms() {
    Outcome out;
    for (const char* name : {"hilbert", "riesz-x", "riesz-y", "heat-xy", "modulated-riesz-x"}) {
        const KernelValidation v = kernel_validate(find_kernel(name), 64);
        out.require(v.zero_mean(1e-8), std::string(name) + " zero-mean defect below 1e-8");
        out.require(v.homogeneous(1e-10), std::string(name) + " homogeneity defect below 1e-10");
        out.require(v.within_smoothness, std::string(name) + " within its smoothness bound");
    }
    const KernelValidation rx = kernel_validate(find_kernel("riesz-x"), 64);
    const KernelValidation hx = kernel_validate(find_kernel("heat-xy"), 64);
    out.note("riesz-x mean " + format_number(rx.mean_integral) + ", heat-xy mean " +
             format_number(hx.mean_integral) + ", homogeneity defects " +
             format_number(rx.homogeneity_defect) + " / " +
             format_number(hx.homogeneity_defect));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 10 — parabolic metric identities and homogeneity.

Outcome criterion_parabolic_metric() {
    Outcome out;
    std::mt19937_64 rng(1010);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };

    double worst_axis = 0.0;
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Point x{};
        double norm2 = 0.0;
        for (int a = 0; a < n; ++a) {
            x[std::size_t(a)] = uniform(-3.0, 3.0);
            norm2 += x[std::size_t(a)] * x[std::size_t(a)];
        }
        worst_axis = std::max(
            worst_axis, rel_gap(parabolic_distance(x, 0.0, n), std::sqrt(norm2)));
        const double t = uniform(-4.0, 4.0);
        worst_axis = std::max(
            worst_axis,
            rel_gap(parabolic_distance(Point{}, t, n), std::sqrt(std::abs(t))));
    }
    out.require(worst_axis <= 1e-12, "axis identities |x| and sqrt|t| to 1e-12");

    double worst_hom = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Point x{};
        for (int a = 0; a < n; ++a) x[std::size_t(a)] = uniform(-2.0, 2.0);
        const double t = uniform(-3.0, 3.0);
        const double s = uniform(0.1, 10.0);
        Point sx{};
        for (int a = 0; a < n; ++a) sx[std::size_t(a)] = s * x[std::size_t(a)];
        const double lhs = parabolic_distance(sx, s * s * t, n);
        const double rhs = s * parabolic_distance(x, t, n);
        worst_hom = std::max(worst_hom, std::abs(lhs - rhs) / std::max(1e-300, rhs));
    }
    out.require(worst_hom <= 1e-13, "homogeneity to rounding over 1000 random points");
    out.note("axis defect " + format_number(worst_axis) + ", homogeneity defect " +
             format_number(worst_hom));
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 11 — parabolic a-priori protocol, pointwise identity, and the
// constant-coefficient representation formula.

Outcome criterion_parabolic_apriori() {
    Outcome out;
    const int n = 2;
    const VerifyDomain dom{n, make_point(-1, -1), make_point(1, 1), 1.0};
    VerifySchedule sched;
    sched.resolutions = {64, 128};
    sched.time_steps = {64, 128};
    sched.drift_factor = 1.25;
    const MixedParams params = MixedParams::strict(2.0, 0.5, MorreyParams::strict(2.0, 0.3, 2));
    const Point center = make_point(0.0, 0.0);
    const std::vector<double> radii = {0.5, 0.25};

    for (const char* family : {"identity", "smooth-perturbation"}) {
        const AprioriReport report = apriori_check(
            std::string("apriori-") + family,
            [&](double r) {
                return solution_family("separable-bump", 10, 1101, n, center, r, dom.t_end);
            },
            [&](const GridSpec& grid, const TimeAxis& time) {
                return coefficient_family(family, grid, time);
            },
            dom, sched, params, center, radii);
        for (const RatioReport* rep : {&report.hessian, &report.time_derivative}) {
            out.require(rep->pass && std::isfinite(rep->max_ratio),
                        rep->name + " finite with drift below 1.25");
            int bad = 0;
            for (const RatioRow& row : rep->rows)
                if (row.degenerate || !std::isfinite(row.ratio)) ++bad;
            out.require(bad == 0, rep->name + ": " + std::to_string(bad) +
                                      " degenerate/nonfinite row(s)");
        }
        out.note(std::string(family) + ": hessian " + format_number(report.hessian.max_ratio) +
                 ", dt " + format_number(report.time_derivative.max_ratio));
    }

    // Pointwise identity u_t = Lu + sum a_ij D_ij u, exact to rounding.
    {
        const GridSpec grid = build_grid(n, dom.lo, dom.hi, 64);
        const TimeAxis time = build_time_axis(dom.t_end, 64);
        const CoefficientField a = coefficient_family("smooth-perturbation", grid, time);
        const auto family = solution_family("separable-bump", 1, 1102, n, center, 0.5, 1.0);
        const StrongSolutionSample u =
            make_solution_sample(sample_spacetime(family.front(), grid, time));
        const SampledField lu = apply_L(a, u);
        double scale = 0.0;
        for (double v : u.u_t.values) scale = std::max(scale, std::abs(v));
        double defect = 0.0;
        for (std::size_t i = 0; i < lu.values.size(); ++i) {
            double sum = lu.values[i];
            for (int ii = 0; ii < n; ++ii)
                for (int jj = 0; jj < n; ++jj)
                    sum += a.at(ii, jj).values[i] * u.d2(ii, jj).values[i];
            defect = std::max(defect, std::abs(u.u_t.values[i] - sum));
        }
        out.require(defect <= 1e-12 * std::max(1.0, scale),
                    "pointwise identity exact to rounding");
        out.note("identity defect " + format_number(defect));
    }

    // Constant-coefficient representation formula: distances to the centered
    // finite-difference Hessian decrease monotonically over a 3-term
    // truncation schedule (classical prefactor convention; the grid keeps
    // dt = h^2 so each truncation shell is resolved in time).
    {
        const GridSpec grid = build_grid(n, dom.lo, dom.hi, 20);
        const TimeAxis time = build_time_axis(dom.t_end, 100);
        const CoefficientField a = coefficient_family("identity", grid, time);
        const auto family = solution_family("separable-bump", 1, 1103, n, center, 0.55, 1.0);
        const StrongSolutionSample u =
            make_solution_sample(sample_spacetime(family.front(), grid, time));
        const std::vector<double> epses = {4.0 * grid.h, 3.0 * grid.h, 2.0 * grid.h};
        std::vector<double> dist;
        for (double eps : epses) {
            const RepresentationResult rep = representation_rhs(u, a, eps, 16);
            double num = 0.0, den = 0.0;
            for (int ii = 0; ii < n; ++ii)
                for (int jj = 0; jj < n; ++jj) {
                    const auto& got = rep.at(ii, jj).values;
                    const auto& want = u.d2(ii, jj).values;
                    for (std::size_t k = 0; k < got.size(); ++k) {
                        num += (got[k] - want[k]) * (got[k] - want[k]);
                        den += want[k] * want[k];
                    }
                }
            dist.push_back(std::sqrt(num / den));
        }
        bool monotone = true;
        for (std::size_t i = 1; i < dist.size(); ++i)
            monotone = monotone && dist[i] < dist[i - 1];
        out.require(monotone, "representation distances decrease over the schedule");
        out.note("representation distances " + format_number(dist[0]) + " " +
                 format_number(dist[1]) + " " + format_number(dist[2]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 12 — determinism of the runner's CSV output.

Outcome criterion_determinism() {
    Outcome out;
    namespace fs = std::filesystem;

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    auto run = [&](const std::string& command, const std::string& config,
                   const fs::path& dir) {
        const std::string cmd = runner_binary + " " + command + " --config " + config_dir +
                                "/" + config + " --out " + dir.string() + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };

    const std::vector<std::pair<std::string, std::string>> runs = {
        {"norms", "norms.cfg"},
        {"verify-embedding", "embedding-spatial.cfg"},
        {"verify-embedding", "embedding-mixed.cfg"},
        {"verify-operator", "operator-maximal.cfg"},
        {"epsilon-limit", "epsilon-limit.cfg"},
        {"pde-check", "pde-check.cfg"},
        {"kernel-validate", "kernel-validate.cfg"},
    };

    const fs::path a = fs::temp_directory_path() / "mml-acceptance-det-a";
    const fs::path b = fs::temp_directory_path() / "mml-acceptance-det-b";
    fs::remove_all(a);
    fs::remove_all(b);
    int compared = 0;
    for (const auto& [command, config] : runs) {
        out.require(run(command, config, a) == 0, command + " (" + config + ") exits 0");
        out.require(run(command, config, b) == 0, command + " re-run exits 0");
    }
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        const fs::path other = b / entry.path().filename();
        out.require(fs::exists(other), entry.path().filename().string() + " in both runs");
        if (fs::exists(other)) {
            out.require(slurp(entry.path()) == slurp(other),
                        entry.path().filename().string() + " byte-identical");
            ++compared;
        }
    }
    out.require(compared >= 8, "every command contributed CSV files");
    out.note(std::to_string(compared) + " CSV files byte-identical across re-runs");
    fs::remove_all(a);
    fs::remove_all(b);
    return out;
}

// ---------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "norm oracle equivalence", criterion_norm_oracle},
    {2, "spatial embedding ratio protocol", criterion_spatial_embedding},
    {3, "temporal and composite mixed embeddings", criterion_mixed_embeddings},
    {4, "maximal bound and 1-d closed form", criterion_maximal},
    {5, "Riesz potential bound and dilation covariance", criterion_riesz},
    {6, "sharp-maximal comparison with constant sanity leg", criterion_sharp_vs_maximal},
    {7, "fractional maximal bound and exponent identity", criterion_fractional_maximal},
    {8, "singular integrals and commutators", criterion_singular},
    {9, "kernel axioms", criterion_kernel_axioms},
    {10, "parabolic metric", criterion_parabolic_metric},
    {11, "parabolic a-priori protocol", criterion_parabolic_apriori},
    {12, "runner determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only.push_back(std::atoi(argv[++i]));
        } else if (arg == "--cli" && i + 1 < argc) {
            runner_binary = argv[++i];
        } else if (arg == "--list") {
            for (const Criterion& c : kCriteria) std::printf("%2d  %s\n", c.id, c.title);
            return 0;
        } else {
            std::fprintf(stderr,
                         "usage: acceptance [--only N ...] [--cli <runner>] [--list]\n");
            return 2;
        }
    }

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.note(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %2d — %s\n", out.ok ? "PASS" : "FAIL", c.id, c.title);
        if (!out.detail.empty()) std::printf("         %s\n", out.detail.c_str());
        std::fflush(stdout);
        if (!out.ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
