#include "mml/corpus.hpp"

#include <cmath>
#include <random>

#include "mml/error.hpp"
#include "mml/hash.hpp"

namespace mml {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Uniform draws built directly from raw engine output so the streams depend
// only on the standardized mt19937_64 sequence, not on distribution internals.
double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * u01(rng); }

double signed_amplitude(std::mt19937_64& rng) {
    const double a = uniform(rng, 0.5, 2.0);
    return (rng() & 1u) ? a : -a;
}

// Strictly positive temporal modulation, bounded in [0.4, 1.0]; guarantees a
// nonzero t = 0 snapshot for spatial sampling.
struct TimeFactor {
    double omega = 0.0;
    double phase = 0.0;
    double operator()(double t) const { return 0.7 + 0.3 * std::cos(omega * t + phase); }
};

TimeFactor draw_time_factor(std::mt19937_64& rng) {
    return TimeFactor{uniform(rng, kPi, 4.0 * kPi), uniform(rng, 0.0, 2.0 * kPi)};
}

double dist2(const Point& x, const Point& c, int n) {
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) {
        const double d = x[a] - c[a];
        d2 += d * d;
    }
    return d2;
}

Point draw_center(std::mt19937_64& rng, const GridSpec& box) {
    Point c{};
    for (int a = 0; a < box.n; ++a)
        c[a] = box.origin[a] + uniform(rng, 0.2, 0.8) * box.edge();
    return c;
}

CorpusFunction make_bump(std::mt19937_64& rng, const GridSpec& box) {
    const int n = box.n;
    const Point c = draw_center(rng, box);
    const double r = uniform(rng, 0.15, 0.35) * box.edge();
    const double amp = signed_amplitude(rng);
    const TimeFactor tf = draw_time_factor(rng);
    CorpusFunction f;
    f.eval = [n, c, r, amp, tf](const Point& x, double t, double) {
        const double u2 = dist2(x, c, n) / (r * r);
        if (u2 >= 1.0) return 0.0;
        return amp * std::exp(1.0 - 1.0 / (1.0 - u2)) * tf(t);
    };
    return f;
}

CorpusFunction make_indicator(std::mt19937_64& rng, const GridSpec& box) {
    const int n = box.n;
    Point lo{};
    Point hi{};
    for (int a = 0; a < n; ++a) {
        const double width = uniform(rng, 0.2, 0.5) * box.edge();
        const double start =
            box.origin[a] + uniform(rng, 0.05, 0.95 - width / box.edge()) * box.edge();
        lo[a] = start;
        hi[a] = start + width;
    }
    const double amp = signed_amplitude(rng);
    const TimeFactor tf = draw_time_factor(rng);
    CorpusFunction f;
    f.eval = [n, lo, hi, amp, tf](const Point& x, double t, double) {
        for (int a = 0; a < n; ++a)
            if (x[a] < lo[a] || x[a] >= hi[a]) return 0.0;
        return amp * tf(t);
    };
    return f;
}

CorpusFunction make_tensor(std::mt19937_64& rng, const GridSpec& box) {
    const int n = box.n;
    const Point c = draw_center(rng, box);
    Point w{};
    for (int a = 0; a < n; ++a) w[a] = uniform(rng, 0.2, 0.45) * box.edge();
    const double amp = signed_amplitude(rng);
    const TimeFactor tf = draw_time_factor(rng);
    CorpusFunction f;
    f.eval = [n, c, w, amp, tf](const Point& x, double t, double) {
        double prod = amp;
        for (int a = 0; a < n; ++a) {
            const double u = (x[a] - c[a]) / w[a];
            const double bell = 1.0 - u * u;
            if (bell <= 0.0) return 0.0;
            prod *= bell;
        }
        return prod * tf(t);
    };
    return f;
}

CorpusFunction make_trig(std::mt19937_64& rng, const GridSpec& box) {
    const int n = box.n;
    constexpr int kTerms = 3;
    struct Term {
        double coeff;
        std::array<int, kMaxDim> freq;
        std::array<double, kMaxDim> phase;
    };
    std::array<Term, kTerms> terms{};
    for (auto& term : terms) {
        term.coeff = uniform(rng, -1.0, 1.0);
        for (int a = 0; a < n; ++a) {
            term.freq[a] = 1 + int(rng() % 4);
            term.phase[a] = uniform(rng, 0.0, 2.0 * kPi);
        }
    }
    const Point lo = box.origin;
    const double edge = box.edge();
    const TimeFactor tf = draw_time_factor(rng);
    CorpusFunction f;
    f.eval = [n, terms, lo, edge, tf](const Point& x, double t, double) {
        double sum = 0.0;
        for (const auto& term : terms) {
            double prod = term.coeff;
            for (int a = 0; a < n; ++a)
                prod *= std::cos(term.freq[a] * kPi * (x[a] - lo[a]) / edge + term.phase[a]);
            sum += prod;
        }
        return sum * tf(t);
    };
    return f;
}

CorpusFunction make_extremal(std::mt19937_64& rng, const GridSpec& box, double power) {
    const int n = box.n;
    const double s = power > 0.0 ? power : double(n) / 3.0;
    const Point c = draw_center(rng, box);
    const double support = uniform(rng, 0.25, 0.4) * box.edge();
    const double amp = uniform(rng, 0.5, 2.0);
    const TimeFactor tf = draw_time_factor(rng);
    CorpusFunction f;
    f.eval = [n, s, c, support, amp, tf](const Point& x, double t, double scale) {
        const double d = std::sqrt(dist2(x, c, n));
        if (d >= support) return 0.0;
        const double u = d / support;
        const double bell = (1.0 - u * u) * (1.0 - u * u);
        // Peak clamped at the sampling scale: the profile equals |x-c|^(-s)
        // outside one grid cell and caps at scale^(-s) at the center.
        const double trunc = std::max(scale, support * 1e-9);
        return amp * std::pow(std::max(d, trunc), -s) * bell * tf(t);
    };
    return f;
}

}  // namespace

CorpusSpec CorpusSpec::standard(std::uint64_t seed) {
    CorpusSpec spec;
    spec.generators = {{"bump", 5}, {"indicator", 4}, {"tensor", 4}, {"trig", 4}, {"extremal", 3}};
    spec.seed = seed;
    return spec;
}

CorpusSpec CorpusSpec::doubled() const {
    CorpusSpec out = *this;
    for (auto& [name, count] : out.generators) count *= 2;
    return out;
}

std::vector<CorpusFunction> build_corpus(const CorpusSpec& spec, const GridSpec& box) {
    if (spec.generators.empty())
        fail(ErrorKind::invalid_corpus, "corpus spec lists no generators");
    if (!(spec.extremal_power >= 0.0) || spec.extremal_power >= double(box.n))
        fail(ErrorKind::invalid_corpus, "extremal power must lie in [0, n)");

    std::vector<CorpusFunction> corpus;
    for (const auto& [name, count] : spec.generators) {
        if (count < 1)
            fail(ErrorKind::invalid_corpus, "generator '" + name + "' has count < 1");
        for (int j = 0; j < count; ++j) {
            // Stream keyed by (generator, index, seed): corpus growth appends
            // functions without perturbing existing ones.
            std::mt19937_64 rng((fnv1a64(name) * 0x9E3779B97F4A7C15ULL) ^
                                (spec.seed + 0x100003ULL * std::uint64_t(j)));
            CorpusFunction f;
            if (name == "bump") {
                f = make_bump(rng, box);
            } else if (name == "indicator") {
                f = make_indicator(rng, box);
            } else if (name == "tensor") {
                f = make_tensor(rng, box);
            } else if (name == "trig") {
                f = make_trig(rng, box);
            } else if (name == "extremal") {
                f = make_extremal(rng, box, spec.extremal_power);
            } else {
                fail(ErrorKind::invalid_corpus, "unknown corpus generator '" + name + "'");
            }
            f.generator = name;
            f.id = name + "-" + std::to_string(j);
            corpus.push_back(std::move(f));
        }
    }
    return corpus;
}

SampledField sample_spatial(const CorpusFunction& f, const GridSpec& grid) {
    return SampledField::sample(grid,
                                [&](const Point& x) { return f.eval(x, 0.0, grid.h); });
}

SampledField sample_spacetime(const CorpusFunction& f, const GridSpec& grid,
                              const TimeAxis& time) {
    return SampledField::sample(
        grid, time, [&](const Point& x, double t) { return f.eval(x, t, grid.h); });
}

}  // namespace mml
