#include "mml/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mml/format.hpp"

#include <json.hpp>

#include "mml/error.hpp"
#include "mml/kernels.hpp"
#include "mml/maximal.hpp"
#include "mml/norms.hpp"
#include "mml/riesz.hpp"
#include "mml/singular.hpp"

namespace mml {

namespace {

std::string num(double v) { return format_number(v); }

}  // namespace

RatioRow make_ratio_row(const std::string& function_id, int resolution, double lhs,
                        double rhs) {
    RatioRow row;
    row.function_id = function_id;
    row.resolution = resolution;
    row.lhs = lhs;
    row.rhs = rhs;
    if (rhs == 0.0) {
        row.degenerate = true;
        if (lhs == 0.0) {
            row.ratio = 0.0;
            row.note = "zero on both sides";
        } else {
            row.ratio = std::numeric_limits<double>::quiet_NaN();
            row.note = "zero denominator";
        }
    } else {
        row.ratio = lhs / rhs;
    }
    return row;
}

double max_nondegenerate_ratio(const std::vector<RatioRow>& rows) {
    double m = 0.0;
    for (const auto& row : rows)
        if (!row.degenerate) m = std::max(m, row.ratio);
    return m;
}

namespace {

void check_schedule(const VerifySchedule& sched, bool needs_time) {
    if (sched.resolutions.empty())
        fail(ErrorKind::invalid_domain, "refinement schedule lists no resolutions");
    for (std::size_t k = 1; k < sched.resolutions.size(); ++k)
        if (sched.resolutions[k] <= sched.resolutions[k - 1])
            fail(ErrorKind::invalid_domain, "resolutions must be strictly increasing");
    if (needs_time && sched.time_steps.size() != sched.resolutions.size())
        fail(ErrorKind::invalid_domain,
             "space-time runs need one time-step count per resolution");
    if (!(sched.drift_factor >= 1.0))
        fail(ErrorKind::invalid_domain, "drift factor must be at least 1");
}

struct Sides {
    double lhs = 0.0;
    double rhs = 0.0;
};

// Shared runner: evaluates both sides for every corpus function at every
// scheduled resolution, then assembles rows, history, and the drift verdict.
// `doubled` is either empty or a superset corpus evaluated once at the finest
// grid as the corpus-growth stability leg.
RatioReport run_protocol(const std::string& name, const std::vector<CorpusFunction>& corpus,
                         const std::vector<CorpusFunction>& doubled,
                         const VerifySchedule& sched, bool needs_time,
                         const std::function<Sides(const CorpusFunction&, int, int)>& eval) {
    if (corpus.empty()) fail(ErrorKind::invalid_corpus, "corpus is empty");
    check_schedule(sched, needs_time);

    RatioReport report;
    report.name = name;
    report.drift_factor = sched.drift_factor;

    const auto run_pass = [&](const std::vector<CorpusFunction>& functions, int res,
                              int steps) {
        std::vector<RatioRow> rows(functions.size());
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < std::int64_t(functions.size()); ++i) {
            try {
                const Sides s = eval(functions[i], res, steps);
                rows[i] = make_ratio_row(functions[i].id, res, s.lhs, s.rhs);
            } catch (...) {
#pragma omp critical
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        report.history.push_back(
            HistoryEntry{res, int(functions.size()), max_nondegenerate_ratio(rows)});
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    };

    for (std::size_t k = 0; k < sched.resolutions.size(); ++k)
        run_pass(corpus, sched.resolutions[k], needs_time ? sched.time_steps[k] : 0);
    if (!doubled.empty())
        run_pass(doubled, sched.resolutions.back(),
                 needs_time ? sched.time_steps.back() : 0);

    report.max_ratio = report.history.back().max_ratio;
    report.pass = drift_ok(report.history, report.drift_factor);
    return report;
}

GridSpec domain_box(const VerifyDomain& dom, int cells) {
    return build_grid(dom.n, dom.lo, dom.hi, cells);
}

// Applies a spatial transform slice-by-slice to a space-time field.
SampledField apply_slicewise(const SampledField& f,
                             const std::function<SampledField(const SampledField&)>& op) {
    if (!f.has_time()) return op(f);
    std::vector<double> out;
    out.reserve(f.values.size());
    for (int j = 0; j < f.slices(); ++j) {
        const SampledField r = op(extract_slice(f, j));
        out.insert(out.end(), r.values.begin(), r.values.end());
    }
    return SampledField::from_values(f.grid, *f.time, std::move(out));
}

// BMO seminorm of a space-time coefficient: max over distinct time slices.
// Identical slices (the common time-constant case) are detected exactly and
// scanned once.
double coefficient_bmo(const SampledField& a, const RadiusSet& radii) {
    const SampledField first = extract_slice(a, 0);
    double worst = bmo_seminorm(first, radii).value;
    for (int j = 1; j < a.slices(); ++j) {
        const auto s = a.slice(j);
        if (std::equal(s.begin(), s.end(), first.values.begin())) continue;
        worst = std::max(worst, bmo_seminorm(extract_slice(a, j), radii).value);
    }
    return worst;
}

struct ProtocolPieces {
    SampledField numerator;
    SampledField denominator;
    double denominator_scale = 1.0;
};

ProtocolPieces apply_operator(const OperatorBinding& op, const SampledField& f,
                              const RadiusSet& space_radii) {
    const double eps = op.epsilon > 0.0 ? op.epsilon : 2.0 * f.grid.h;
    if (op.name == "identity") {
        return ProtocolPieces{f, f, 1.0};
    }
    if (op.name == "hl-maximal") {
        return ProtocolPieces{
            apply_slicewise(f, [&](const SampledField& s) { return hl_maximal(s, space_radii); }),
            f, 1.0};
    }
    if (op.name == "sharp-vs-maximal") {
        return ProtocolPieces{
            apply_slicewise(f, [&](const SampledField& s) { return hl_maximal(s, space_radii); }),
            apply_slicewise(f,
                            [&](const SampledField& s) { return sharp_maximal(s, space_radii); }),
            1.0};
    }
    if (op.name == "fractional-maximal") {
        const MaximalParams params = MaximalParams::fractional(op.eta, op.oscillation);
        return ProtocolPieces{
            apply_slicewise(
                f, [&](const SampledField& s) { return fractional_maximal(s, params, space_radii); }),
            f, 1.0};
    }
    if (op.name == "riesz") {
        return ProtocolPieces{
            apply_slicewise(f,
                            [&](const SampledField& s) { return riesz_potential(s, op.alpha); }),
            f, 1.0};
    }
    if (op.name == "singular-integral") {
        const KernelDescriptor& k = find_kernel(op.kernel);
        return ProtocolPieces{truncated_singular_integral(f, k, eps), f, 1.0};
    }
    if (op.name == "commutator") {
        if (!op.symbol)
            fail(ErrorKind::invalid_field, "commutator protocol needs a coefficient symbol");
        const KernelDescriptor& k = find_kernel(op.kernel);
        SampledField a = f.has_time() ? SampledField::sample(f.grid, *f.time, op.symbol)
                                      : SampledField::sample(f.grid, [&](const Point& x) {
                                            return op.symbol(x, 0.0);
                                        });
        ProtocolPieces pieces{commutator(a, f, k, eps), f, 1.0};
        pieces.denominator_scale = coefficient_bmo(a, space_radii);
        return pieces;
    }
    fail(ErrorKind::unknown_operator, "no operator protocol named '" + op.name + "'");
}

// Zeroes a spatial or space-time field outside the ball B_r(center); strict
// cell-center membership, matching the region conventions.
SampledField restrict_to_ball(const SampledField& f, const Point& center, double r) {
    SampledField out = f;
    const GridSpec& g = f.grid;
    const std::int64_t nc = g.cell_count();
    std::vector<char> keep(static_cast<std::size_t>(nc), 0);
    for (std::int64_t c = 0; c < nc; ++c) {
        const Point x = g.center(c);
        double d2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double d = x[a] - center[a];
            d2 += d * d;
        }
        keep[std::size_t(c)] = d2 < r * r ? 1 : 0;
    }
    for (int j = 0; j < out.slices(); ++j) {
        auto s = out.slice(j);
        for (std::int64_t c = 0; c < nc; ++c)
            if (!keep[std::size_t(c)]) s[std::size_t(c)] = 0.0;
    }
    return out;
}

}  // namespace

bool drift_ok(const std::vector<HistoryEntry>& history, double drift_factor) {
    if (history.empty()) return false;
    for (const auto& entry : history)
        if (!std::isfinite(entry.max_ratio)) return false;
    for (std::size_t k = 1; k < history.size(); ++k) {
        const double prev = history[k - 1].max_ratio;
        const double cur = history[k].max_ratio;
        if (prev == 0.0) {
            if (cur != 0.0) return false;
        } else if (cur > drift_factor * prev) {
            return false;
        }
    }
    return true;
}

std::string RatioReport::csv() const {
    std::string out = "theorem_id,function_id,resolution,lhs,rhs,ratio\n";
    for (const auto& row : rows) {
        out += name;
        out += ',';
        out += row.function_id;
        out += ',';
        out += std::to_string(row.resolution);
        out += ',';
        out += num(row.lhs);
        out += ',';
        out += num(row.rhs);
        out += ',';
        out += num(row.ratio);
        out += '\n';
    }
    return out;
}

std::string RatioReport::json_summary() const {
    nlohmann::json j;
    j["theorem_id"] = name;
    j["max_ratio"] = max_ratio;
    j["drift_factor"] = drift_factor;
    j["pass"] = pass;
    j["history"] = nlohmann::json::array();
    for (const auto& entry : history) {
        j["history"].push_back({{"resolution", entry.resolution},
                                {"corpus_size", entry.corpus_size},
                                {"max_ratio", entry.max_ratio}});
    }
    int degenerate = 0;
    for (const auto& row : rows)
        if (row.degenerate) ++degenerate;
    j["degenerate_rows"] = degenerate;
    return j.dump(2);
}

std::vector<std::string> registered_operators() {
    return {"identity",          "hl-maximal", "sharp-vs-maximal", "fractional-maximal",
            "riesz",             "singular-integral", "commutator"};
}

namespace {

// Fail-fast validation of the binding before any parallel work starts.
void check_operator_binding(const OperatorBinding& op) {
    const auto ops = registered_operators();
    if (std::find(ops.begin(), ops.end(), op.name) == ops.end())
        fail(ErrorKind::unknown_operator, "no operator protocol named '" + op.name + "'");
    if (op.name == "singular-integral" || op.name == "commutator")
        find_kernel(op.kernel);  // throws unknown_operator when absent
    if (op.name == "commutator" && !op.symbol)
        fail(ErrorKind::invalid_field, "commutator protocol needs a coefficient symbol");
}

}  // namespace

RatioReport verify_embedding(const std::string& name,
                             const std::vector<CorpusFunction>& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MorreyParams& source, const MorreyParams& target) {
    if (sched.double_corpus)
        fail(ErrorKind::invalid_corpus, "corpus doubling requires a corpus spec");
    const auto eval = [&](const CorpusFunction& f, int res, int) {
        const GridSpec g = domain_box(dom, res);
        const SampledField field = sample_spatial(f, g);
        const RadiusSet radii = dyadic_radii(g);
        return Sides{morrey_norm(field, target, radii).value,
                     morrey_norm(field, source, radii).value};
    };
    return run_protocol(name, corpus, {}, sched, false, eval);
}

RatioReport verify_embedding(const std::string& name, const CorpusSpec& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MorreyParams& source, const MorreyParams& target) {
    const GridSpec box = domain_box(dom, sched.resolutions.empty() ? 2 : sched.resolutions.front());
    const auto functions = build_corpus(corpus, box);
    const auto doubled =
        sched.double_corpus ? build_corpus(corpus.doubled(), box) : std::vector<CorpusFunction>{};
    VerifySchedule inner = sched;
    inner.double_corpus = false;
    const auto eval = [&](const CorpusFunction& f, int res, int) {
        const GridSpec g = domain_box(dom, res);
        const SampledField field = sample_spatial(f, g);
        const RadiusSet radii = dyadic_radii(g);
        return Sides{morrey_norm(field, target, radii).value,
                     morrey_norm(field, source, radii).value};
    };
    return run_protocol(name, functions, doubled, inner, false, eval);
}

namespace {

Sides mixed_embedding_sides(const CorpusFunction& f, const VerifyDomain& dom, int res,
                            int steps, const MixedParams& source, const MixedParams& target) {
    const GridSpec g = domain_box(dom, res);
    const TimeAxis time = build_time_axis(dom.t_end, steps);
    const SampledField field = sample_spacetime(f, g, time);
    const RadiusSet space_radii = dyadic_radii(g);
    const RadiusSet time_radii = dyadic_radii(time);
    return Sides{mixed_morrey_norm(field, target, space_radii, time_radii).value,
                 mixed_morrey_norm(field, source, space_radii, time_radii).value};
}

Sides operator_bound_sides(const CorpusFunction& f, const VerifyDomain& dom, int res,
                           int steps, const OperatorBinding& op, const MixedParams& source,
                           const MixedParams& target) {
    const GridSpec g = domain_box(dom, res);
    const TimeAxis time = build_time_axis(dom.t_end, steps);
    const SampledField field = sample_spacetime(f, g, time);
    const RadiusSet space_radii = dyadic_radii(g);
    const RadiusSet time_radii = dyadic_radii(time);
    const ProtocolPieces pieces = apply_operator(op, field, space_radii);
    const double lhs = mixed_morrey_norm(pieces.numerator, target, space_radii, time_radii).value;
    const double rhs =
        pieces.denominator_scale *
        mixed_morrey_norm(pieces.denominator, source, space_radii, time_radii).value;
    return Sides{lhs, rhs};
}

}  // namespace

RatioReport verify_embedding(const std::string& name,
                             const std::vector<CorpusFunction>& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MixedParams& source, const MixedParams& target) {
    if (sched.double_corpus)
        fail(ErrorKind::invalid_corpus, "corpus doubling requires a corpus spec");
    const auto eval = [&](const CorpusFunction& f, int res, int steps) {
        return mixed_embedding_sides(f, dom, res, steps, source, target);
    };
    return run_protocol(name, corpus, {}, sched, true, eval);
}

RatioReport verify_embedding(const std::string& name, const CorpusSpec& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MixedParams& source, const MixedParams& target) {
    const GridSpec box = domain_box(dom, sched.resolutions.empty() ? 2 : sched.resolutions.front());
    const auto functions = build_corpus(corpus, box);
    const auto doubled =
        sched.double_corpus ? build_corpus(corpus.doubled(), box) : std::vector<CorpusFunction>{};
    VerifySchedule inner = sched;
    inner.double_corpus = false;
    const auto eval = [&](const CorpusFunction& f, int res, int steps) {
        return mixed_embedding_sides(f, dom, res, steps, source, target);
    };
    return run_protocol(name, functions, doubled, inner, true, eval);
}

RatioReport verify_operator_bound(const std::string& name,
                                  const std::vector<CorpusFunction>& corpus,
                                  const VerifyDomain& dom, const VerifySchedule& sched,
                                  const OperatorBinding& op, const MixedParams& source,
                                  const MixedParams& target) {
    check_operator_binding(op);
    if (sched.double_corpus)
        fail(ErrorKind::invalid_corpus, "corpus doubling requires a corpus spec");
    const auto eval = [&](const CorpusFunction& f, int res, int steps) {
        return operator_bound_sides(f, dom, res, steps, op, source, target);
    };
    return run_protocol(name, corpus, {}, sched, true, eval);
}

RatioReport verify_operator_bound(const std::string& name, const CorpusSpec& corpus,
                                  const VerifyDomain& dom, const VerifySchedule& sched,
                                  const OperatorBinding& op, const MixedParams& source,
                                  const MixedParams& target) {
    check_operator_binding(op);
    const GridSpec box = domain_box(dom, sched.resolutions.empty() ? 2 : sched.resolutions.front());
    const auto functions = build_corpus(corpus, box);
    const auto doubled =
        sched.double_corpus ? build_corpus(corpus.doubled(), box) : std::vector<CorpusFunction>{};
    VerifySchedule inner = sched;
    inner.double_corpus = false;
    const auto eval = [&](const CorpusFunction& f, int res, int steps) {
        return operator_bound_sides(f, dom, res, steps, op, source, target);
    };
    return run_protocol(name, functions, doubled, inner, true, eval);
}

bool CommutatorTrend::nonincreasing(double slack) const {
    for (std::size_t k = 1; k < max_ratios.size(); ++k)
        if (max_ratios[k] > slack * max_ratios[k - 1]) return false;
    return true;
}

std::string CommutatorTrend::csv() const {
    std::string out = "theorem_id,function_id,resolution,lhs,rhs,ratio\n";
    for (const auto& row : rows) {
        out += name;
        out += ',';
        out += row.function_id;
        out += ',';
        out += std::to_string(row.resolution);
        out += ',';
        out += num(row.lhs);
        out += ',';
        out += num(row.rhs);
        out += ',';
        out += num(row.ratio);
        out += '\n';
    }
    return out;
}

CommutatorTrend commutator_vmo_trend(const std::string& name,
                                     const std::vector<CorpusFunction>& corpus,
                                     const VerifyDomain& dom, int resolution, int time_steps,
                                     const OperatorBinding& op, const MixedParams& params,
                                     const Point& center, const std::vector<double>& radii) {
    if (corpus.empty()) fail(ErrorKind::invalid_corpus, "corpus is empty");
    if (!op.symbol)
        fail(ErrorKind::invalid_field, "commutator trend needs a coefficient symbol");
    if (radii.empty()) fail(ErrorKind::invalid_radii, "radius sweep is empty");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] < radii[k - 1]))
            fail(ErrorKind::invalid_radii, "radius sweep must be strictly decreasing");

    const GridSpec g = domain_box(dom, resolution);
    const TimeAxis time = build_time_axis(dom.t_end, time_steps);
    for (const double r : radii)
        if (r < g.h)
            fail(ErrorKind::invalid_radii, "sweep radius below the grid spacing");
    const RadiusSet space_radii = dyadic_radii(g);
    const RadiusSet time_radii = dyadic_radii(time);
    const KernelDescriptor& kernel = find_kernel(op.kernel);
    const double eps = op.epsilon > 0.0 ? op.epsilon : 2.0 * g.h;
    const SampledField a = SampledField::sample(g, time, op.symbol);

    CommutatorTrend trend;
    trend.name = name;
    trend.center = center;
    trend.radii = radii;

    std::vector<SampledField> fields;
    fields.reserve(corpus.size());
    for (const auto& f : corpus) fields.push_back(sample_spacetime(f, g, time));

    for (const double r : radii) {
        std::vector<RatioRow> rows(corpus.size());
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < std::int64_t(corpus.size()); ++i) {
            try {
                const SampledField localized =
                    restrict_to_ball(fields[std::size_t(i)], center, r);
                const SampledField commuted =
                    restrict_to_ball(commutator(a, localized, kernel, eps), center, r);
                const double lhs =
                    mixed_morrey_norm(commuted, params, space_radii, time_radii).value;
                const double rhs =
                    mixed_morrey_norm(localized, params, space_radii, time_radii).value;
                rows[i] =
                    make_ratio_row(corpus[std::size_t(i)].id + ":r=" + num(r), resolution, lhs, rhs);
            } catch (...) {
#pragma omp critical
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        trend.max_ratios.push_back(max_nondegenerate_ratio(rows));
        trend.rows.insert(trend.rows.end(), rows.begin(), rows.end());
    }
    return trend;
}

CommutatorTrend commutator_vmo_trend(const std::string& name, const CorpusSpec& corpus,
                                     const VerifyDomain& dom, int resolution, int time_steps,
                                     const OperatorBinding& op, const MixedParams& params,
                                     const Point& center, const std::vector<double>& radii) {
    const GridSpec box = domain_box(dom, resolution);
    return commutator_vmo_trend(name, build_corpus(corpus, box), dom, resolution, time_steps,
                                op, params, center, radii);
}

}  // namespace mml
