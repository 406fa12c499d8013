// morreylab — configuration-driven experiment runner.
//
// Usage:  morreylab <command> --config <path> [--out <dir>] [--seed <u64>]
//                   [--resolution <int>]
// Commands: norms, verify-embedding, verify-operator, epsilon-limit,
//           pde-check, kernel-validate.
//
// Every run reads one config file, executes the named command, writes CSV and
// JSON reports plus a run manifest into the output directory, and exits 0
// exactly when every gate in the config passes (1: a gate failed; 2: bad
// usage or bad configuration). Identical config and seed produce byte-
// identical CSV output.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mml/config.hpp"
#include "mml/corpus.hpp"
#include "mml/error.hpp"
#include "mml/format.hpp"
#include "mml/io.hpp"
#include "mml/kernels.hpp"
#include "mml/norms.hpp"
#include "mml/parabolic.hpp"
#include "mml/params.hpp"
#include "mml/singular.hpp"
#include "mml/verify.hpp"

#include <json.hpp>

namespace {

using namespace mml;

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Small helpers

/// Filesystem-safe version of a report prefix.
std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out += ok ? c : '-';
    }
    return out.empty() ? std::string("report") : out;
}

/// Comma-free exponent tag, so report names stay one CSV column.
std::string tag(const MorreyParams& p) {
    return "p=" + format_number(p.p) + " l=" + format_number(p.lambda);
}
std::string tag(const MixedParams& p) {
    return "q=" + format_number(p.q) + " m=" + format_number(p.mu) + " " + tag(p.space);
}

double wall_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    return dt.count();
}

// ---------------------------------------------------------------------------
// Config readers. Every reader fails with config_error naming the key, so a
// bad file dies with a usable diagnostic instead of a deep library error.

Point read_point(const ExperimentConfig& cfg, const std::string& key, int n) {
    const std::vector<double> v = cfg.get_real_list(key);
    if (static_cast<int>(v.size()) != n)
        fail(ErrorKind::config_error,
             "key '" + key + "': expected " + std::to_string(n) + " coordinates");
    Point p{};
    for (int a = 0; a < n; ++a) p[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a)];
    return p;
}

VerifyDomain read_domain(const ExperimentConfig& cfg) {
    VerifyDomain dom;
    dom.n = static_cast<int>(cfg.get_int("domain.n"));
    dom.lo = read_point(cfg, "domain.lo", dom.n);
    dom.hi = read_point(cfg, "domain.hi", dom.n);
    dom.t_end = cfg.get_real("domain.t_end", 1.0);
    return dom;
}

VerifySchedule read_schedule(const ExperimentConfig& cfg) {
    VerifySchedule sched;
    for (std::int64_t r : cfg.get_int_list("schedule.resolutions"))
        sched.resolutions.push_back(static_cast<int>(r));
    if (sched.resolutions.empty())
        fail(ErrorKind::config_error, "missing required key 'schedule.resolutions'");
    for (std::int64_t s : cfg.get_int_list("schedule.time_steps"))
        sched.time_steps.push_back(static_cast<int>(s));
    sched.drift_factor = cfg.get_real("schedule.drift", 1.25);
    sched.double_corpus = cfg.get_bool("schedule.double_corpus", false);
    return sched;
}

CorpusSpec read_corpus(const ExperimentConfig& cfg) {
    CorpusSpec spec = CorpusSpec::standard(0);
    if (cfg.has("corpus.generators")) {
        spec.generators.clear();
        // generators = bump:5, indicator:4, ...
        std::istringstream in(cfg.get_string("corpus.generators"));
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                fail(ErrorKind::config_error,
                     "key 'corpus.generators': entries look like name:count");
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string name = trim(item.substr(0, colon));
            const std::string count = trim(item.substr(colon + 1));
            if (name.empty() || count.empty())
                fail(ErrorKind::config_error,
                     "key 'corpus.generators': entries look like name:count");
            spec.generators.emplace_back(name, std::stoi(count));
        }
    }
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("corpus.seed", 0));
    spec.extremal_power = cfg.get_real("corpus.extremal_power", 0.0);
    return spec;
}

MorreyParams read_morrey(const ExperimentConfig& cfg, const std::string& section, int n) {
    const double p = cfg.get_real(section + ".p");
    const double lambda = cfg.get_real(section + ".lambda");
    return cfg.get_bool(section + ".relaxed", false) ? MorreyParams::relaxed_pair(p, lambda, n)
                                                     : MorreyParams::strict(p, lambda, n);
}

MixedParams read_mixed(const ExperimentConfig& cfg, const std::string& section, int n) {
    const MorreyParams space = read_morrey(cfg, section, n);
    const double q = cfg.get_real(section + ".q");
    const double mu = cfg.get_real(section + ".mu");
    return cfg.get_bool(section + ".relaxed", false) ? MixedParams::relaxed_pair(q, mu, space)
                                                     : MixedParams::strict(q, mu, space);
}

bool section_is_mixed(const ExperimentConfig& cfg, const std::string& section) {
    return cfg.has(section + ".q");
}

OperatorBinding read_operator(const ExperimentConfig& cfg) {
    OperatorBinding op;
    op.name = cfg.get_string("operator.name");
    op.alpha = cfg.get_real("operator.alpha", 0.0);
    op.eta = cfg.get_real("operator.eta", 0.0);
    op.oscillation = cfg.get_bool("operator.oscillation", false);
    op.kernel = cfg.get_string("operator.kernel", "");
    op.epsilon = cfg.get_real("operator.epsilon", 0.0);
    if (cfg.has("operator.symbol")) {
        const std::string symbol = cfg.get_string("operator.symbol");
        if (symbol == "constant") {
            const double c = cfg.get_real("operator.symbol_value", 1.0);
            op.symbol = [c](const Point&, double) { return c; };
        } else if (symbol == "coordinate") {
            op.symbol = [](const Point& x, double) { return x[0]; };
        } else if (symbol == "radial-bump") {
            op.symbol = [](const Point& x, double) {
                const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                return std::exp(-4.0 * r2);
            };
        } else if (symbol == "mollified-jump") {
            const double delta = cfg.get_real("operator.symbol_delta", 0.1);
            op.symbol = [delta](const Point& x, double) { return std::tanh(x[0] / delta); };
        } else {
            fail(ErrorKind::config_error,
                 "key 'operator.symbol': unknown symbol '" + symbol + "'");
        }
    }
    return op;
}

// ---------------------------------------------------------------------------
// Run context: output directory, manifest bookkeeping, gate outcomes.

struct RunContext {
    ExperimentConfig cfg;
    std::filesystem::path out_dir;
    std::string prefix;  // sanitized; names every output file
    RunManifest manifest;
    std::vector<std::string> failed_gates;

    std::filesystem::path path_for(const std::string& suffix) const {
        return out_dir / (prefix + suffix);
    }

    void emit(const std::string& suffix, const std::string& content) {
        const std::filesystem::path p = path_for(suffix);
        write_text(p.string(), content);
        manifest.add_output(p.string());
    }

    void gate(const std::string& name, bool ok) {
        if (!ok) failed_gates.push_back(name);
    }
};

/// Writes a ratio report as <prefix><suffix>.csv + .summary.json and records
/// its pass verdict as a gate.
void emit_report(RunContext& ctx, const RatioReport& report, const std::string& suffix) {
    ctx.emit(suffix + ".csv", report.csv());
    ctx.emit(suffix + ".summary.json", report.json_summary());
    ctx.gate(report.name, report.pass);
}

// ---------------------------------------------------------------------------
// Commands

void run_norms(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const VerifyDomain dom = read_domain(cfg);
    const VerifySchedule sched = read_schedule(cfg);
    const int resolution = sched.resolutions.back();
    const std::string kind = cfg.get_string("norm.kind");

    const GridSpec grid = build_grid(dom.n, dom.lo, dom.hi, resolution);
    const std::vector<CorpusFunction> corpus = build_corpus(read_corpus(cfg), grid);

    std::string csv = "function_id,norm,value,x1,x2,x3,radius,t,t_radius\n";
    double max_value = 0.0;
    bool all_finite = true;
    for (const CorpusFunction& f : corpus) {
        NormReport r;
        if (kind == "morrey") {
            const SampledField field = sample_spatial(f, grid);
            r = morrey_norm(field, read_morrey(cfg, "norm", dom.n), dyadic_radii(grid));
        } else if (kind == "mixed-morrey") {
            if (sched.time_steps.empty())
                fail(ErrorKind::config_error,
                     "mixed-morrey norms need 'schedule.time_steps'");
            const TimeAxis time = build_time_axis(dom.t_end, sched.time_steps.back());
            const SampledField field = sample_spacetime(f, grid, time);
            r = mixed_morrey_norm(field, read_mixed(cfg, "norm", dom.n), dyadic_radii(grid),
                                  dyadic_radii(time));
        } else if (kind == "bmo") {
            const SampledField field = sample_spatial(f, grid);
            r = bmo_seminorm(field, dyadic_radii(grid));
        } else {
            fail(ErrorKind::config_error, "key 'norm.kind': unknown norm '" + kind + "'");
        }
        csv += f.id + ',' + r.name + ',' + format_number(r.value);
        for (int a = 0; a < kMaxDim; ++a) csv += ',' + format_number(r.center[a]);
        csv += ',' + format_number(r.radius);
        csv += ',' + format_number(r.t_index >= 0 ? r.t_center : 0.0);
        csv += ',' + format_number(r.t_index >= 0 ? r.t_radius : 0.0);
        csv += '\n';
        max_value = std::max(max_value, r.value);
        all_finite = all_finite && std::isfinite(r.value);
    }
    ctx.emit(".csv", csv);

    nlohmann::ordered_json summary;
    summary["command"] = "norms";
    summary["norm"] = kind;
    summary["resolution"] = resolution;
    summary["functions"] = corpus.size();
    summary["max_value"] = max_value;
    summary["pass"] = all_finite;
    ctx.emit(".summary.json", summary.dump(2) + "\n");
    ctx.gate("norms: all values finite", all_finite);
}

void run_verify_embedding(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const VerifyDomain dom = read_domain(cfg);
    const VerifySchedule sched = read_schedule(cfg);
    const CorpusSpec corpus = read_corpus(cfg);
    const std::string id = cfg.get_string("report.id");

    RatioReport report;
    if (section_is_mixed(cfg, "source")) {
        const MixedParams source = read_mixed(cfg, "source", dom.n);
        const MixedParams target = read_mixed(cfg, "target", dom.n);
        const std::string name = id + "[" + tag(source) + " -> " + tag(target) + "]";
        report = verify_embedding(name, corpus, dom, sched, source, target);
    } else {
        const MorreyParams source = read_morrey(cfg, "source", dom.n);
        const MorreyParams target = read_morrey(cfg, "target", dom.n);
        const std::string name = id + "[" + tag(source) + " -> " + tag(target) + "]";
        report = verify_embedding(name, corpus, dom, sched, source, target);
    }
    emit_report(ctx, report, "");
}

void run_verify_operator(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const VerifyDomain dom = read_domain(cfg);
    const VerifySchedule sched = read_schedule(cfg);
    const CorpusSpec corpus = read_corpus(cfg);
    const OperatorBinding op = read_operator(cfg);
    const std::string id = cfg.get_string("report.id");

    const MixedParams source = read_mixed(cfg, "source", dom.n);
    const MixedParams target =
        cfg.has("target.q") ? read_mixed(cfg, "target", dom.n) : source;
    const std::string name =
        id + "[" + op.name + " " + tag(source) + " -> " + tag(target) + "]";
    emit_report(ctx, verify_operator_bound(name, corpus, dom, sched, op, source, target), "");
}

void run_epsilon_limit(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const VerifyDomain dom = read_domain(cfg);
    const VerifySchedule sched = read_schedule(cfg);
    const std::string id = cfg.get_string("report.id");
    const KernelDescriptor& kernel = find_kernel(cfg.get_string("operator.kernel"));
    const MixedParams params = read_mixed(cfg, "norm", dom.n);

    if (sched.time_steps.empty())
        fail(ErrorKind::config_error, "epsilon-limit needs 'schedule.time_steps'");
    const GridSpec grid = build_grid(dom.n, dom.lo, dom.hi, sched.resolutions.back());
    const TimeAxis time = build_time_axis(dom.t_end, sched.time_steps.back());

    const std::vector<CorpusFunction> corpus = build_corpus(read_corpus(cfg), grid);
    const int index = static_cast<int>(cfg.get_int("epsilon.function", 0));
    if (index < 0 || index >= static_cast<int>(corpus.size()))
        fail(ErrorKind::config_error, "key 'epsilon.function': index outside the corpus");
    const SampledField f =
        sample_spacetime(corpus[static_cast<std::size_t>(index)], grid, time);

    EpsilonSchedule eps = [&] {
        if (cfg.has("epsilon.list")) return EpsilonSchedule::from_list(
            cfg.get_real_list("epsilon.list"));
        const double start = cfg.get_real("epsilon.start", 8.0 * grid.h);
        const double factor = cfg.get_real("epsilon.factor", 0.5);
        const int count = static_cast<int>(cfg.get_int("epsilon.count", 4));
        return EpsilonSchedule::geometric(start, factor, count);
    }();
    const double tolerance = cfg.get_real("epsilon.tolerance");

    const auto [limit, conv] = epsilon_limit(
        [&](double e) { return truncated_singular_integral(f, kernel, e); }, eps, params,
        dyadic_radii(grid), dyadic_radii(time), tolerance);

    std::string csv = "theorem_id,epsilon,distance\n";
    for (std::size_t i = 0; i < conv.distances.size(); ++i) {
        csv += id + ',' + format_number(conv.epsilons[i + 1]) + ',' +
               format_number(conv.distances[i]) + '\n';
    }
    ctx.emit(".csv", csv);
    if (cfg.get_bool("epsilon.write_field", false)) {
        const std::filesystem::path p = ctx.path_for(".limit.field");
        write_field(limit, p.string());
        ctx.manifest.add_output(p.string());
    }

    nlohmann::ordered_json summary;
    summary["theorem_id"] = id;
    summary["kernel"] = kernel.name;
    summary["function_id"] = corpus[static_cast<std::size_t>(index)].id;
    summary["epsilons"] = conv.epsilons;
    summary["distances"] = conv.distances;
    summary["tolerance"] = conv.tolerance;
    summary["pass"] = conv.converged;
    ctx.emit(".summary.json", summary.dump(2) + "\n");
    ctx.gate(id + ": truncation limit converges", conv.converged);
}

void run_pde_check(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const VerifyDomain dom = read_domain(cfg);
    const VerifySchedule sched = read_schedule(cfg);
    const std::string id = cfg.get_string("report.id");
    const MixedParams params = read_mixed(cfg, "norm", dom.n);

    const std::string coeff_name = cfg.get_string("pde.coefficients");
    const std::string family_name = cfg.get_string("pde.solutions");
    const int count = static_cast<int>(cfg.get_int("pde.count", 3));
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("corpus.seed", 0));
    const Point center = cfg.has("pde.center") ? read_point(cfg, "pde.center", dom.n)
                                               : Point{};
    const std::vector<double> radii = cfg.get_real_list("pde.radii");
    if (radii.empty())
        fail(ErrorKind::config_error, "missing required key 'pde.radii'");

    const AprioriReport report = apriori_check(
        id,
        [&](double r) {
            return solution_family(family_name, count, seed, dom.n, center, r, dom.t_end);
        },
        [&](const GridSpec& grid, const TimeAxis& time) {
            return coefficient_family(coeff_name, grid, time);
        },
        dom, sched, params, center, radii);

    emit_report(ctx, report.hessian, "-d2");
    emit_report(ctx, report.time_derivative, "-dt");
}

void run_kernel_validate(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const int order = static_cast<int>(cfg.get_int("kernel.order", 64));
    const double zero_mean_tol = cfg.get_real("kernel.zero_mean_tol", 1e-8);
    const double homogeneity_tol = cfg.get_real("kernel.homogeneity_tol", 1e-10);

    std::vector<std::string> names;
    if (cfg.has("kernel.names")) {
        std::istringstream in(cfg.get_string("kernel.names"));
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b != std::string::npos) names.push_back(item.substr(b, e - b + 1));
        }
    } else {
        for (const KernelDescriptor& k : kernel_registry()) names.push_back(k.name);
    }

    std::string csv =
        "kernel,quadrature_order,homogeneity_defect,mean_integral,abs_integral,"
        "derivative_bound,within_smoothness,zero_mean,homogeneous\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (const std::string& name : names) {
        const KernelValidation v = kernel_validate(find_kernel(name), order);
        const bool ok =
            v.zero_mean(zero_mean_tol) && v.homogeneous(homogeneity_tol) && v.within_smoothness;
        csv += v.kernel + ',' + std::to_string(v.quadrature_order) + ',' +
               format_number(v.homogeneity_defect) + ',' + format_number(v.mean_integral) +
               ',' + format_number(v.abs_integral) + ',' + format_number(v.derivative_bound) +
               ',' + (v.within_smoothness ? "true" : "false") + ',' +
               (v.zero_mean(zero_mean_tol) ? "true" : "false") + ',' +
               (v.homogeneous(homogeneity_tol) ? "true" : "false") + '\n';
        rows.push_back({{"kernel", v.kernel},
                        {"homogeneity_defect", v.homogeneity_defect},
                        {"mean_integral", v.mean_integral},
                        {"pass", ok}});
        ctx.gate("kernel axioms: " + name, ok);
        all_ok = all_ok && ok;
    }
    ctx.emit(".csv", csv);

    nlohmann::ordered_json summary;
    summary["command"] = "kernel-validate";
    summary["quadrature_order"] = order;
    summary["kernels"] = rows;
    summary["pass"] = all_ok;
    ctx.emit(".summary.json", summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-Morrey norm and operator laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"norms", "norm reports for every corpus function"},
        {"verify-embedding", "embedding ratio protocol across the schedule"},
        {"verify-operator", "operator boundedness ratio protocol"},
        {"epsilon-limit", "truncation-limit convergence for a singular integral"},
        {"pde-check", "a-priori derivative bounds for the parabolic operator"},
        {"kernel-validate", "kernel axiom checks (zero mean, homogeneity)"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--seed", seed, "override corpus.seed");
        sub->add_option("--resolution", resolution,
                        "override schedule.resolutions with a single value");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
    }

    const std::string command = app.get_subcommands().front()->get_name();

    try {
        ExperimentConfig cfg = ExperimentConfig::parse_file(config_path);
        if (seed) cfg.set("corpus.seed", std::to_string(*seed));
        if (resolution) {
            cfg.set("schedule.resolutions", std::to_string(*resolution));
            if (cfg.has("schedule.time_steps")) {
                const auto steps = cfg.get_int_list("schedule.time_steps");
                cfg.set("schedule.time_steps", std::to_string(steps.back()));
            }
        }

        RunContext ctx;
        ctx.cfg = std::move(cfg);
        ctx.out_dir = out_dir;
        ctx.prefix = sanitize(ctx.cfg.get_string("report.id", command));
        ctx.manifest.config_hash = ctx.cfg.hash();
        ctx.manifest.artifact_version = kVersion;
        std::filesystem::create_directories(ctx.out_dir);

        const double seconds = wall_seconds([&] {
            if (command == "norms") run_norms(ctx);
            else if (command == "verify-embedding") run_verify_embedding(ctx);
            else if (command == "verify-operator") run_verify_operator(ctx);
            else if (command == "epsilon-limit") run_epsilon_limit(ctx);
            else if (command == "pde-check") run_pde_check(ctx);
            else run_kernel_validate(ctx);
        });
        ctx.manifest.add_stage(command, seconds);

        const std::filesystem::path manifest_path = ctx.path_for(".manifest.json");
        ctx.manifest.add_output(manifest_path.string());
        write_text(manifest_path.string(), ctx.manifest.json());

        if (!ctx.failed_gates.empty()) {
            for (const std::string& g : ctx.failed_gates)
                std::fprintf(stderr, "gate failed: %s\n", g.c_str());
            return 1;
        }
        return 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
