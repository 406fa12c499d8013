#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mml/corpus.hpp"
#include "mml/grid.hpp"
#include "mml/params.hpp"

namespace mml {

/// Geometry shared by a verification run: spatial box and time interval.
struct VerifyDomain {
    int n = 0;
    Point lo{};
    Point hi{};
    double t_end = 1.0;
};

/// Refinement schedule: cells-per-axis (ascending) and, for space-time runs,
/// matching time-step counts. The drift factor gates how much the max ratio
/// may grow between successive history entries before the report fails.
struct VerifySchedule {
    std::vector<int> resolutions;
    std::vector<int> time_steps;  // same length as resolutions for mixed runs; else empty
    double drift_factor = 1.25;
    bool double_corpus = false;   // append a doubled-corpus entry at the finest grid
};

/// One corpus function evaluated at one resolution. Degenerate rows (zero
/// denominator) are excluded from the max ratio and carry a note; their ratio
/// field is 0 when both sides vanish and NaN when only the denominator does.
struct RatioRow {
    std::string function_id;
    int resolution = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool degenerate = false;
    std::string note;
};

struct HistoryEntry {
    int resolution = 0;
    int corpus_size = 0;
    double max_ratio = 0.0;
};

/// Builds a row under the degenerate-row conventions above.
RatioRow make_ratio_row(const std::string& function_id, int resolution, double lhs,
                        double rhs);
/// Max ratio over nondegenerate rows; 0 when none qualify.
double max_nondegenerate_ratio(const std::vector<RatioRow>& rows);

/// True when every entry is finite and no entry exceeds its predecessor by
/// more than the drift factor (a zero predecessor admits only zero).
bool drift_ok(const std::vector<HistoryEntry>& history, double drift_factor);

/// Empirical two-sided inequality report: per-function rows at every
/// scheduled resolution, the max-ratio history, and the drift verdict.
struct RatioReport {
    std::string name;  // inequality identifier; first CSV column
    std::vector<RatioRow> rows;
    std::vector<HistoryEntry> history;
    double max_ratio = 0.0;  // max ratio at the final history entry
    double drift_factor = 1.25;
    bool pass = false;

    /// Header "theorem_id,function_id,resolution,lhs,rhs,ratio" plus one row
    /// per (function, resolution); shortest round-trip number formatting, so
    /// identical inputs serialize to identical bytes.
    std::string csv() const;
    /// {"theorem_id":..., "max_ratio":..., "history":[...], "pass":...}
    std::string json_summary() const;
};

/// Parameters binding a named operator for verify_operator_bound. Fields are
/// read per-operator; unused ones are ignored. Registered names:
///   "identity"            lhs |f|_target          rhs |f|_source
///   "hl-maximal"          lhs |Mf|_target         rhs |f|_source
///   "sharp-vs-maximal"    lhs |Mf|_target         rhs |f#|_source
///   "fractional-maximal"  lhs |M_eta f|_target    rhs |f|_source   (eta, oscillation)
///   "riesz"               lhs |I_alpha f|_target  rhs |f|_source   (alpha)
///   "singular-integral"   lhs |K_eps f|_target    rhs |f|_source   (kernel, epsilon)
///   "commutator"          lhs |C[a,f]|_target     rhs |a|_* |f|_source (kernel, epsilon, symbol)
/// Spatial operators apply slice-by-slice to space-time fields.
struct OperatorBinding {
    std::string name;
    double alpha = 0.0;
    double eta = 0.0;
    bool oscillation = false;
    std::string kernel;
    double epsilon = 0.0;  // truncation radius; 0 selects 2 * grid spacing
    std::function<double(const Point&, double)> symbol;  // commutator coefficient a(x, t)
};

std::vector<std::string> registered_operators();

/// Embedding verification: ratio of the target norm to the source norm for
/// every corpus function across the schedule. The corpus-spec overloads build
/// the corpus over the domain box; the explicit-corpus overloads take
/// pre-built functions (and reject double_corpus, which needs the spec).
RatioReport verify_embedding(const std::string& name, const CorpusSpec& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MorreyParams& source, const MorreyParams& target);
RatioReport verify_embedding(const std::string& name,
                             const std::vector<CorpusFunction>& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MorreyParams& source, const MorreyParams& target);
RatioReport verify_embedding(const std::string& name, const CorpusSpec& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MixedParams& source, const MixedParams& target);
RatioReport verify_embedding(const std::string& name,
                             const std::vector<CorpusFunction>& corpus,
                             const VerifyDomain& dom, const VerifySchedule& sched,
                             const MixedParams& source, const MixedParams& target);

/// Operator-boundedness verification in the mixed norm; fields are sampled on
/// space-time grids and the named operator forms the numerator (and, for the
/// paired protocols, the denominator transform).
RatioReport verify_operator_bound(const std::string& name, const CorpusSpec& corpus,
                                  const VerifyDomain& dom, const VerifySchedule& sched,
                                  const OperatorBinding& op, const MixedParams& source,
                                  const MixedParams& target);
RatioReport verify_operator_bound(const std::string& name,
                                  const std::vector<CorpusFunction>& corpus,
                                  const VerifyDomain& dom, const VerifySchedule& sched,
                                  const OperatorBinding& op, const MixedParams& source,
                                  const MixedParams& target);

/// Shrinking-ball commutator trend: at each radius r of the sweep, every
/// corpus function is restricted to the ball B_r(center) (zeroed outside),
/// the commutator is formed from the restricted input, its output is
/// restricted to the same ball, and the max ratio |C restricted| / |f
/// restricted| over the corpus is recorded. For a coefficient with vanishing
/// mean oscillation the local oscillation of the coefficient controls the
/// ratio, so the column is expected to be nonincreasing as r shrinks.
struct CommutatorTrend {
    std::string name;
    Point center{};
    std::vector<double> radii;       // strictly decreasing sweep
    std::vector<double> max_ratios;  // one per radius, over nondegenerate rows
    std::vector<RatioRow> rows;      // function_id carries ":r=<radius>"

    /// True when each successive max ratio is at most `slack` times its
    /// predecessor (slack 1.1 = nonincreasing within 10%).
    bool nonincreasing(double slack) const;
    std::string csv() const;
};
CommutatorTrend commutator_vmo_trend(const std::string& name, const CorpusSpec& corpus,
                                     const VerifyDomain& dom, int resolution, int time_steps,
                                     const OperatorBinding& op, const MixedParams& params,
                                     const Point& center, const std::vector<double>& radii);
CommutatorTrend commutator_vmo_trend(const std::string& name,
                                     const std::vector<CorpusFunction>& corpus,
                                     const VerifyDomain& dom, int resolution, int time_steps,
                                     const OperatorBinding& op, const MixedParams& params,
                                     const Point& center, const std::vector<double>& radii);

}  // namespace mml
