#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mml/corpus.hpp"
#include "mml/grid.hpp"
#include "mml/params.hpp"
#include "mml/verify.hpp"

namespace mml {

/// Symmetric second-order coefficient matrix a_ij sampled on a space-time
/// grid, together with the claimed two-sided ellipticity constant nu:
///   nu^-1 |xi|^2 <= sum a_ij xi_i xi_j <= nu |xi|^2.
struct CoefficientField {
    int n = 0;
    double nu = 0.0;
    std::vector<SampledField> entries;  // row-major (i*n + j), each space-time

    const SampledField& at(int i, int j) const { return entries[std::size_t(i * n + j)]; }
    SampledField& at(int i, int j) { return entries[std::size_t(i * n + j)]; }
};

/// Samples a coefficient matrix from a per-entry closure.
CoefficientField make_coefficients(
    int n, double nu, const GridSpec& grid, const TimeAxis& time,
    const std::function<double(int, int, const Point&, double)>& a);

/// Named coefficient families: "identity" (constant identity matrix),
/// "smooth-perturbation" (identity plus smooth trigonometric perturbations,
/// symmetric off-diagonal terms included), "mollified-jump" (diagonal jump
/// across the first axis, mollified at a fixed scale). Unknown names throw
/// invalid_coefficients.
CoefficientField coefficient_family(const std::string& name, const GridSpec& grid,
                                    const TimeAxis& time);
std::vector<std::string> coefficient_families();

/// Validation report: exact symmetry defect, empirical ellipticity range of
/// the quadratic form over random unit directions at every sample, and the
/// vanishing-mean-oscillation modulus of each entry over a radius sweep.
struct CoefficientReport {
    double symmetry_defect = 0.0;  // max |a_ij - a_ji|; throw when > 0
    double min_form = 0.0;         // min over samples and directions
    double max_form = 0.0;
    bool elliptic = false;         // range within [1/nu, nu] up to 1e-12
    std::vector<double> vmo_radii;
    std::vector<double> vmo_moduli;  // max over entries and slices per radius
};
CoefficientReport validate_coefficients(const CoefficientField& a,
                                        const std::vector<double>& vmo_sweep,
                                        int directions_per_sample = 8,
                                        std::uint64_t seed = 0);

/// A sampled function with its centered-difference derivatives. Stencils use
/// zero extension, which is exact because construction requires the support
/// to stay two cells inside the spatial box and two slices inside the time
/// interval (support_violation otherwise).
struct StrongSolutionSample {
    SampledField u;
    std::vector<SampledField> gradient;  // n entries
    std::vector<SampledField> hessian;   // n*n entries, row-major
    SampledField u_t;
    std::vector<char> support;  // 1 where u != 0, per space-time sample

    const SampledField& d1(int i) const { return gradient[std::size_t(i)]; }
    const SampledField& d2(int i, int j) const {
        return hessian[std::size_t(i * u.grid.n + j)];
    }
};
StrongSolutionSample make_solution_sample(const SampledField& u);

/// Named manufactured-solution families supported in the ball B_r(center)
/// of R^n and, in time, inside the middle half of (0, t_end):
///   "separable-bump"   — radial smooth bump times a smooth time bell
///   "oscillating-bump" — the same with an extra time oscillation
/// Every member vanishes outside the ball and outside [t_end/4, 3 t_end/4],
/// so sampled members pass the support checks whenever the grid leaves two
/// cells of margin around the ball and the time axis has at least 8 steps.
std::vector<CorpusFunction> solution_family(const std::string& name, int count,
                                            std::uint64_t seed, int n, const Point& center,
                                            double r, double t_end);
std::vector<std::string> solution_families();

/// Lu = u_t - sum_ij a_ij D_ij u, pointwise. Throws incompatible_fields on
/// grid or time mismatch.
SampledField apply_L(const CoefficientField& a, const StrongSolutionSample& u);

/// Constant-coefficient matrix frozen at one sample, with its inverse, the
/// determinant-based Gaussian normalizer, and the configurable prefactor
/// exponent E of (4 pi tau)^E.
struct FundamentalSolutionParams {
    int n = 0;
    std::array<std::array<double, kMaxDim>, kMaxDim> matrix{};   // a_ij at the base point
    std::array<std::array<double, kMaxDim>, kMaxDim> inverse{};  // A_ij
    double det = 0.0;
    double normalizer = 0.0;          // 1/sqrt(det)
    double prefactor_exponent = 0.0;  // E
};

/// Printed-form default E = (1-n)/2 and the classical heat-kernel E = -n/2.
/// The two conventions disagree for n >= 2; the representation identity holds
/// under the classical one (see representation_rhs).
double default_prefactor_exponent(int n);
double classical_prefactor_exponent(int n);

FundamentalSolutionParams freeze_coefficients(const CoefficientField& a, const Index& cell,
                                              int t_slice, double prefactor_exponent);

/// Gamma(zeta, tau) = (4 pi tau)^E / sqrt(det) * exp(-A_ij zeta_i zeta_j / (4 tau)),
/// zero for tau <= 0.
double fundamental_solution(const FundamentalSolutionParams& params, const Point& zeta,
                            double tau);
/// First and second zeta-derivatives; zero for tau <= 0.
std::vector<double> gamma_first_derivatives(const FundamentalSolutionParams& params,
                                            const Point& zeta, double tau);
std::vector<double> gamma_second_derivatives(const FundamentalSolutionParams& params,
                                             const Point& zeta, double tau);

/// Surface integrals J_ij = integral over the unit sphere of R^{n+1} of
/// y_i * Gamma_j(y', y_t) with Euclidean measure and outward normal; the jump
/// term of the representation formula. Gauss-Legendre x uniform product
/// quadrature of the stated polar order.
std::vector<double> representation_jump(const FundamentalSolutionParams& params,
                                        int quadrature_order);

/// Three-term right-hand side of the local representation formula for D_ij u
/// at truncation eps: for each (i, j),
///   R_ij(x) = sum_{rho(x-y) > eps} Gamma_ij(x; x-y)
///                 * [Lu(y) + sum_hk (a_hk(y) - a_hk(x)) D_hk u(y)] * vol
///             + Lu(x) * J_ij(x),
/// with the coefficients frozen at x for the kernel and the jump. The NaN
/// default for the prefactor exponent selects the classical convention, the
/// one under which mass conservation makes the truncation error vanish with
/// eps; pass default_prefactor_exponent(n) explicitly to observe the other
/// convention drift. Throws truncation_below_grid when eps < grid spacing.
struct RepresentationResult {
    int n = 0;
    std::vector<SampledField> entries;  // row-major (i*n + j)
    const SampledField& at(int i, int j) const { return entries[std::size_t(i * n + j)]; }
};
RepresentationResult representation_rhs(
    const StrongSolutionSample& u, const CoefficientField& a, double eps,
    int quadrature_order,
    double prefactor_exponent = std::numeric_limits<double>::quiet_NaN());

/// A-priori ratio protocol: for each sweep radius r, the named family is
/// instantiated inside B_r(center), and for every member the ratios
/// |D_ij u| / |Lu| (one row per Hessian entry) and |u_t| / |Lu| are computed
/// in the mixed norm across the refinement schedule. Coefficients are
/// validated (symmetry, ellipticity) at every resolution before use.
struct AprioriReport {
    RatioReport hessian;          // rows "id:D<i><j>:r=<radius>"
    RatioReport time_derivative;  // rows "id:Dt:r=<radius>"
};
AprioriReport apriori_check(
    const std::string& name,
    const std::function<std::vector<CorpusFunction>(double)>& family_for_radius,
    const std::function<CoefficientField(const GridSpec&, const TimeAxis&)>& coefficients,
    const VerifyDomain& dom, const VerifySchedule& sched, const MixedParams& params,
    const Point& center, const std::vector<double>& radii);

}  // namespace mml
