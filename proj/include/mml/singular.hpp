#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mml/grid.hpp"
#include "mml/kernels.hpp"
#include "mml/norms.hpp"

namespace mml {

/// Strictly decreasing truncation radii for the limit of the truncated
/// operators. Radii must stay above the grid spacing of the field they are
/// applied to; that check happens at application time.
struct EpsilonSchedule {
    std::vector<double> epsilons;

    static EpsilonSchedule from_list(std::vector<double> epsilons);
    static EpsilonSchedule geometric(double start, double factor, int count);

    std::size_t size() const { return epsilons.size(); }
    double operator[](std::size_t i) const { return epsilons[i]; }
    double smallest() const { return epsilons.back(); }
};

/// K_eps f(x) = sum over cells y with dist(x - y) > eps of k(x, x - y) f(y)
/// times the cell measure. Euclidean kernels use |x - y| and apply slice-wise
/// to space-time fields; parabolic kernels use the anisotropic metric over
/// space-time cells. A cell straddling the eps-sphere counts iff its center
/// distance exceeds eps. The kernel must pass validation first.
SampledField truncated_singular_integral(const SampledField& f, const KernelDescriptor& k,
                                         double eps);

/// C_eps[a, f](x) = sum over cells y with dist(x - y) > eps of
/// k(x, x - y) (a(x) - a(y)) f(y) times the cell measure.
SampledField commutator(const SampledField& a, const SampledField& f,
                        const KernelDescriptor& k, double eps);

/// Distances between consecutive truncations and the convergence verdict:
/// converged means the distances decrease strictly and end below tolerance.
struct ConvergenceReport {
    std::vector<double> epsilons;
    std::vector<double> distances;
    double tolerance = 0.0;
    bool converged = false;
};

/// Runs the family at every schedule radius, measures consecutive differences
/// in the mixed norm, and returns the field at the smallest radius.
std::pair<SampledField, ConvergenceReport> epsilon_limit(
    const std::function<SampledField(double)>& family, const EpsilonSchedule& schedule,
    const MixedParams& norm, const RadiusSet& space_radii, const RadiusSet& time_radii,
    double tolerance);

}  // namespace mml
