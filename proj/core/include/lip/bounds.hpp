#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lip/function.hpp"

namespace lip {

/// Sampled pair (or point, with y unused) witnessing a lower bound.
struct PairWitness {
    double x = 0.0;
    double y = 0.0;
};

/// Certified enclosure of a supremum. `lower` is attained by a sampled
/// witness; `upper` is a rigorous bound (modulo the global 1e-9 floating
/// slack). `converged` is false when the refinement budget ran out before
/// upper - lower <= tol.
struct CertifiedBound {
    double lower = 0.0;
    double upper = 0.0;
    double tol = 0.0;
    bool converged = false;
    std::optional<PairWitness> witness;

    double gap() const { return upper - lower; }
};

/// Slack added to every certified upper bound in place of full interval
/// arithmetic over the binary64 substrate.
inline constexpr double kUpperSlack = 1e-9;

inline constexpr std::size_t kDefaultBudget = 400000;

/// Hölder difference quotient |f(x)-f(y)| / |x-y|^alpha. Throws on x == y.
double slope(const PiecewiseFn& f, double x, double y);

/// The finitely many critical points of an exact representation: anchors of
/// alpha-power terms with nonzero coefficient sitting at a segment endpoint.
/// Every other point of [0,1] is noncritical.
std::vector<double> critical_points(const PiecewiseFn& f);

bool is_critical(const PiecewiseFn& f, double x);

/// Certified enclosure of sup |f| over [0,1].
CertifiedBound sup_norm(const PiecewiseFn& f, double tol,
                        std::size_t budget = kDefaultBudget);

/// Certified enclosure of sup { slope(f,x,y) : d_lo <= |x-y| <= d_hi } with
/// the band measured in the base distance |x-y|.
CertifiedBound band_slope(const PiecewiseFn& f, double d_lo, double d_hi,
                          double tol, std::size_t budget = kDefaultBudget);

/// Certified enclosure of the Hölder seminorm L(f) = sup slope(f,x,y).
CertifiedBound holder_seminorm(const PiecewiseFn& f, double tol,
                               std::size_t budget = kDefaultBudget);

/// Enclosure of the Lipschitz-space norm max(sup_norm, holder_seminorm).
CertifiedBound lip_norm(const PiecewiseFn& f, double tol,
                        std::size_t budget = kDefaultBudget);

} // namespace lip
