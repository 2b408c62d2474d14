#pragma once

#include <stdexcept>
#include <vector>

#include "lip/function.hpp"

namespace lip {

/// Unique root in (0, 1/2) of  2 y^alpha - 1 = (1 - 2y)^alpha, the cut ratio
/// of the self-similar almond construction. Bisection; |residual| <= tol.
double solve_k(Alpha alpha, double tol);

/// Cut ratio and the two derived constants of the construction: the common
/// value of the minima-sequence slopes from 0, and the excess constant of the
/// polygon-interpolation failure certificate.
struct AlmondParams {
    Alpha alpha;
    double k = 0.0;
    double liminf_slope = 0.0;
    double failure_c = 0.0;

    static AlmondParams make(Alpha alpha);
};

enum class NodeKind { Top, Bottom };

/// A local extremum of the limit function, fixed from the stage it first
/// appears in onward.
struct AlmondNode {
    double x = 0.0;
    double value = 0.0;
    NodeKind kind = NodeKind::Top;
    int depth = 0;
};

/// One stage of the recursive construction: the upper and lower envelopes of
/// the 3^depth almonds, and all extremum nodes created so far (sorted by x).
struct AlmondStage {
    AlmondParams params;
    int depth = 0;
    PiecewiseFn upper;
    PiecewiseFn lower;
    std::vector<AlmondNode> nodes;

    /// Exact value of sup (upper - lower): (max leaf width)^alpha (2^{1-alpha} - 1).
    double sup_gap() const;
};

/// Builds the stage of the given depth. Throws when 2 * 3^depth exceeds the
/// segment budget.
AlmondStage build_almond(Alpha alpha, int depth);

struct LimsupRow {
    int j = 0;
    double radius = 0.0;
    double max_slope = 0.0;
    double running_max = 0.0;
};
struct LimsupReport {
    double x = 0.0;
    std::vector<LimsupRow> rows;
};
/// Max node-pair slopes from a recorded node x to opposite-kind nodes within
/// geometrically shrinking radii 2^-j, j = 1..scales. The running max
/// approaches 1.
LimsupReport limsup_diagnostic(const AlmondStage& stage, double x, int scales);

struct LiminfRow {
    int j = 0;
    double s_j = 0.0;
    double slope = 0.0;
    double deviation = 0.0;
};
struct LiminfReport {
    double expected = 0.0;
    std::vector<LiminfRow> rows;
};
/// Slopes from 0 to the minima s_j = (1-k) k^j, each equal to
/// (1 - k^alpha) / (1 - k)^alpha. Only x = 0 is supported; other nodes reduce
/// to this case by self-similarity.
LiminfReport liminf_diagnostic(const AlmondStage& stage, double x);

/// Raised when the crossing scale is finer than the built stage resolves;
/// carries the depth that would suffice.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(int needed)
        : std::runtime_error("almond stage too shallow; need depth >= " +
                             std::to_string(needed)),
          needed_depth(needed) {}
    int needed_depth;
};

struct PolygonFailureCertificate {
    double x_tilde = 0.0;
    int scale = 0;        // x_tilde in [k^{scale+1}, k^scale]
    double t = 0.0;       // k^scale
    double r_prime = 0.0; // witness pair abscissae
    double s_prime = 0.0;
    double h_pair_slope = 0.0; // signed slope of h between them (= -1)
    double witness_slope = 0.0;
    double threshold = 0.0; // 1 + failure_c
    double g_slope = 0.0;
    double g_slope_bound = 0.0; // the steepness the construction forces on g
    bool pass = false;
};

/// Interpolates the stage's upper function in the partition nodes, finds the
/// first positive crossing x_tilde and produces the witness pair on which the
/// interpolant is too steep: slope(h - g) >= 1 + failure_c.
PolygonFailureCertificate polygon_failure_certificate(const AlmondStage& stage,
                                                      const std::vector<double>& partition);

} // namespace lip
