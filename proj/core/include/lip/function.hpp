#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lip {

/// Hölder exponent, restricted to the open interval (0,1).
class Alpha {
  public:
    explicit Alpha(double value) : value_(value) {
        if (!(value > 0.0 && value < 1.0))
            throw std::invalid_argument("Alpha: exponent must lie in (0,1), got " +
                                        std::to_string(value));
    }
    double value() const { return value_; }

    friend bool operator==(Alpha a, Alpha b) { return a.value_ == b.value_; }
    friend bool operator!=(Alpha a, Alpha b) { return !(a == b); }

  private:
    double value_;
};

/// d^alpha for d >= 0. Routes alpha == 1/2 through sqrt so that exactly
/// representable results (dyadic d with even exponent) stay exact.
inline double hpow(double d, double alpha) {
    if (d <= 0.0) return 0.0;
    if (alpha == 0.5) return std::sqrt(d);
    return std::pow(d, alpha);
}

/// One signed power term  coeff * |x - anchor|^alpha  of a segment.
/// `base` caches |a - anchor|^alpha for the owning segment's left endpoint a,
/// so that evaluation is anchored at a and exact there.
struct ArcTerm {
    double anchor = 0.0;
    double coeff = 0.0;
    double base = 0.0;
};

/// A piece of a function on [a,b]:
///   f(x) = v0 + m*(x - a) + sum_j coeff_j * (|x - anchor_j|^alpha - base_j).
/// Anchors never lie strictly inside (a,b); an anchor equal to a or b with a
/// nonzero coefficient is what makes a point "critical".
struct Segment {
    double a = 0.0;
    double b = 1.0;
    double v0 = 0.0;
    double m = 0.0;
    std::vector<ArcTerm> arcs;

    double eval(double x, double alpha) const;
    /// f(y) - f(x) for a <= x,y <= b, computed without going through v0.
    double chord(double x, double y, double alpha) const;
    bool is_affine() const { return arcs.empty(); }
};

/// An exact function on [0,1]: ordered segments tiling [0,1], continuous at
/// junctions. Closed under +, -, scalar multiplication and restriction, which
/// is what the h + f_i - g style constructions need.
class PiecewiseFn {
  public:
    PiecewiseFn(Alpha alpha, std::vector<Segment> segments, bool based);

    double eval(double x) const;
    /// f(y) - f(x); uses the chord form when both points share a segment.
    double chord(double x, double y) const;

    Alpha alpha() const { return alpha_; }
    bool based() const { return based_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Index of the segment owning x (half-open [a,b), last segment closed).
    std::size_t segment_index(double x) const;

    PiecewiseFn scaled(double c) const;
    PiecewiseFn operator-() const { return scaled(-1.0); }

    /// Checks tiling, junction continuity and the based flag; throws on
    /// violation. Continuity is tested by endpoint evaluation.
    void validate() const;

    static PiecewiseFn zero(Alpha alpha);
    /// x -> x^alpha (single arc anchored at 0).
    static PiecewiseFn power_arc(Alpha alpha);
    /// x -> min(x^alpha, (1-x)^alpha): two arcs, critical at both endpoints.
    static PiecewiseFn two_arc_tent(Alpha alpha);

    friend PiecewiseFn operator+(const PiecewiseFn& f, const PiecewiseFn& g);
    friend PiecewiseFn operator-(const PiecewiseFn& f, const PiecewiseFn& g);

  private:
    Alpha alpha_;
    bool based_;
    std::vector<Segment> segments_;
};

struct PolygonNode {
    double x = 0.0;
    double y = 0.0;
};

/// Polygonal function given by its nodes; x_0 = 0, x_last = 1, strictly
/// increasing abscissae. Based polygons have y_0 = 0.
class Polygon {
  public:
    Polygon(Alpha alpha, std::vector<PolygonNode> nodes, bool based = true);

    double eval(double x) const;
    const std::vector<PolygonNode>& nodes() const { return nodes_; }
    Alpha alpha() const { return alpha_; }
    bool based() const { return based_; }

    PiecewiseFn fn() const;

    static Polygon identity(Alpha alpha);

  private:
    Alpha alpha_;
    bool based_;
    std::vector<PolygonNode> nodes_;
};

} // namespace lip
