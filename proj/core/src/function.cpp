#include "lip/function.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lip {

namespace {

constexpr double kJunctionTol = 1e-9;

void check_unit_interval(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("eval: point " + std::to_string(x) +
                                    " outside [0,1]");
}

} // namespace

double Segment::eval(double x, double alpha) const {
    double y = v0 + m * (x - a);
    for (const ArcTerm& t : arcs)
        y += t.coeff * (hpow(std::fabs(x - t.anchor), alpha) - t.base);
    return y;
}

double Segment::chord(double x, double y, double alpha) const {
    double d = m * (y - x);
    for (const ArcTerm& t : arcs)
        d += t.coeff * (hpow(std::fabs(y - t.anchor), alpha) -
                        hpow(std::fabs(x - t.anchor), alpha));
    return d;
}

PiecewiseFn::PiecewiseFn(Alpha alpha, std::vector<Segment> segments, bool based)
    : alpha_(alpha), based_(based), segments_(std::move(segments)) {
    validate();
}

std::size_t PiecewiseFn::segment_index(double x) const {
    check_unit_interval(x);
    // First segment whose right endpoint lies strictly beyond x; the last
    // segment is closed at 1.
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (x < segments_[mid].b)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double PiecewiseFn::eval(double x) const {
    const Segment& s = segments_[segment_index(x)];
    return s.eval(x, alpha_.value());
}

double PiecewiseFn::chord(double x, double y) const {
    std::size_t i = segment_index(x), j = segment_index(y);
    if (i == j) return segments_[i].chord(x, y, alpha_.value());
    // A point sitting exactly on the shared junction belongs to either side.
    if (j == i + 1 && y == segments_[i].b)
        return segments_[i].chord(x, y, alpha_.value());
    if (i == j + 1 && x == segments_[j].b)
        return segments_[j].chord(x, y, alpha_.value());
    return eval(y) - eval(x);
}

PiecewiseFn PiecewiseFn::scaled(double c) const {
    std::vector<Segment> segs = segments_;
    for (Segment& s : segs) {
        s.v0 *= c;
        s.m *= c;
        for (ArcTerm& t : s.arcs) t.coeff *= c;
    }
    return PiecewiseFn(alpha_, std::move(segs), based_);
}

void PiecewiseFn::validate() const {
    if (segments_.empty())
        throw std::invalid_argument("PiecewiseFn: no segments");
    if (segments_.front().a != 0.0 || segments_.back().b != 1.0)
        throw std::invalid_argument("PiecewiseFn: segments must tile [0,1]");
    const double alpha = alpha_.value();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!(s.a < s.b))
            throw std::invalid_argument("PiecewiseFn: empty segment");
        for (const ArcTerm& t : s.arcs)
            if (t.anchor > s.a && t.anchor < s.b)
                throw std::invalid_argument(
                    "PiecewiseFn: arc anchor strictly inside a segment");
        if (i + 1 < segments_.size()) {
            const Segment& n = segments_[i + 1];
            if (s.b != n.a)
                throw std::invalid_argument("PiecewiseFn: segments not adjacent");
            double left = s.eval(s.b, alpha);
            if (std::fabs(left - n.v0) > kJunctionTol * std::max(1.0, std::fabs(left)))
                throw std::invalid_argument("PiecewiseFn: discontinuous at junction x=" +
                                            std::to_string(s.b));
        }
    }
    if (based_ && segments_.front().v0 != 0.0)
        throw std::invalid_argument("PiecewiseFn: based function must vanish at 0");
}

PiecewiseFn PiecewiseFn::zero(Alpha alpha) {
    return PiecewiseFn(alpha, {Segment{0.0, 1.0, 0.0, 0.0, {}}}, true);
}

PiecewiseFn PiecewiseFn::power_arc(Alpha alpha) {
    Segment s{0.0, 1.0, 0.0, 0.0, {ArcTerm{0.0, 1.0, 0.0}}};
    return PiecewiseFn(alpha, {s}, true);
}

PiecewiseFn PiecewiseFn::two_arc_tent(Alpha alpha) {
    double peak = hpow(0.5, alpha.value());
    Segment rise{0.0, 0.5, 0.0, 0.0, {ArcTerm{0.0, 1.0, 0.0}}};
    Segment fall{0.5, 1.0, peak, 0.0, {ArcTerm{1.0, 1.0, peak}}};
    return PiecewiseFn(alpha, {rise, fall}, true);
}

namespace {

// Restriction of segment s to a new left endpoint at: same function, arc
// bases recomputed so that eval(at) == value computed from s.
Segment rebase(const Segment& s, double at, double to, double value, double alpha) {
    Segment out;
    out.a = at;
    out.b = to;
    out.v0 = value;
    out.m = s.m;
    out.arcs = s.arcs;
    for (ArcTerm& t : out.arcs) t.base = hpow(std::fabs(at - t.anchor), alpha);
    return out;
}

} // namespace

PiecewiseFn operator+(const PiecewiseFn& f, const PiecewiseFn& g) {
    if (f.alpha() != g.alpha())
        throw std::invalid_argument("operator+: mismatched alpha");
    const double alpha = f.alpha().value();

    std::vector<double> cuts;
    for (const Segment& s : f.segments()) cuts.push_back(s.a);
    for (const Segment& s : g.segments()) cuts.push_back(s.a);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Segment> segs;
    segs.reserve(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        const Segment& sf = f.segments()[f.segment_index(a)];
        const Segment& sg = g.segments()[g.segment_index(a)];
        Segment cell = rebase(sf, a, b, f.eval(a) + g.eval(a), alpha);
        cell.m += sg.m;
        for (const ArcTerm& t : sg.arcs) {
            ArcTerm u = t;
            u.base = hpow(std::fabs(a - t.anchor), alpha);
            cell.arcs.push_back(u);
        }
        // Merge terms sharing an anchor; exact cancellation drops the term.
        std::map<double, std::pair<double, double>> merged; // anchor -> (coeff, base)
        for (const ArcTerm& t : cell.arcs) {
            auto [it, fresh] = merged.try_emplace(t.anchor, t.coeff, t.base);
            if (!fresh) it->second.first += t.coeff;
        }
        cell.arcs.clear();
        for (const auto& [anchor, cb] : merged)
            if (cb.first != 0.0) cell.arcs.push_back(ArcTerm{anchor, cb.first, cb.second});
        segs.push_back(std::move(cell));
    }
    return PiecewiseFn(f.alpha(), std::move(segs), f.based() && g.based());
}

PiecewiseFn operator-(const PiecewiseFn& f, const PiecewiseFn& g) {
    return f + g.scaled(-1.0);
}

Polygon::Polygon(Alpha alpha, std::vector<PolygonNode> nodes, bool based)
    : alpha_(alpha), based_(based), nodes_(std::move(nodes)) {
    if (nodes_.size() < 2)
        throw std::invalid_argument("Polygon: needs at least two nodes");
    if (nodes_.front().x != 0.0 || nodes_.back().x != 1.0)
        throw std::invalid_argument("Polygon: nodes must span [0,1]");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i].x < nodes_[i + 1].x))
            throw std::invalid_argument("Polygon: abscissae must strictly increase");
    if (based_ && nodes_.front().y != 0.0)
        throw std::invalid_argument("Polygon: based polygon must have y(0) = 0");
}

double Polygon::eval(double x) const {
    check_unit_interval(x);
    std::size_t lo = 0, hi = nodes_.size() - 1;
    while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (x < nodes_[mid].x)
            hi = mid;
        else
            lo = mid;
    }
    if (x == nodes_[lo].x) return nodes_[lo].y;
    if (x == nodes_[hi].x) return nodes_[hi].y;
    // Same slope arithmetic as the PiecewiseFn form, so both paths agree.
    double m = (nodes_[hi].y - nodes_[lo].y) / (nodes_[hi].x - nodes_[lo].x);
    return nodes_[lo].y + m * (x - nodes_[lo].x);
}

PiecewiseFn Polygon::fn() const {
    std::vector<Segment> segs;
    segs.reserve(nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        Segment s;
        s.a = nodes_[i].x;
        s.b = nodes_[i + 1].x;
        s.v0 = nodes_[i].y;
        s.m = (nodes_[i + 1].y - nodes_[i].y) / (nodes_[i + 1].x - nodes_[i].x);
        segs.push_back(s);
    }
    return PiecewiseFn(alpha_, std::move(segs), based_);
}

Polygon Polygon::identity(Alpha alpha) {
    return Polygon(alpha, {{0.0, 0.0}, {1.0, 1.0}});
}

} // namespace lip
