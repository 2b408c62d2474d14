#include "lip/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace lip {

double slope(const PiecewiseFn& f, double x, double y) {
    if (x == y) throw std::invalid_argument("slope: degenerate pair x == y");
    double num = std::fabs(f.eval(x) - f.eval(y));
    return num / hpow(std::fabs(x - y), f.alpha().value());
}

std::vector<double> critical_points(const PiecewiseFn& f) {
    std::vector<double> pts;
    for (const Segment& s : f.segments())
        for (const ArcTerm& t : s.arcs)
            if (t.coeff != 0.0 && (t.anchor == s.a || t.anchor == s.b))
                pts.push_back(t.anchor);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

bool is_critical(const PiecewiseFn& f, double x) {
    for (double p : critical_points(f))
        if (p == x) return true;
    return false;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ValueRange {
    double lo = kInf;
    double hi = -kInf;
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void merge(const ValueRange& o) {
        lo = std::min(lo, o.lo);
        hi = std::max(hi, o.hi);
    }
};

/// Per-run view of a PiecewiseFn with cached per-segment ranges, a range
/// segment tree, and the local slope-bound machinery of the branch-and-bound.
class FnView {
  public:
    explicit FnView(const PiecewiseFn& f)
        : f_(f), alpha_(f.alpha().value()), beta_(1.0 - f.alpha().value()),
          qexp_(1.0 / (1.0 - f.alpha().value())) {
        const auto& segs = f.segments();
        full_range_.resize(segs.size());
        prefix_q_.assign(segs.size() + 1, 0.0);
        for (std::size_t i = 0; i < segs.size(); ++i) {
            full_range_[i] = segment_range(segs[i], segs[i].a, segs[i].b);
            double fb = piece_slope_bound(segs[i], segs[i].a, segs[i].b,
                                          segs[i].b - segs[i].a);
            prefix_q_[i + 1] = prefix_q_[i] + std::pow(fb, qexp_);
        }
        build_tree();
    }

    const PiecewiseFn& fn() const { return f_; }
    double alpha() const { return alpha_; }
    double eval(double x) const { return f_.eval(x); }

    /// Enclosure of { f(x) : u <= x <= v }.
    ValueRange range_on(double u, double v) const {
        std::size_t i = f_.segment_index(u);
        std::size_t j = f_.segment_index(v);
        const auto& segs = f_.segments();
        if (i == j) return segment_range(segs[i], u, v);
        ValueRange r = segment_range(segs[i], u, segs[i].b);
        r.merge(segment_range(segs[j], segs[j].a, v));
        if (i + 1 < j) r.merge(tree_query(i + 1, j - 1));
        return r;
    }

    /// B with |f(x)-f(y)| <= B |x-y|^alpha for all x,y in [u,v] with
    /// |x-y| <= dcap. Splits at junctions; pieces recombine through the dual
    /// exponent q = 1/(1-alpha), and a single junction between opposed
    /// monotone pieces needs only the max of the two piece bounds.
    double span_slope_bound(double u, double v, double dcap) const {
        std::size_t i = f_.segment_index(u);
        std::size_t j = f_.segment_index(v);
        const auto& segs = f_.segments();
        if (i == j) return piece_slope_bound(segs[i], u, v, dcap);
        double bl = piece_slope_bound(segs[i], u, segs[i].b, dcap);
        double br = piece_slope_bound(segs[j], segs[j].a, v, dcap);
        if (j == i + 1) {
            int dl = monotone_dir(segs[i], u, segs[i].b);
            int dr = monotone_dir(segs[j], segs[j].a, v);
            if (dl * dr == -1) return std::max(bl, br);
        }
        double q = std::pow(bl, qexp_) + std::pow(br, qexp_);
        q += prefix_q_[j] - prefix_q_[i + 1];
        return std::pow(q, 1.0 / qexp_);
    }

    /// Anchors (with nonzero coefficient) inside [u,v], for sampling.
    void anchors_in(double u, double v, std::vector<double>& out) const {
        u = std::max(u, 0.0);
        v = std::min(v, 1.0);
        if (u > v) return;
        const auto& segs = f_.segments();
        for (std::size_t i = f_.segment_index(u); i < segs.size(); ++i) {
            const Segment& s = segs[i];
            if (s.a > v) break;
            for (const ArcTerm& t : s.arcs)
                if (t.coeff != 0.0 && (t.anchor == s.a || t.anchor == s.b) &&
                    t.anchor >= u && t.anchor <= v)
                    out.push_back(t.anchor);
        }
    }

  private:
    double piece_slope_bound(const Segment& s, double u, double v, double dcap) const {
        double d = std::min(dcap, v - u);
        if (d <= 0.0) return 0.0;
        double dpow = std::pow(d, beta_);
        double bound = std::fabs(s.m) * dpow;
        for (const ArcTerm& t : s.arcs) {
            double c = std::fabs(t.coeff);
            if (c == 0.0) continue;
            double dist = std::max({0.0, u - t.anchor, t.anchor - v});
            if (dist > 0.0) {
                double deriv = c * alpha_ / std::pow(dist, beta_);
                bound += std::min(c, deriv * dpow);
            } else {
                bound += c;
            }
        }
        return bound;
    }

    // +1 / -1 when f is provably monotone on [u,v] within segment s, else 0.
    // The derivative of each power term keeps a fixed sign there; interval
    // arithmetic over the term magnitudes decides.
    int monotone_dir(const Segment& s, double u, double v) const {
        double lo = s.m, hi = s.m;
        for (const ArcTerm& t : s.arcs) {
            if (t.coeff == 0.0) continue;
            double side = (t.anchor <= u) ? 1.0 : -1.0;
            double near = std::max({0.0, u - t.anchor, t.anchor - v});
            double far = std::max(std::fabs(u - t.anchor), std::fabs(v - t.anchor));
            double c = std::fabs(t.coeff);
            double mag_hi = near > 0.0 ? c * alpha_ / std::pow(near, beta_) : kInf;
            double mag_lo = far > 0.0 ? c * alpha_ / std::pow(far, beta_) : 0.0;
            if (t.coeff * side > 0.0) {
                lo += mag_lo;
                hi += mag_hi;
            } else {
                lo -= mag_hi;
                hi -= mag_lo;
            }
        }
        if (lo >= 0.0) return +1;
        if (hi <= 0.0) return -1;
        return 0;
    }

    // Exact range for segments with at most one arc term (closed-form interior
    // extremum); conservative term-wise interval sum otherwise.
    ValueRange segment_range(const Segment& s, double u, double v) const {
        ValueRange r;
        r.include(s.eval(u, alpha_));
        r.include(s.eval(v, alpha_));
        if (s.arcs.size() == 1) {
            const ArcTerm& t = s.arcs.front();
            if (s.m != 0.0 && t.coeff != 0.0) {
                double side = (t.anchor <= u) ? 1.0 : -1.0;
                double ratio = -s.m / (t.coeff * alpha_ * side);
                if (ratio > 0.0) {
                    double off = std::pow(ratio, 1.0 / (alpha_ - 1.0));
                    double xs = t.anchor + side * off;
                    if (xs > u && xs < v) r.include(s.eval(xs, alpha_));
                }
            }
            return r;
        }
        if (s.arcs.size() > 1) {
            double lo = std::min(s.m * (u - s.a), s.m * (v - s.a));
            double hi = std::max(s.m * (u - s.a), s.m * (v - s.a));
            for (const ArcTerm& t : s.arcs) {
                double pu = t.coeff * (hpow(std::fabs(u - t.anchor), alpha_) - t.base);
                double pv = t.coeff * (hpow(std::fabs(v - t.anchor), alpha_) - t.base);
                lo += std::min(pu, pv);
                hi += std::max(pu, pv);
            }
            r.include(s.v0 + lo);
            r.include(s.v0 + hi);
        }
        return r;
    }

    void build_tree() {
        n_ = full_range_.size();
        tree_.assign(2 * n_, ValueRange{});
        for (std::size_t i = 0; i < n_; ++i) tree_[n_ + i] = full_range_[i];
        for (std::size_t i = n_; i-- > 1;) {
            tree_[i] = tree_[2 * i];
            tree_[i].merge(tree_[2 * i + 1]);
        }
    }

    ValueRange tree_query(std::size_t l, std::size_t r) const { // inclusive
        ValueRange res;
        for (l += n_, r += n_ + 1; l < r; l >>= 1, r >>= 1) {
            if (l & 1) res.merge(tree_[l++]);
            if (r & 1) res.merge(tree_[--r]);
        }
        return res;
    }

    const PiecewiseFn& f_;
    double alpha_, beta_, qexp_;
    std::vector<ValueRange> full_range_;
    std::vector<double> prefix_q_;
    std::vector<ValueRange> tree_;
    std::size_t n_ = 0;
};

struct BoxPair {
    double ilo, ihi, jlo, jhi;
    double ub;
};

struct BoxPairLess {
    bool operator()(const BoxPair& a, const BoxPair& b) const {
        if (a.ub != b.ub) return a.ub < b.ub;
        if (a.ilo != b.ilo) return a.ilo > b.ilo;
        if (a.jlo != b.jlo) return a.jlo > b.jlo;
        if (a.ihi != b.ihi) return a.ihi > b.ihi;
        return a.jhi > b.jhi;
    }
};

class SlopeBnb {
  public:
    SlopeBnb(const PiecewiseFn& f, double d_lo, double d_hi, double tol,
             std::size_t budget)
        : view_(f), d_lo_(d_lo), d_hi_(d_hi), tol_(tol), budget_(budget) {}

    CertifiedBound run() {
        seed_samples();
        push(make_pair(0.0, 1.0, 0.0, 1.0));
        std::size_t nodes = 0;
        double stuck_ub = 0.0;
        bool converged = false;
        double top_ub = 0.0;
        while (!queue_.empty()) {
            BoxPair p = queue_.top();
            top_ub = std::max(p.ub, stuck_ub);
            if (top_ub - lower_ <= tol_ || p.ub <= lower_) {
                converged = top_ub - lower_ <= tol_;
                break;
            }
            if (++nodes > budget_) break;
            queue_.pop();
            double wi = p.ihi - p.ilo, wj = p.jhi - p.jlo;
            if (std::max(wi, wj) <= 1e-15) { // resolution floor
                stuck_ub = std::max(stuck_ub, p.ub);
                continue;
            }
            if (p.ilo == p.jlo && p.ihi == p.jhi) {
                double mid = 0.5 * (p.ilo + p.ihi);
                push(make_pair(p.ilo, mid, p.ilo, mid));
                push(make_pair(p.ilo, mid, mid, p.ihi));
                push(make_pair(mid, p.ihi, mid, p.ihi));
            } else if (wi >= wj) {
                double mid = 0.5 * (p.ilo + p.ihi);
                push(make_pair(p.ilo, mid, p.jlo, p.jhi));
                push(make_pair(mid, p.ihi, p.jlo, p.jhi));
            } else {
                double mid = 0.5 * (p.jlo + p.jhi);
                push(make_pair(p.ilo, p.ihi, p.jlo, mid));
                push(make_pair(p.ilo, p.ihi, mid, p.jhi));
            }
        }
        double upper = queue_.empty() ? std::max(stuck_ub, lower_) : top_ub;
        converged = queue_.empty() ? upper - lower_ <= tol_ : converged;
        upper = std::max(upper, lower_);
        CertifiedBound out;
        out.lower = lower_;
        out.upper = upper + kUpperSlack;
        out.tol = tol_;
        out.converged = converged;
        out.witness = witness_;
        return out;
    }

  private:
    void try_sample(double x, double y) {
        if (x > y) std::swap(x, y);
        double d = y - x;
        if (d < d_lo_ || d > d_hi_ || d == 0.0) return;
        if (x < 0.0 || y > 1.0) return;
        double s = slope(view_.fn(), x, y);
        if (s > lower_ || !witness_) {
            lower_ = std::max(lower_, s);
            witness_ = PairWitness{x, y};
        }
    }

    void seed_samples() {
        try_sample(0.0, std::min(1.0, d_hi_));
        try_sample(std::max(0.0, 1.0 - d_hi_), 1.0);
        for (const Segment& s : view_.fn().segments()) {
            double w = std::min(s.b - s.a, d_hi_);
            try_sample(s.a, s.a + w);
            try_sample(s.b - w, s.b);
        }
    }

    BoxPair make_pair(double ilo, double ihi, double jlo, double jhi) {
        BoxPair p{ilo, ihi, jlo, jhi, 0.0};
        double dmin = std::max(0.0, jlo - ihi);
        double dmax = jhi - ilo;
        if (dmax < d_lo_ || dmin > d_hi_) {
            p.ub = -kInf; // no admissible pair in the band
            return p;
        }
        sample_pair(p);
        double ub = kInf;
        double den_base = std::max(dmin, d_lo_);
        if (den_base > 0.0) {
            ValueRange ri = view_.range_on(ilo, ihi);
            ValueRange rj = view_.range_on(jlo, jhi);
            double num = std::max({ri.hi - rj.lo, rj.hi - ri.lo, 0.0});
            ub = num / hpow(den_base, view_.alpha());
        }
        double span = view_.span_slope_bound(ilo, jhi, std::min(d_hi_, jhi - ilo));
        p.ub = std::min(ub, span);
        return p;
    }

    void sample_pair(const BoxPair& p) {
        try_sample(p.ilo, p.jlo);
        try_sample(p.ilo, p.jhi);
        try_sample(p.ihi, p.jlo);
        try_sample(p.ihi, p.jhi);
        try_sample(0.5 * (p.ilo + p.ihi), 0.5 * (p.jlo + p.jhi));
        double dmin = std::max(0.0, p.jlo - p.ihi);
        if (dmin < d_lo_) { // project the closest corner onto the band floor
            try_sample(p.ihi, std::min(1.0, p.ihi + d_lo_));
            try_sample(std::max(0.0, p.jlo - d_lo_), p.jlo);
        }
        anchors_.clear();
        view_.anchors_in(std::max(p.ilo, p.jlo - d_hi_),
                         std::min(p.jhi, p.ihi + d_hi_), anchors_);
        for (double a : anchors_) {
            double step = std::max(d_lo_, std::min(d_hi_, 0.5 * (p.jhi - p.ilo)));
            try_sample(a, std::min(1.0, a + step));
            try_sample(std::max(0.0, a - step), a);
            try_sample(a, p.jhi);
            try_sample(p.ilo, a);
        }
    }

    void push(const BoxPair& p) {
        if (p.ub == -kInf || p.ub <= lower_) return;
        queue_.push(p);
    }

    FnView view_;
    double d_lo_, d_hi_, tol_;
    std::size_t budget_;
    double lower_ = 0.0;
    std::optional<PairWitness> witness_;
    std::vector<double> anchors_;
    std::priority_queue<BoxPair, std::vector<BoxPair>, BoxPairLess> queue_;
};

struct Box {
    double lo, hi, ub;
};
struct BoxLess {
    bool operator()(const Box& a, const Box& b) const {
        if (a.ub != b.ub) return a.ub < b.ub;
        return a.lo > b.lo;
    }
};

} // namespace

CertifiedBound band_slope(const PiecewiseFn& f, double d_lo, double d_hi,
                          double tol, std::size_t budget) {
    if (!(tol > 0.0)) throw std::invalid_argument("band_slope: tol must be positive");
    if (!(d_lo >= 0.0 && d_lo < d_hi && d_hi <= 1.0))
        throw std::invalid_argument("band_slope: empty or invalid band");
    return SlopeBnb(f, d_lo, d_hi, tol, budget).run();
}

CertifiedBound holder_seminorm(const PiecewiseFn& f, double tol, std::size_t budget) {
    if (!(tol > 0.0))
        throw std::invalid_argument("holder_seminorm: tol must be positive");
    return SlopeBnb(f, 0.0, 1.0, tol, budget).run();
}

CertifiedBound sup_norm(const PiecewiseFn& f, double tol, std::size_t budget) {
    if (!(tol > 0.0)) throw std::invalid_argument("sup_norm: tol must be positive");
    FnView view(f);
    CertifiedBound out;
    out.tol = tol;

    double lower = 0.0;
    std::optional<PairWitness> wit;
    auto sample = [&](double x) {
        double v = std::fabs(view.eval(x));
        if (v > lower || !wit) {
            lower = std::max(lower, v);
            wit = PairWitness{x, x};
        }
    };

    std::priority_queue<Box, std::vector<Box>, BoxLess> queue;
    auto make_box = [&](double lo, double hi) {
        sample(lo);
        sample(hi);
        sample(0.5 * (lo + hi));
        ValueRange r = view.range_on(lo, hi);
        return Box{lo, hi, std::max(std::fabs(r.lo), std::fabs(r.hi))};
    };
    // Per-segment boxes are exact for affine and single-arc segments.
    for (const Segment& s : f.segments()) {
        Box b = make_box(s.a, s.b);
        if (b.ub > lower || queue.empty()) queue.push(b);
    }

    double upper = 0.0;
    bool converged = false;
    std::size_t nodes = 0;
    double stuck = 0.0;
    while (!queue.empty()) {
        Box b = queue.top();
        upper = std::max(b.ub, stuck);
        if (upper - lower <= tol || b.ub <= lower) {
            converged = upper - lower <= tol;
            break;
        }
        if (++nodes > budget) break;
        queue.pop();
        if (b.hi - b.lo <= 1e-15) {
            stuck = std::max(stuck, b.ub);
            continue;
        }
        double mid = 0.5 * (b.lo + b.hi);
        Box l = make_box(b.lo, mid), r = make_box(mid, b.hi);
        if (l.ub > lower) queue.push(l);
        if (r.ub > lower) queue.push(r);
    }
    if (queue.empty()) {
        upper = std::max(stuck, lower);
        converged = upper - lower <= tol;
    }
    out.lower = lower;
    out.upper = std::max(upper, lower) + kUpperSlack;
    out.converged = converged;
    out.witness = wit;
    return out;
}

CertifiedBound lip_norm(const PiecewiseFn& f, double tol, std::size_t budget) {
    CertifiedBound a = sup_norm(f, tol, budget);
    CertifiedBound b = holder_seminorm(f, tol, budget);
    CertifiedBound out;
    out.lower = std::max(a.lower, b.lower);
    out.upper = std::max(a.upper, b.upper);
    out.tol = tol;
    out.converged = a.converged && b.converged;
    out.witness = a.lower >= b.lower ? a.witness : b.witness;
    return out;
}

} // namespace lip
