#include "lip/almond.hpp"

#include <algorithm>
#include <cmath>

#include "lip/approx.hpp"

namespace lip {

double solve_k(Alpha alpha, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_k: tol must be positive");
    const double a = alpha.value();
    auto residual = [a](double y) { return 2.0 * hpow(y, a) - 1.0 - hpow(1.0 - 2.0 * y, a); };
    double lo = 1e-300, hi = 0.5; // residual(lo) < 0 < residual(hi)
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    double root = 0.5 * (lo + hi);
    if (std::fabs(residual(root)) > tol)
        throw std::runtime_error("solve_k: bisection failed to reach tolerance");
    return root;
}

AlmondParams AlmondParams::make(Alpha alpha) {
    AlmondParams p{alpha, 0.0, 0.0, 0.0};
    const double a = alpha.value();
    p.k = solve_k(alpha, 1e-13);
    p.liminf_slope = (1.0 - hpow(p.k, a)) / hpow(1.0 - p.k, a);
    p.failure_c = (1.0 - hpow(p.k, a)) *
                  std::pow(p.k * (1.0 - 2.0 * p.k), 1.0 - a) / (1.0 - p.k);
    return p;
}

namespace {

constexpr int kMaxDepth = 13; // 2 * 3^13 segments is the budget ceiling

struct Builder {
    double alpha;
    double k;
    int depth;
    std::vector<Segment> upper, lower;
    std::vector<AlmondNode> nodes;

    // Almond over [u,v] with corner values yl, yr; sigma = sign(yr - yl).
    // The upper envelope is an arc of coefficient +1 anchored at the low
    // corner, the lower envelope an arc of coefficient -1 at the high corner.
    void recurse(double u, double v, double yl, double yr, double sigma, int d) {
        if (d == depth) {
            double w = v - u;
            Segment up, dn;
            up.a = dn.a = u;
            up.b = dn.b = v;
            up.v0 = dn.v0 = yl;
            if (sigma > 0.0) {
                up.arcs = {ArcTerm{u, 1.0, 0.0}};
                dn.arcs = {ArcTerm{v, -1.0, hpow(w, alpha)}};
            } else {
                up.arcs = {ArcTerm{v, 1.0, hpow(w, alpha)}};
                dn.arcs = {ArcTerm{u, -1.0, 0.0}};
            }
            upper.push_back(up);
            lower.push_back(dn);
            return;
        }
        double t = v - u;
        double r = k * t;
        double delta = hpow(r, alpha);
        double c1 = u + r, c2 = v - r;
        double y1 = yl + sigma * delta, y2 = yr - sigma * delta;
        nodes.push_back({c1, y1, sigma > 0.0 ? NodeKind::Top : NodeKind::Bottom, d + 1});
        nodes.push_back({c2, y2, sigma > 0.0 ? NodeKind::Bottom : NodeKind::Top, d + 1});
        recurse(u, c1, yl, y1, sigma, d + 1);
        recurse(c1, c2, y1, y2, -sigma, d + 1);
        recurse(c2, v, y2, yr, sigma, d + 1);
    }
};

} // namespace

AlmondStage build_almond(Alpha alpha, int depth) {
    if (depth < 0 || depth > kMaxDepth)
        throw std::invalid_argument("build_almond: depth beyond segment budget");
    AlmondParams params = AlmondParams::make(alpha);
    Builder b{alpha.value(), params.k, depth, {}, {}, {}};
    std::size_t leaves = 1;
    for (int i = 0; i < depth; ++i) leaves *= 3;
    b.upper.reserve(leaves);
    b.lower.reserve(leaves);
    b.nodes.push_back({0.0, 0.0, NodeKind::Bottom, 0});
    b.nodes.push_back({1.0, 1.0, NodeKind::Top, 0});
    b.recurse(0.0, 1.0, 0.0, 1.0, 1.0, 0);
    std::stable_sort(b.nodes.begin(), b.nodes.end(),
                     [](const AlmondNode& l, const AlmondNode& r) { return l.x < r.x; });
    return AlmondStage{params, depth,
                       PiecewiseFn(alpha, std::move(b.upper), true),
                       PiecewiseFn(alpha, std::move(b.lower), false),
                       std::move(b.nodes)};
}

double AlmondStage::sup_gap() const {
    double w = std::pow(std::max(params.k, 1.0 - 2.0 * params.k), depth);
    return hpow(w, params.alpha.value()) *
           (std::exp2(1.0 - params.alpha.value()) - 1.0);
}

LimsupReport limsup_diagnostic(const AlmondStage& stage, double x, int scales) {
    if (scales < 1 || scales > stage.depth)
        throw std::invalid_argument("limsup_diagnostic: scales must be in [1, depth]");
    const AlmondNode* at = nullptr;
    for (const AlmondNode& n : stage.nodes)
        if (n.x == x) at = &n;
    if (!at) throw std::invalid_argument("limsup_diagnostic: x is not a recorded node");

    const double alpha = stage.params.alpha.value();
    LimsupReport rep;
    rep.x = x;
    double running = 0.0;
    for (int j = 1; j <= scales; ++j) {
        double radius = std::exp2(-j);
        double best = 0.0;
        auto lo = std::lower_bound(stage.nodes.begin(), stage.nodes.end(), x - radius,
                                   [](const AlmondNode& n, double v) { return n.x < v; });
        for (auto it = lo; it != stage.nodes.end() && it->x <= x + radius; ++it) {
            if (it->kind == at->kind || it->x == x) continue;
            double s = std::fabs(it->value - at->value) / hpow(std::fabs(it->x - x), alpha);
            best = std::max(best, s);
        }
        running = std::max(running, best);
        rep.rows.push_back({j, radius, best, running});
    }
    return rep;
}

LiminfReport liminf_diagnostic(const AlmondStage& stage, double x) {
    if (x != 0.0)
        throw std::invalid_argument(
            "liminf_diagnostic: only the base point 0 is supported");
    const double alpha = stage.params.alpha.value();
    const double k = stage.params.k;
    LiminfReport rep;
    rep.expected = stage.params.liminf_slope;

    double t = 1.0;
    for (int j = 1; j + 1 <= stage.depth; ++j) {
        t *= k; // width of the leftmost almond at depth j
        double target = (1.0 - k) * t;
        // nearest recorded bottom node to the analytic abscissa
        const AlmondNode* best = nullptr;
        for (const AlmondNode& n : stage.nodes) {
            if (n.kind != NodeKind::Bottom || n.x == 0.0) continue;
            if (!best || std::fabs(n.x - target) < std::fabs(best->x - target)) best = &n;
        }
        if (!best || std::fabs(best->x - target) > 1e-9 * target)
            throw std::runtime_error("liminf_diagnostic: minimum node not resolved");
        double s = std::fabs(best->value) / hpow(best->x, alpha);
        rep.rows.push_back({j, best->x, s, s - rep.expected});
    }
    return rep;
}

PolygonFailureCertificate polygon_failure_certificate(const AlmondStage& stage,
                                                      const std::vector<double>& partition) {
    const double alpha = stage.params.alpha.value();
    const double k = stage.params.k;
    const PiecewiseFn& h = stage.upper;
    Polygon g = kp_interpolate(h, partition);

    // Smallest positive crossing of g and h, located by a sign scan over the
    // first partition cell refined 2^10-fold, then bisection.
    double x1 = partition.at(1);
    auto residual = [&](double x) { return h.eval(x) - g.eval(x); };
    const int kScan = 1 << 10;
    double x_tilde = x1;
    double prev = x1 / kScan;
    bool bracketed = false;
    double blo = 0.0, bhi = 0.0;
    if (residual(prev) <= 0.0) {
        bracketed = true; // crossing already inside the first scan cell
        blo = 0.0;
        bhi = prev;
    }
    for (int i = 2; i <= kScan && !bracketed; ++i) {
        double cur = x1 * i / kScan;
        if (residual(cur) <= 0.0) {
            bracketed = true;
            blo = prev;
            bhi = cur;
        }
        prev = cur;
    }
    if (bracketed) {
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (blo + bhi);
            if (mid == blo || mid == bhi) break;
            (residual(mid) > 0.0 ? blo : bhi) = mid;
        }
        x_tilde = bhi;
    }

    // Scale with x_tilde in [k t, t].
    int scale = 0;
    double t = 1.0;
    while (k * t > x_tilde) {
        t *= k;
        ++scale;
    }
    if (scale + 2 > stage.depth) throw ResolutionError(scale + 2);

    // Witness pair: the cut nodes of the almond [0, k t], recorded exactly.
    double r = k * t;
    const AlmondNode* top = nullptr;
    const AlmondNode* bottom = nullptr;
    for (const AlmondNode& n : stage.nodes) {
        if (n.depth != scale + 2 || n.x <= 0.0 || n.x >= r * (1.0 + 1e-12)) continue;
        if (n.kind == NodeKind::Top) top = &n;
        if (n.kind == NodeKind::Bottom) bottom = &n;
    }
    if (!top || !bottom) throw ResolutionError(scale + 2);

    PolygonFailureCertificate cert;
    cert.x_tilde = x_tilde;
    cert.scale = scale;
    cert.t = t;
    cert.r_prime = top->x;
    cert.s_prime = bottom->x;
    double w = bottom->x - top->x;
    cert.h_pair_slope = (bottom->value - top->value) / hpow(w, alpha);
    double dg = g.eval(bottom->x) - g.eval(top->x);
    double dh = bottom->value - top->value;
    cert.witness_slope = std::fabs(dg - dh) / hpow(w, alpha);
    cert.threshold = 1.0 + stage.params.failure_c;
    cert.g_slope = dg / w;
    cert.g_slope_bound = (1.0 - hpow(k, alpha)) / (1.0 - k) * std::pow(t, alpha - 1.0);
    cert.pass = cert.witness_slope + 1e-6 >= cert.threshold;
    return cert;
}

} // namespace lip
