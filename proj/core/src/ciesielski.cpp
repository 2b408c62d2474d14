#include "lip/ciesielski.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace lip {

DyadicIndex DyadicIndex::of(int n) {
    if (n < 2) throw std::invalid_argument("DyadicIndex: requires n >= 2");
    unsigned um = std::bit_width(static_cast<unsigned>(n - 1)) - 1;
    DyadicIndex d;
    d.n = n;
    d.m = static_cast<int>(um);
    d.k = n - (1 << d.m);
    double w = std::exp2(-static_cast<double>(d.m));
    d.xl = (d.k - 1) * w;
    d.xr = d.k * w;
    d.xc = d.xl + 0.5 * w;
    return d;
}

double level_weight(int m, double alpha) {
    return std::exp2(-(static_cast<double>(m) + 1.0) * alpha);
}

Polygon phi(int n, Alpha alpha) {
    if (n < 1) throw std::invalid_argument("phi: requires n >= 1");
    if (n == 1) return Polygon::identity(alpha);
    DyadicIndex d = DyadicIndex::of(n);
    double peak = level_weight(d.m, alpha.value());
    std::vector<PolygonNode> nodes;
    nodes.push_back({0.0, 0.0});
    if (d.xl > 0.0) nodes.push_back({d.xl, 0.0});
    nodes.push_back({d.xc, peak});
    nodes.push_back({d.xr, 0.0});
    if (d.xr < 1.0) nodes.push_back({1.0, 0.0});
    return Polygon(alpha, std::move(nodes));
}

CoeffSeq analyze(const PiecewiseFn& f, int N) {
    if (!f.based()) throw std::invalid_argument("analyze: f must be based");
    if (N < 1) throw std::invalid_argument("analyze: N must be >= 1");
    CoeffSeq c{f.alpha(), N, {}};
    c.set(1, f.eval(1.0));
    for (int n = 2; n <= N; ++n) {
        DyadicIndex d = DyadicIndex::of(n);
        // Chord differences cancel bitwise when f is affine across the
        // support, which keeps the biorthogonality relations exact.
        double left = f.chord(d.xl, d.xc);
        double right = f.chord(d.xc, d.xr);
        double a = (left - right) / (2.0 * level_weight(d.m, f.alpha().value()));
        c.set(n, a);
    }
    return c;
}

CoeffSeq analyze(const Polygon& f, int N) { return analyze(f.fn(), N); }

namespace {

// phi_n at a point, from the index geometry alone.
double tent_value(const DyadicIndex& d, double peak, double x) {
    if (x <= d.xl || x >= d.xr) return 0.0;
    double half = d.xc - d.xl; // exact power of two
    if (x <= d.xc) return peak * ((x - d.xl) / half);
    return peak * ((d.xr - x) / half);
}

} // namespace

Polygon synthesize(const CoeffSeq& c) {
    int N = std::max(c.truncation, 1);
    int level = 1;
    while ((1 << level) < N) ++level; // ceil(log2 N)
    ++level;
    int cells = 1 << level;
    double step = std::exp2(-level);

    struct Term {
        DyadicIndex d;
        double weighted; // a_n, applied against the tent of height peak
        double peak;
    };
    std::vector<Term> terms;
    double a1 = 0.0;
    for (const auto& [n, a] : c.entries) {
        if (n < 1 || a == 0.0) continue;
        if (n == 1) {
            a1 = a;
            continue;
        }
        DyadicIndex d = DyadicIndex::of(n);
        terms.push_back({d, a, level_weight(d.m, c.alpha.value())});
    }

    std::vector<PolygonNode> nodes(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        double x = i * step;
        double v = a1 * x;
        for (const Term& t : terms) v += t.weighted * tent_value(t.d, t.peak, x);
        nodes[i] = {x, v};
    }
    return Polygon(c.alpha, std::move(nodes));
}

CpProfile cp_profile(const CoeffSeq& c, double eps, int depth) {
    if (eps < 0.0) throw std::invalid_argument("cp_profile: eps must be >= 0");
    int max_m = c.truncation >= 2 ? DyadicIndex::of(c.truncation).m : 0;
    if (depth < 1 || depth > max_m)
        throw std::invalid_argument("cp_profile: depth exceeds available levels");

    // Per level, sorted k's whose coefficient is heavy.
    std::vector<std::vector<int>> heavy_k(max_m + 1);
    for (const auto& [n, a] : c.entries) {
        if (n < 2 || std::fabs(a) <= eps) continue;
        DyadicIndex d = DyadicIndex::of(n);
        heavy_k[d.m].push_back(d.k);
    }
    for (auto& v : heavy_k) std::sort(v.begin(), v.end());

    auto window_has_heavy = [&](double x, double radius) {
        for (int m = 0; m <= max_m; ++m) {
            double w = std::exp2(-m);
            if (w >= 2.0 * radius) continue; // support cannot fit strictly inside
            const auto& ks = heavy_k[m];
            // smallest k with (k-1)/2^m > x - radius
            auto it = std::lower_bound(ks.begin(), ks.end(), 0, [&](int k, int) {
                return (k - 1) * w <= x - radius;
            });
            if (it != ks.end() && *it * w < x + radius) return true;
        }
        return false;
    };

    CpProfile out{eps, depth, {}};
    int grid = 1 << depth;
    double step = std::exp2(-depth);
    for (int i = 0; i <= grid; ++i) {
        double x = i * step;
        bool heavy = true;
        for (int j = 1; j <= depth && heavy; ++j)
            heavy = window_has_heavy(x, std::exp2(-j));
        if (heavy) out.heavy.push_back(x);
    }
    return out;
}

OnesProfile ones_profile(int N, Alpha alpha, std::vector<double> points) {
    if (N < 1) throw std::invalid_argument("ones_profile: N must be >= 1");
    CoeffSeq ones{alpha, N, {}};
    for (int n = 1; n <= N; ++n) ones.set(n, 1.0);
    Polygon f = synthesize(ones);

    if (points.empty()) {
        int level = 1;
        while ((1 << level) < N) ++level;
        ++level;
        for (int j = 1; j <= level; ++j) points.push_back(std::exp2(-j));
    }
    OnesProfile out;
    out.N = N;
    for (double x : points) {
        double s = std::fabs(f.eval(x)) / hpow(x, alpha.value());
        out.rows.push_back({x, s});
    }
    if (!out.rows.empty()) out.b_hat = out.rows.back()[1];
    return out;
}

} // namespace lip
