#pragma once

#include <map>
#include <vector>

#include "lip/function.hpp"

namespace lip {

/// Decomposition n = 2^m + k with m >= 0 and 1 <= k <= 2^m, plus the dyadic
/// support [xl, xr] and its midpoint. Defined for n >= 2.
struct DyadicIndex {
    int n = 2;
    int m = 0;
    int k = 1;
    double xl = 0.0;
    double xc = 0.5;
    double xr = 1.0;

    static DyadicIndex of(int n);
};

/// Normalization weight of level m: the peak height 2^{-(m+1) alpha} of the
/// triangle functions, equal to the half-support width to the alpha.
/// phi() and analyze() must share this exact value.
double level_weight(int m, double alpha);

/// Truncated coefficient sequence for the triangle-system transform.
struct CoeffSeq {
    Alpha alpha;
    int truncation = 1; // coefficients live on 1..truncation
    std::map<int, double> entries;

    double at(int n) const {
        auto it = entries.find(n);
        return it == entries.end() ? 0.0 : it->second;
    }
    void set(int n, double v) {
        if (v == 0.0)
            entries.erase(n);
        else
            entries[n] = v;
    }
};

/// n-th triangle basis function, normalized so the endpoint-to-peak Hölder
/// slope is exactly 1. phi(1) is the identity.
Polygon phi(int n, Alpha alpha);

/// Coefficients a_n of f for n <= N: a_1 = f(1) and, for n >= 2, half the
/// difference of the left and right Hölder difference quotients over the
/// support halves. Requires f based.
CoeffSeq analyze(const PiecewiseFn& f, int N);
CoeffSeq analyze(const Polygon& f, int N);

/// Finite sum of a_n phi_n as an exact polygon on the dyadic mesh of level
/// ceil(log2 N) + 1.
Polygon synthesize(const CoeffSeq& c);

/// Finite-depth heavy-point profile: dyadic points x such that every window
/// (x - 2^-j, x + 2^-j), j <= depth, contains the support of some coefficient
/// with |a_n| > eps. With eps = 0 this profiles the finitely-many-cluster
/// structure; the result is a candidate set at the given depth, membership in
/// the limit classes being undecidable from a truncation.
struct CpProfile {
    double eps = 0.0;
    int depth = 1;
    std::vector<double> heavy;
};
CpProfile cp_profile(const CoeffSeq& c, double eps, int depth);

/// Slope profile of f_N = sum_{n<=N} phi_n from the base point: rows
/// (x_j, L_{0,x_j}(f_N)) along a dyadic null sequence, plus the empirical
/// limit estimate (the last resolved slope).
struct OnesProfile {
    int N = 2;
    std::vector<std::array<double, 2>> rows;
    double b_hat = 0.0;
};
OnesProfile ones_profile(int N, Alpha alpha, std::vector<double> points = {});

} // namespace lip
