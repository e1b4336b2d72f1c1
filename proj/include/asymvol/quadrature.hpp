#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace asymvol::quad {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int segments = 0;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes/weights on [-1,1], positive half (symmetric).
inline constexpr double kGK15Nodes[8] = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864093,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0,
};
inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318921,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923465,
    0.20948214108472782801299917489171,
};
// Embedded 7-point Gauss weights (nodes are kGK15Nodes[1,3,5,7]).
inline constexpr double kGaussWeights[4] = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633,
};

struct Segment {
    double a, b;
    double value;
    double error;
};

struct WorseError {
    bool operator()(const Segment& s1, const Segment& s2) const { return s1.error < s2.error; }
};

template <class F>
Segment gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kronrod = kKronrodWeights[7] * f(c);
    double gauss = kGaussWeights[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGK15Nodes[i];
        const double fsum = f(c - dx) + f(c + dx);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

// Adaptive quadrature of f on [a,b]: worst-error segment is split until the
// summed error estimate meets max(abs_tol, rel_tol*|integral|). Deterministic
// for identical inputs (the refinement order is a pure function of f).
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0,
                     int max_segments = 4000) {
    QuadResult out;
    if (!(b > a)) return out;

    std::priority_queue<detail::Segment, std::vector<detail::Segment>, detail::WorseError> heap;
    const int initial = 8;
    double total = 0.0, err = 0.0;
    for (int i = 0; i < initial; ++i) {
        const double sa = a + (b - a) * i / initial;
        const double sb = a + (b - a) * (i + 1) / initial;
        auto seg = detail::gk15(f, sa, sb);
        total += seg.value;
        err += seg.error;
        heap.push(seg);
    }
    int n = initial;
    while (n < max_segments && err > std::max(abs_tol, rel_tol * std::abs(total))) {
        const auto worst = heap.top();
        heap.pop();
        total -= worst.value;
        err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto& half : {detail::gk15(f, worst.a, mid), detail::gk15(f, mid, worst.b)}) {
            total += half.value;
            err += half.error;
            heap.push(half);
        }
        ++n;
    }
    out.value = total;
    out.error_estimate = err;
    out.segments = n;
    return out;
}

} // namespace asymvol::quad
