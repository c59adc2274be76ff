#include "orderk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace orderk {

namespace {

// QUADPACK (G7,K15) nodes and weights on [-1,1]; Kronrod nodes at even
// indices extend the embedded 7-point Gauss rule (odd indices).
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval evaluate(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        double v;
        if (i == 7) {
            v = f(c);
        } else {
            v = f(c - h * kNodes[i]) + f(c + h * kNodes[i]);
        }
        kronrod += kKronrodW[i] * v;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * v;
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, const std::vector<double>& split_points,
                           std::size_t max_intervals) {
    if (!(b > a)) throw QuadratureError("integrate: empty interval");

    std::vector<double> edges{a};
    for (double s : split_points) {
        if (s > a && s < b) edges.push_back(s);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<Interval> queue;
    double total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] <= edges[i]) continue;
        Interval iv = evaluate(f, edges[i], edges[i + 1]);
        total += iv.value;
        err += iv.error;
        queue.push(iv);
    }

    std::size_t n = queue.size();
    while (err > abs_tol && n < max_intervals) {
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; cannot refine further.
            queue.push({worst.a, worst.b, worst.value, 0.0});
            err -= worst.error;
            continue;
        }
        Interval left = evaluate(f, worst.a, mid);
        Interval right = evaluate(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++n;
    }
    if (err > abs_tol) {
        throw QuadratureError("integrate: tolerance " + std::to_string(abs_tol) +
                              " not reached; error estimate " + std::to_string(err) + " after " +
                              std::to_string(n) + " intervals");
    }
    return {total, err, n};
}

QuadratureResult integrate_positive_axis(const std::function<double(double)>& f, double scale,
                                         double abs_tol, const std::vector<double>& split_points,
                                         std::size_t max_intervals) {
    if (!(scale > 0.0)) throw QuadratureError("integrate_positive_axis: scale must be positive");
    auto g = [&f, scale](double v) {
        const double one_minus = 1.0 - v;
        const double x = scale * v / one_minus;
        const double jac = scale / (one_minus * one_minus);
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * jac;
    };
    std::vector<double> mapped;
    mapped.reserve(split_points.size() + 1);
    mapped.push_back(0.5);  // x = scale
    for (double x : split_points) {
        if (x > 0.0) mapped.push_back(x / (x + scale));
    }
    return integrate(g, 0.0, 1.0, abs_tol, mapped, max_intervals);
}

}  // namespace orderk
