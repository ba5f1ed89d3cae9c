#include "polyplan/cubic_roots.hpp"

#include <algorithm>
#include <cmath>

namespace polyplan {

namespace {

constexpr double kPi = 3.14159265358979323846;

double eval_poly(double c3, double c2, double c1, double c0, double x) {
    return ((c3 * x + c2) * x + c1) * x + c0;
}

double eval_dpoly(double c3, double c2, double c1, double x) {
    return (3.0 * c3 * x + 2.0 * c2) * x + c1;
}

int solve_linear(double c1, double c0, std::array<double, 3>& roots) {
    roots[0] = -c0 / c1;
    return 1;
}

int solve_quadratic(double c2, double c1, double c0, std::array<double, 3>& roots) {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return 0;
    if (disc == 0.0) {
        roots[0] = -c1 / (2.0 * c2);
        return 1;
    }
    // Citardauq form for the smaller-magnitude root avoids cancellation.
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    roots[0] = q / c2;
    roots[1] = (q != 0.0) ? c0 / q : -c1 / c2 - roots[0];
    if (roots[0] > roots[1]) std::swap(roots[0], roots[1]);
    return 2;
}

}  // namespace

int solve_cubic(double c3, double c2, double c1, double c0, std::array<double, 3>& roots) {
    const double scale =
        std::max({std::fabs(c3), std::fabs(c2), std::fabs(c1), std::fabs(c0)});
    if (scale == 0.0) return -1;

    // Relative threshold for treating the polynomial as lower degree.
    const double eps = 1e-14 * scale;
    if (std::fabs(c3) <= eps) {
        if (std::fabs(c2) <= eps) {
            if (std::fabs(c1) <= eps) return 0;  // nonzero constant
            return solve_linear(c1, c0, roots);
        }
        return solve_quadratic(c2, c1, c0, roots);
    }

    // Depressed cubic y^3 + p y + q = 0 via x = y - A/3.
    const double A = c2 / c3;
    const double B = c1 / c3;
    const double C = c0 / c3;
    const double p = B - A * A / 3.0;
    const double q = 2.0 * A * A * A / 27.0 - A * B / 3.0 + C;
    const double half_q = 0.5 * q;
    const double p3 = p / 3.0;
    const double D = half_q * half_q + p3 * p3 * p3;  // q^2/4 + p^3/27

    int n = 0;
    const double d_scale = std::max(half_q * half_q, std::fabs(p3 * p3 * p3));
    if (std::fabs(D) <= 1e-14 * d_scale || d_scale == 0.0) {
        // Border case: repeated roots.
        if (half_q == 0.0 && p == 0.0) {
            roots[0] = 0.0;
            n = 1;
        } else {
            const double u = std::cbrt(-half_q);
            roots[0] = 2.0 * u;
            roots[1] = -u;
            n = 2;
        }
    } else if (D < 0.0) {
        // Three real roots (casus irreducibilis).
        const double r = std::sqrt(-p3);
        const double phi = std::acos(std::clamp(-half_q / (r * r * r), -1.0, 1.0)) / 3.0;
        const double t = 2.0 * r;
        roots[0] = t * std::cos(phi);
        roots[1] = t * std::cos(phi - 2.0 * kPi / 3.0);
        roots[2] = t * std::cos(phi + 2.0 * kPi / 3.0);
        n = 3;
    } else {
        const double sqrt_D = std::sqrt(D);
        const double u = std::cbrt(sqrt_D + std::fabs(half_q));
        roots[0] = (half_q > 0.0) ? (p3 / u - u) : (u - p3 / u);
        n = 1;
    }

    const double shift = A / 3.0;
    for (int i = 0; i < n; ++i) {
        roots[i] = polish_cubic_root(c3, c2, c1, c0, roots[i] - shift);
    }
    std::sort(roots.begin(), roots.begin() + n);

    // Merge duplicates produced by the border cases.
    int m = 0;
    for (int i = 0; i < n; ++i) {
        if (m == 0 || std::fabs(roots[i] - roots[m - 1]) > 1e-12 * (1.0 + std::fabs(roots[i]))) {
            roots[m++] = roots[i];
        }
    }
    return m;
}

double polish_cubic_root(double c3, double c2, double c1, double c0, double x) {
    for (int it = 0; it < 12; ++it) {
        const double f = eval_poly(c3, c2, c1, c0, x);
        if (f == 0.0) break;
        const double df = eval_dpoly(c3, c2, c1, x);
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

double cubic_residual(double c3, double c2, double c1, double c0, double x) {
    const double scale =
        std::max({std::fabs(c3), std::fabs(c2), std::fabs(c1), std::fabs(c0)});
    if (scale == 0.0) return 0.0;
    return std::fabs(eval_poly(c3 / scale, c2 / scale, c1 / scale, c0 / scale, x));
}

}  // namespace polyplan
