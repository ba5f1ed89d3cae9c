#pragma once

#include <array>

namespace polyplan {

// Real roots of c3*x^3 + c2*x^2 + c1*x + c0 = 0, ascending, deduplicated.
// Degrades gracefully to the quadratic/linear cases when leading coefficients
// vanish relative to the overall coefficient scale. Returns the root count
// (0..3). An identically-zero polynomial returns -1; the caller owns that
// degenerate case.
int solve_cubic(double c3, double c2, double c1, double c0, std::array<double, 3>& roots);

// A few Newton steps on the polynomial; returns the refined root.
double polish_cubic_root(double c3, double c2, double c1, double c0, double x);

// |p(x)| after normalizing coefficients by their max magnitude.
double cubic_residual(double c3, double c2, double c1, double c0, double x);

}  // namespace polyplan
