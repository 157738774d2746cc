#pragma once

#include <functional>

namespace levykde {

// Adaptive Gauss-Legendre integration of f over [a, b]. Each panel is kept
// when the 10- and 20-point rules agree within its share of abs_tol,
// otherwise it is bisected. Intended for the smooth, compactly supported
// integrands of this project (kernel moments, tail masses).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

}  // namespace levykde
