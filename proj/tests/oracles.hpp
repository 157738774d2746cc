// Independent reference implementations the unit tests compare the library
// against. Everything here is written the slow, obvious way on purpose:
// hardcoded kernel formulas, plain loops, bisection.
#pragma once

#include <functional>
#include <vector>

namespace oracle {

// biweight kernel and its first two derivatives, spelled out
double biweight(double z);
double biweight_d1(double z);
double biweight_d2(double z);

struct NaiveResult {
  double f_hat = 0.0;
  double denom = 0.0;  // delta times the summed state weights
};

// Plain-loop ratio estimator on a univariate path, biweight kernels both
// sides; zero when nothing carries weight.
NaiveResult naive_estimate(const std::vector<double>& obs, double delta, double eta1,
                           double eta2, double x, double y);

// Longhand quotient-rule derivatives of the naive ratio, order 1 or 2, in
// the state coordinate (x) or the jump coordinate (y).
double naive_deriv_x(const std::vector<double>& obs, double delta, double eta1, double eta2,
                     double x, double y, int order);
double naive_deriv_y(const std::vector<double>& obs, double delta, double eta1, double eta2,
                     double x, double y, int order);

// Composite Simpson rule with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Two-sided Kolmogorov-Smirnov distance between a sample and a cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

struct ScanInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
};

// Solves {f >= 0 : (center - f)^2 <= z^2 c f} by bracketing and bisection,
// no quadratic formula.
ScanInterval scan_inversion(double center, double c, double z);

}  // namespace oracle
