#include "levykde/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace levykde {

namespace {

struct Rule {
  std::vector<double> node;
  std::vector<double> weight;
};

// Newton iteration on the Legendre polynomial (the classic gauleg routine);
// nodes come out accurate to machine precision.
Rule make_rule(int n) {
  Rule r;
  r.node.resize(n);
  r.weight.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    r.node[i] = -z;
    r.node[n - 1 - i] = z;
    r.weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.weight[n - 1 - i] = r.weight[i];
  }
  return r;
}

const Rule& rule10() {
  static const Rule r = make_rule(10);
  return r;
}

const Rule& rule20() {
  static const Rule r = make_rule(20);
  return r;
}

double apply(const Rule& r, const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.node.size(); ++i) {
    sum += r.weight[i] * f(mid + half * r.node[i]);
  }
  return half * sum;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
  const double coarse = apply(rule10(), f, a, b);
  const double fine = apply(rule20(), f, a, b);
  if (std::abs(fine - coarse) <= tol || depth >= 48) return fine;
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be > 0");
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, abs_tol);
  return adapt(f, a, b, abs_tol, 0);
}

}  // namespace levykde
