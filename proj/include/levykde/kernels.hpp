#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levykde/multi_index.hpp"

namespace levykde {

struct Bandwidth {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

// Compactly supported smoothing kernel. The 1-d profile is a polynomial on
// [-1, 1] (zero outside), and d > 1 kernels are coordinatewise products of
// the same profile, so moments and roughness factorize. order is the usual
// moment order: kappa_m = 0 for 0 < |m| < order. smoothness caps the
// derivative order served by derivative(); piecewise-polynomial derivatives
// beyond the continuous ones jump at the support edge but are defined
// everywhere else.
class KernelSpec {
 public:
  static KernelSpec biweight(int dim = 1);
  static KernelSpec triweight(int dim = 1);
  static KernelSpec uniform(int dim = 1);
  // Fourth-order variant of the biweight: kappa_2 = 0, first nonzero even
  // moment is kappa_4.
  static KernelSpec biweight4(int dim = 1);
  static KernelSpec by_name(std::string_view name, int dim = 1);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int order() const { return order_; }
  int smoothness() const { return smoothness_; }
  bool symmetric() const { return symmetric_; }

  // 1-d profile and its k-th derivative; both vanish outside [-1, 1].
  double eval1(double z) const;
  double deriv1(int k, double z) const;  // throws std::invalid_argument if k > smoothness

  double eval(std::span<const double> z) const;
  double derivative(const MultiIndex& m, std::span<const double> z) const;

  // eta^{-d} g((z - center) / eta).
  double scaled_eval(double eta, std::span<const double> center,
                     std::span<const double> z) const;
  // Partial derivative of the scaled kernel with respect to the *center*:
  // each derivative in x brings a factor (-1/eta).
  double scaled_center_derivative(const MultiIndex& m, double eta,
                                  std::span<const double> center,
                                  std::span<const double> z) const;

  // kappa_m = integral of z^m g(z) dz, by adaptive quadrature per factor.
  // Odd moments of a symmetric profile are returned as an exact 0.
  double moment(const MultiIndex& m) const;

  // integral of g(z)^2 over R^dim.
  double sq_integral() const;

 private:
  KernelSpec() = default;
  void finish();  // precompute derivative coefficient tables

  std::string name_;
  int dim_ = 1;
  int order_ = 2;
  int smoothness_ = 0;
  bool symmetric_ = true;
  std::vector<double> poly_;  // profile coefficients, ascending powers of z
  std::vector<std::vector<double>> dpoly_;  // dpoly_[k]: coefficients of the k-th derivative
};

// xi_g^2 of the pair (g1, g2): the product of their squared L2 norms.
double roughness(const KernelSpec& g1, const KernelSpec& g2);

}  // namespace levykde
