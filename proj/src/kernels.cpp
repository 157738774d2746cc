#include "levykde/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "levykde/quadrature.hpp"

namespace levykde {

namespace {

double poly_eval(const std::vector<double>& c, double z) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

// Coefficients of the derivative of the coefficient vector c.
std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

}  // namespace

void KernelSpec::finish() {
  dpoly_.clear();
  dpoly_.push_back(poly_);
  for (int k = 1; k <= smoothness_; ++k) dpoly_.push_back(poly_derivative(dpoly_.back()));
}

KernelSpec KernelSpec::biweight(int dim) {
  if (dim < 1) throw std::invalid_argument("kernel dim must be >= 1");
  KernelSpec k;
  k.name_ = "biweight";
  k.dim_ = dim;
  k.order_ = 2;
  // second derivative exists away from the support edge, where it jumps
  k.smoothness_ = 2;
  k.symmetric_ = true;
  // 0.9375 (1 - z^2)^2 = 0.9375 - 1.875 z^2 + 0.9375 z^4
  k.poly_ = {0.9375, 0.0, -1.875, 0.0, 0.9375};
  k.finish();
  return k;
}

KernelSpec KernelSpec::triweight(int dim) {
  if (dim < 1) throw std::invalid_argument("kernel dim must be >= 1");
  KernelSpec k;
  k.name_ = "triweight";
  k.dim_ = dim;
  k.order_ = 2;
  k.smoothness_ = 3;
  k.symmetric_ = true;
  // (35/32) (1 - z^2)^3
  const double c = 35.0 / 32.0;
  k.poly_ = {c, 0.0, -3.0 * c, 0.0, 3.0 * c, 0.0, -c};
  k.finish();
  return k;
}

KernelSpec KernelSpec::uniform(int dim) {
  if (dim < 1) throw std::invalid_argument("kernel dim must be >= 1");
  KernelSpec k;
  k.name_ = "uniform";
  k.dim_ = dim;
  k.order_ = 2;
  k.smoothness_ = 0;
  k.symmetric_ = true;
  k.poly_ = {0.5};
  k.finish();
  return k;
}

KernelSpec KernelSpec::biweight4(int dim) {
  if (dim < 1) throw std::invalid_argument("kernel dim must be >= 1");
  KernelSpec k;
  k.name_ = "biweight4";
  k.dim_ = dim;
  k.order_ = 4;
  k.smoothness_ = 2;
  k.symmetric_ = true;
  // (105/64) (1 - 3z^2) (1 - z^2)^2; the z^2 moment cancels exactly
  const double c = 105.0 / 64.0;
  k.poly_ = {c, 0.0, -5.0 * c, 0.0, 7.0 * c, 0.0, -3.0 * c};
  k.finish();
  return k;
}

KernelSpec KernelSpec::by_name(std::string_view name, int dim) {
  if (name == "biweight") return biweight(dim);
  if (name == "triweight") return triweight(dim);
  if (name == "uniform") return uniform(dim);
  if (name == "biweight4") return biweight4(dim);
  throw std::invalid_argument("unknown kernel name: " + std::string(name));
}

double KernelSpec::eval1(double z) const {
  if (std::abs(z) > 1.0) return 0.0;
  return poly_eval(poly_, z);
}

double KernelSpec::deriv1(int k, double z) const {
  if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (k > smoothness_) {
    throw std::invalid_argument("kernel '" + name_ + "' provides derivatives up to order " +
                                std::to_string(smoothness_) + ", requested " +
                                std::to_string(k));
  }
  if (std::abs(z) > 1.0) return 0.0;
  return poly_eval(dpoly_[static_cast<std::size_t>(k)], z);
}

double KernelSpec::eval(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != dim_) {
    throw std::invalid_argument("kernel eval: point dim mismatch");
  }
  double prod = 1.0;
  for (double zi : z) {
    prod *= eval1(zi);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

double KernelSpec::derivative(const MultiIndex& m, std::span<const double> z) const {
  if (static_cast<int>(m.size()) != dim_ || static_cast<int>(z.size()) != dim_) {
    throw std::invalid_argument("kernel derivative: dim mismatch");
  }
  double prod = 1.0;
  for (int i = 0; i < dim_; ++i) {
    prod *= deriv1(m[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(i)]);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

double KernelSpec::scaled_eval(double eta, std::span<const double> center,
                               std::span<const double> z) const {
  if (!(eta > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  if (static_cast<int>(center.size()) != dim_ || static_cast<int>(z.size()) != dim_) {
    throw std::invalid_argument("kernel scaled_eval: dim mismatch");
  }
  double prod = 1.0;
  for (int i = 0; i < dim_; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    prod *= eval1((z[u] - center[u]) / eta);
    if (prod == 0.0) return 0.0;
  }
  return prod * std::pow(eta, -dim_);
}

double KernelSpec::scaled_center_derivative(const MultiIndex& m, double eta,
                                            std::span<const double> center,
                                            std::span<const double> z) const {
  if (!(eta > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  if (static_cast<int>(m.size()) != dim_ || static_cast<int>(center.size()) != dim_ ||
      static_cast<int>(z.size()) != dim_) {
    throw std::invalid_argument("kernel scaled_center_derivative: dim mismatch");
  }
  // d/dx of g((z - x)/eta) pulls out -1/eta per derivative order.
  double prod = 1.0;
  int total = 0;
  for (int i = 0; i < dim_; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    prod *= deriv1(m[u], (z[u] - center[u]) / eta);
    total += m[u];
    if (prod == 0.0) return 0.0;
  }
  const double sign = (total % 2 == 0) ? 1.0 : -1.0;
  return sign * prod * std::pow(eta, -dim_ - total);
}

double KernelSpec::moment(const MultiIndex& m) const {
  if (static_cast<int>(m.size()) != dim_) {
    throw std::invalid_argument("kernel moment: dim mismatch");
  }
  double prod = 1.0;
  for (int mi : m) {
    if (mi < 0) throw std::invalid_argument("moment multi-index must be >= 0");
    if (symmetric_ && (mi % 2 == 1)) return 0.0;  // exact cancellation
    const double factor = integrate(
        [this, mi](double z) { return std::pow(z, mi) * poly_eval(poly_, z); }, -1.0, 1.0);
    prod *= factor;
  }
  return prod;
}

double KernelSpec::sq_integral() const {
  const double one_dim = integrate(
      [this](double z) {
        const double v = poly_eval(poly_, z);
        return v * v;
      },
      -1.0, 1.0);
  return std::pow(one_dim, dim_);
}

double roughness(const KernelSpec& g1, const KernelSpec& g2) {
  return g1.sq_integral() * g2.sq_integral();
}

}  // namespace levykde
