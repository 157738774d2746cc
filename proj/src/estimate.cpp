#include "levykde/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace levykde {

namespace {

double vec_norm(std::span<const double> v) {
  double s = 0.0;
  for (double vi : v) s += vi * vi;
  return std::sqrt(s);
}

void check_point(const EvalPoint& pt, int dim) {
  if (static_cast<int>(pt.x.size()) != dim || static_cast<int>(pt.y.size()) != dim) {
    throw std::invalid_argument("evaluation point dimension mismatch");
  }
  if (vec_norm(pt.y) == 0.0) {
    throw std::domain_error("estimator is undefined at y = 0 (jump-kernel pole)");
  }
}

// Evaluates all requested center derivatives of one scaled kernel at a
// point, with the sign and eta powers folded into precomputed factors so the
// per-observation work is a handful of polynomial evaluations.
class WeightPass {
 public:
  WeightPass(const KernelSpec& g, double eta, std::span<const double> center,
             const std::vector<MultiIndex>& list)
      : g_(g), eta_(eta), center_(center.begin(), center.end()), list_(list) {
    factor_.reserve(list_.size());
    const int dim = static_cast<int>(center_.size());
    for (const auto& m : list_) {
      const int total = mi_order(m);
      const double sign = (total % 2 == 0) ? 1.0 : -1.0;
      factor_.push_back(sign * std::pow(eta_, -dim - total));
    }
  }

  std::size_t count() const { return list_.size(); }

  // Fills w[0..count) with the derivative values at z; returns false (w
  // untouched) when z falls outside the scaled support.
  bool weights(const double* z, double* w) const {
    const std::size_t dim = center_.size();
    double u[8];
    for (std::size_t i = 0; i < dim; ++i) {
      u[i] = (z[i] - center_[i]) / eta_;
      if (std::abs(u[i]) > 1.0) return false;
    }
    for (std::size_t a = 0; a < list_.size(); ++a) {
      double prod = factor_[a];
      for (std::size_t i = 0; i < dim; ++i) {
        prod *= g_.deriv1(list_[a][i], u[i]);
      }
      w[a] = prod;
    }
    return true;
  }

 private:
  const KernelSpec& g_;
  double eta_;
  std::vector<double> center_;
  const std::vector<MultiIndex>& list_;
  std::vector<double> factor_;
};

// Accumulated sums shared by the discrete and continuous estimators. D holds
// the state-weight sums (or sojourn integrals) per derivative index; N holds
// the cross products with the increment (or jump) weights.
struct SumTables {
  double delta = 1.0;
  std::vector<MultiIndex> a_list, b_list;
  std::vector<double> D;  // aligned with a_list
  std::vector<double> N;  // a-major, a_list.size() x b_list.size()
  std::map<MultiIndex, std::size_t> a_pos, b_pos;

  void init(double dt, std::vector<MultiIndex> al, std::vector<MultiIndex> bl) {
    delta = dt;
    a_list = std::move(al);
    b_list = std::move(bl);
    D.assign(a_list.size(), 0.0);
    N.assign(a_list.size() * b_list.size(), 0.0);
    for (std::size_t i = 0; i < a_list.size(); ++i) a_pos[a_list[i]] = i;
    for (std::size_t j = 0; j < b_list.size(); ++j) b_pos[b_list[j]] = j;
  }

  double d(const MultiIndex& a) const { return D[a_pos.at(a)]; }
  double n(const MultiIndex& a, const MultiIndex& b) const {
    return N[a_pos.at(a) * b_list.size() + b_pos.at(b)];
  }
  double d0() const { return D[0]; }  // a_list starts with the zero index
  double denom() const { return delta * d0(); }
};

double ratio_rec(const SumTables& t, const MultiIndex& m1, const MultiIndex& m2,
                 std::map<MultiIndex, double>& memo) {
  auto it = memo.find(m1);
  if (it != memo.end()) return it->second;
  // Leibniz on N = Q * (delta D), solved for the top derivative of Q.
  double acc = t.n(m1, m2);
  for (const auto& j : sub_indices(m1)) {
    if (j == m1) continue;
    acc -= mi_binomial(m1, j) * ratio_rec(t, j, m2, memo) * t.delta * t.d(mi_sub(m1, j));
  }
  const double val = acc / t.denom();
  memo[m1] = val;
  return val;
}

// d^{m1}_x d^{m2}_y of the ratio estimator; 0 by convention on the
// zero-denominator event.
double ratio_derivative_tables(const SumTables& t, const MultiIndex& m1,
                               const MultiIndex& m2) {
  if (!(t.d0() > 0.0)) return 0.0;
  std::map<MultiIndex, double> memo;
  return ratio_rec(t, m1, m2, memo);
}

double fhat_from_tables(const SumTables& t, int dim) {
  if (!(t.d0() > 0.0)) return 0.0;
  const MultiIndex zero(static_cast<std::size_t>(dim), 0);
  return t.n(zero, zero) / t.denom();
}

// Kernel-moment coefficients of the plug-in correction, independent of the
// evaluation point, so they are assembled once per request.
struct BiasTerms {
  // state part: (m1, m2, kappa_{m1+m2}(g1) / (m1! m2!)) over |m1|+|m2| = alpha1, |m2| >= 1
  std::vector<std::tuple<MultiIndex, MultiIndex, double>> x_terms;
  // jump part: (m, kappa_m(g2) / m!) over |m| = alpha2
  std::vector<std::pair<MultiIndex, double>> y_terms;
};

BiasTerms make_bias_terms(const KernelSpec& g1, const KernelSpec& g2, const Smoothness& s,
                          int dim) {
  BiasTerms terms;
  for (int s2 = 1; s2 <= s.alpha1; ++s2) {
    for (const auto& m2 : multi_indices_of_order(dim, s2)) {
      for (const auto& m1 : multi_indices_of_order(dim, s.alpha1 - s2)) {
        const double kappa = g1.moment(mi_add(m1, m2));
        if (kappa == 0.0) continue;
        terms.x_terms.emplace_back(m1, m2, kappa / (mi_factorial(m1) * mi_factorial(m2)));
      }
    }
  }
  for (const auto& m : multi_indices_of_order(dim, s.alpha2)) {
    const double kappa = g2.moment(m);
    if (kappa == 0.0) continue;
    terms.y_terms.emplace_back(m, kappa / mi_factorial(m));
  }
  return terms;
}

double bias_from_tables(const SumTables& t, const BiasTerms& terms, const Bandwidth& bw,
                        const Smoothness& s, int dim) {
  if (!(t.d0() > 0.0)) return 0.0;
  const MultiIndex zero(static_cast<std::size_t>(dim), 0);
  double x_part = 0.0;
  for (const auto& [m1, m2, coef] : terms.x_terms) {
    // the delta factors cancel in the weight ratio, so it is D[m1]/D[0]
    x_part += coef * (t.d(m1) / t.d0()) * ratio_derivative_tables(t, m2, zero);
  }
  double y_part = 0.0;
  for (const auto& [m, coef] : terms.y_terms) {
    y_part += coef * ratio_derivative_tables(t, zero, m);
  }
  return std::pow(bw.eta1, s.alpha1) * x_part + std::pow(bw.eta2, s.alpha2) * y_part;
}

void validate_request(const EstimationRequest& req) {
  if (req.observations == nullptr) {
    throw std::invalid_argument("estimation request carries no observations");
  }
  const SamplePath& path = *req.observations;
  if (path.dim < 1 || path.dim > 8) {
    throw std::invalid_argument("observation dimension must lie in [1, 8]");
  }
  if (path.values.size() % static_cast<std::size_t>(path.dim) != 0 || path.size() < 2) {
    throw std::invalid_argument("need at least two observations");
  }
  if (!(path.delta > 0.0)) throw std::invalid_argument("observation spacing must be > 0");
  if (!(req.bandwidth.eta1 > 0.0) || !(req.bandwidth.eta2 > 0.0)) {
    throw std::invalid_argument("bandwidths must be > 0");
  }
  if (req.g1.dim() != path.dim || req.g2.dim() != path.dim) {
    throw std::invalid_argument("kernel dimension does not match the observations");
  }
  if (req.smoothness.alpha1 < 1 || req.smoothness.alpha2 < 1) {
    throw std::invalid_argument("smoothness orders must be >= 1");
  }
  if (req.smoothness.alpha1 > req.g1.order() || req.smoothness.alpha2 > req.g2.order()) {
    throw std::invalid_argument("kernel order must cover the smoothness order");
  }
  if (!(req.reliability_zeta > 0.0)) {
    throw std::invalid_argument("reliability_zeta must be > 0");
  }
}

bool correction_supported(const EstimationRequest& req) {
  return req.g1.smoothness() >= req.smoothness.alpha1 &&
         req.g2.smoothness() >= req.smoothness.alpha2;
}

void require_correction_support(const EstimationRequest& req) {
  if (!correction_supported(req)) {
    throw std::invalid_argument(
        "bias correction needs kernel derivatives up to the smoothness orders; pick "
        "smoother kernels (e.g. biweight or triweight)");
  }
}

SumTables discrete_tables(const SamplePath& path, const Bandwidth& bw, const KernelSpec& g1,
                          const KernelSpec& g2, const EvalPoint& pt,
                          std::vector<MultiIndex> a_list, std::vector<MultiIndex> b_list) {
  SumTables t;
  t.init(path.delta, std::move(a_list), std::move(b_list));
  const WeightPass p1(g1, bw.eta1, pt.x, t.a_list);
  const WeightPass p2(g2, bw.eta2, pt.y, t.b_list);
  const std::size_t dim = static_cast<std::size_t>(path.dim);
  const std::size_t n = path.size() - 1;
  const std::size_t na = t.a_list.size(), nb = t.b_list.size();
  std::vector<double> w1(na), w2(nb), incr(dim);
  for (std::size_t k = 1; k <= n; ++k) {
    const double* prev = path.values.data() + (k - 1) * dim;
    if (!p1.weights(prev, w1.data())) continue;
    for (std::size_t i = 0; i < na; ++i) t.D[i] += w1[i];
    const double* cur = path.values.data() + k * dim;
    for (std::size_t c = 0; c < dim; ++c) incr[c] = cur[c] - prev[c];
    if (!p2.weights(incr.data(), w2.data())) continue;
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) t.N[i * nb + j] += w1[i] * w2[j];
    }
  }
  return t;
}

void validate_continuous(const JumpLog& log, const Bandwidth& bw, const KernelSpec& g1,
                         const KernelSpec& g2, const EvalPoint& pt, double t_end) {
  if (g1.dim() != 1 || g2.dim() != 1) {
    throw std::invalid_argument("the continuous-record benchmark handles univariate logs");
  }
  if (log.sojourn_grid.size() < 2 || !(log.substep > 0.0)) {
    throw std::invalid_argument(
        "jump log carries no fine grid; simulate with record_fine_grid");
  }
  if (!(bw.eta1 > 0.0) || !(bw.eta2 > 0.0)) {
    throw std::invalid_argument("bandwidths must be > 0");
  }
  if (!(t_end > 0.0)) throw std::invalid_argument("horizon t must be > 0");
  check_point(pt, 1);
  if (!(std::abs(pt.y[0]) - bw.eta2 > log.eps_jump)) {
    throw std::invalid_argument(
        "continuous estimate needs |y| - eta2 > eps_jump: sub-threshold jumps are not "
        "logged, so closer windows would be systematically empty");
  }
}

SumTables continuous_tables(const JumpLog& log, const Bandwidth& bw, const KernelSpec& g1,
                            const KernelSpec& g2, const EvalPoint& pt, double t_end,
                            std::vector<MultiIndex> a_list, std::vector<MultiIndex> b_list) {
  SumTables t;
  t.init(1.0, std::move(a_list), std::move(b_list));
  const WeightPass p1(g1, bw.eta1, pt.x, t.a_list);
  const WeightPass p2(g2, bw.eta2, pt.y, t.b_list);
  const double h = log.substep;
  const std::size_t last = log.sojourn_grid.size() - 1;
  std::size_t m = static_cast<std::size_t>(std::floor(t_end / h + 1e-9));
  if (m > last) m = last;
  if (m < 1) throw std::invalid_argument("horizon t shorter than one substep");

  const std::size_t na = t.a_list.size(), nb = t.b_list.size();
  std::vector<double> w1(na), w2(nb);
  // sojourn integral of each state-weight derivative, trapezoid on the grid
  for (std::size_t idx = 0; idx <= m; ++idx) {
    if (!p1.weights(&log.sojourn_grid[idx], w1.data())) continue;
    const double coef = (idx == 0 || idx == m) ? 0.5 * h : h;
    for (std::size_t i = 0; i < na; ++i) t.D[i] += coef * w1[i];
  }
  const double t_cut = (static_cast<double>(m) - 0.5) * h;
  for (const auto& ev : log.events) {
    if (ev.time > t_cut) break;  // events are time-ordered
    if (!p1.weights(&ev.left_limit, w1.data())) continue;
    if (!p2.weights(&ev.jump, w2.data())) continue;
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) t.N[i * nb + j] += w1[i] * w2[j];
    }
  }
  return t;
}

std::vector<MultiIndex> correction_a_list(int dim, const Smoothness& s) {
  return multi_indices_up_to(dim, s.alpha1);
}

std::vector<MultiIndex> correction_b_list(int dim, const Smoothness& s) {
  return multi_indices_up_to(dim, s.alpha2);
}

}  // namespace

double diffusion_scale_proxy(const SamplePath& path) {
  const std::size_t dim = static_cast<std::size_t>(path.dim);
  const std::size_t n = path.size() - 1;
  if (n < 1) throw std::invalid_argument("diffusion proxy needs at least one increment");
  std::vector<double> mags(n);
  for (std::size_t k = 1; k <= n; ++k) {
    double s = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double d = path.values[k * dim + c] - path.values[(k - 1) * dim + c];
      s += d * d;
    }
    mags[k - 1] = std::sqrt(s / static_cast<double>(dim));
  }
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2),
                   sorted.end());
  const double med = sorted[n / 2];
  if (med == 0.0) return 0.0;
  // median |N(0, s^2 dt)| = 0.674490 s sqrt(dt); jumps barely move the median
  const double sigma0 = med / (0.6744897501960817 * std::sqrt(path.delta));
  const double cut = 5.0 * sigma0 * std::sqrt(path.delta);
  double qv = 0.0;
  for (double m : mags) {
    if (m <= cut) qv += m * m;
  }
  return std::sqrt(qv / (static_cast<double>(n) * path.delta));
}

std::vector<PointEstimate> estimate_grid(const EstimationRequest& req) {
  validate_request(req);
  const SamplePath& path = *req.observations;
  const int dim = path.dim;
  const std::size_t dimz = static_cast<std::size_t>(dim);
  const std::size_t n = path.size() - 1;
  const bool with_correction = correction_supported(req);

  // without correction support only the plain weights are needed, and the
  // kernels may not serve derivatives at all
  const auto a_list = with_correction ? correction_a_list(dim, req.smoothness)
                                      : std::vector<MultiIndex>{MultiIndex(dimz, 0)};
  const auto b_list = with_correction ? correction_b_list(dim, req.smoothness)
                                      : std::vector<MultiIndex>{MultiIndex(dimz, 0)};
  const std::size_t na = a_list.size(), nb = b_list.size();
  BiasTerms terms;
  if (with_correction) terms = make_bias_terms(req.g1, req.g2, req.smoothness, dim);

  double proxy_sigma = -1.0;  // lazily computed when no sigma_at is given
  const double sqrt_delta = std::sqrt(path.delta);

  // group grid points sharing an x so the state-weight pass runs once per x
  std::map<std::vector<double>, std::size_t> group_of;
  std::vector<std::vector<double>> group_x;
  std::vector<std::vector<std::size_t>> group_members;
  for (std::size_t i = 0; i < req.grid.size(); ++i) {
    check_point(req.grid[i], dim);
    auto [it, inserted] = group_of.try_emplace(req.grid[i].x, group_x.size());
    if (inserted) {
      group_x.push_back(req.grid[i].x);
      group_members.emplace_back();
    }
    group_members[it->second].push_back(i);
  }

  std::vector<PointEstimate> out(req.grid.size());
  std::vector<double> w1(na), w2(nb);
  for (std::size_t g = 0; g < group_x.size(); ++g) {
    const WeightPass p1(req.g1, req.bandwidth.eta1, group_x[g], a_list);
    std::vector<double> D(na, 0.0);
    // compact per-x record: increments whose left state carries weight,
    // alongside that state's weight derivatives
    std::vector<double> hit_w1, hit_incr;
    for (std::size_t k = 1; k <= n; ++k) {
      const double* prev = path.values.data() + (k - 1) * dimz;
      if (!p1.weights(prev, w1.data())) continue;
      for (std::size_t i = 0; i < na; ++i) D[i] += w1[i];
      const double* cur = path.values.data() + k * dimz;
      hit_w1.insert(hit_w1.end(), w1.begin(), w1.end());
      for (std::size_t c = 0; c < dimz; ++c) hit_incr.push_back(cur[c] - prev[c]);
    }
    const std::size_t hits = hit_incr.size() / dimz;

    double sigma;
    if (req.sigma_at) {
      sigma = req.sigma_at(group_x[g]);
    } else {
      if (proxy_sigma < 0.0) proxy_sigma = diffusion_scale_proxy(path);
      sigma = proxy_sigma;
    }
    const double threshold =
        req.bandwidth.eta2 + req.reliability_zeta * sigma * sqrt_delta;

    for (std::size_t idx : group_members[g]) {
      const EvalPoint& pt = req.grid[idx];
      SumTables t;
      t.init(path.delta, a_list, b_list);
      t.D = D;
      const WeightPass p2(req.g2, req.bandwidth.eta2, pt.y, b_list);
      for (std::size_t hitk = 0; hitk < hits; ++hitk) {
        if (!p2.weights(hit_incr.data() + hitk * dimz, w2.data())) continue;
        const double* w1row = hit_w1.data() + hitk * na;
        for (std::size_t i = 0; i < na; ++i) {
          for (std::size_t j = 0; j < nb; ++j) t.N[i * nb + j] += w1row[i] * w2[j];
        }
      }
      PointEstimate est;
      est.f_hat = fhat_from_tables(t, dim);
      est.gamma_hat =
          with_correction ? bias_from_tables(t, terms, req.bandwidth, req.smoothness, dim)
                          : 0.0;
      est.denom = t.denom();
      est.reliable = vec_norm(pt.y) > threshold;
      out[idx] = est;
    }
  }
  return out;
}

PointEstimate estimate_discrete(const EstimationRequest& req, const EvalPoint& pt) {
  EstimationRequest single = req;
  single.grid = {pt};
  return estimate_grid(single)[0];
}

double derivative_estimate(const EstimationRequest& req, const EvalPoint& pt,
                           const MultiIndex& m1, const MultiIndex& m2) {
  validate_request(req);
  const SamplePath& path = *req.observations;
  const int dim = path.dim;
  check_point(pt, dim);
  if (static_cast<int>(m1.size()) != dim || static_cast<int>(m2.size()) != dim) {
    throw std::invalid_argument("derivative multi-index dimension mismatch");
  }
  if (mi_order(m1) > req.g1.smoothness() || mi_order(m2) > req.g2.smoothness()) {
    throw std::invalid_argument("requested derivative exceeds the kernel smoothness");
  }
  const SumTables t = discrete_tables(path, req.bandwidth, req.g1, req.g2, pt,
                                      multi_indices_up_to(dim, mi_order(m1)), {m2});
  return ratio_derivative_tables(t, m1, m2);
}

double bias_correction_discrete(const EstimationRequest& req, const EvalPoint& pt) {
  validate_request(req);
  require_correction_support(req);
  const SamplePath& path = *req.observations;
  check_point(pt, path.dim);
  const SumTables t =
      discrete_tables(path, req.bandwidth, req.g1, req.g2, pt,
                      correction_a_list(path.dim, req.smoothness),
                      correction_b_list(path.dim, req.smoothness));
  const BiasTerms terms = make_bias_terms(req.g1, req.g2, req.smoothness, path.dim);
  return bias_from_tables(t, terms, req.bandwidth, req.smoothness, path.dim);
}

PointEstimate estimate_continuous(const JumpLog& log, const Bandwidth& bw,
                                  const KernelSpec& g1, const KernelSpec& g2,
                                  const EvalPoint& pt, double t_end, const Smoothness& s) {
  validate_continuous(log, bw, g1, g2, pt, t_end);
  const bool with_correction = g1.smoothness() >= s.alpha1 && g2.smoothness() >= s.alpha2;
  const auto a_list = with_correction ? correction_a_list(1, s)
                                      : std::vector<MultiIndex>{MultiIndex(1, 0)};
  const auto b_list = with_correction ? correction_b_list(1, s)
                                      : std::vector<MultiIndex>{MultiIndex(1, 0)};
  const SumTables t = continuous_tables(log, bw, g1, g2, pt, t_end, a_list, b_list);
  PointEstimate est;
  est.f_hat = fhat_from_tables(t, 1);
  if (with_correction) {
    const BiasTerms terms = make_bias_terms(g1, g2, s, 1);
    est.gamma_hat = bias_from_tables(t, terms, bw, s, 1);
  }
  est.denom = t.denom();
  // the admissibility precondition already keeps |y| clear of the
  // diffusion-dominated zone
  est.reliable = true;
  return est;
}

double bias_correction_continuous(const JumpLog& log, const Bandwidth& bw,
                                  const KernelSpec& g1, const KernelSpec& g2,
                                  const EvalPoint& pt, double t_end, const Smoothness& s) {
  validate_continuous(log, bw, g1, g2, pt, t_end);
  if (g1.smoothness() < s.alpha1 || g2.smoothness() < s.alpha2) {
    throw std::invalid_argument(
        "bias correction needs kernel derivatives up to the smoothness orders");
  }
  const SumTables t = continuous_tables(log, bw, g1, g2, pt, t_end,
                                        correction_a_list(1, s), correction_b_list(1, s));
  const BiasTerms terms = make_bias_terms(g1, g2, s, 1);
  return bias_from_tables(t, terms, bw, s, 1);
}

}  // namespace levykde
