#pragma once

#include <stdexcept>
#include <vector>

namespace levykde {

// A multi-index m = (m_1, ..., m_d) of partial-derivative orders. Dimensions
// stay tiny (d <= 3, orders <= 4), so plain vectors and recursive
// enumeration are plenty.
using MultiIndex = std::vector<int>;

inline int mi_order(const MultiIndex& m) {
  int s = 0;
  for (int v : m) {
    if (v < 0) throw std::invalid_argument("multi-index components must be >= 0");
    s += v;
  }
  return s;
}

inline double mi_factorial(const MultiIndex& m) {
  double f = 1.0;
  for (int v : m) {
    for (int i = 2; i <= v; ++i) f *= i;
  }
  return f;
}

// Componentwise a <= b.
inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index dim mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index dim mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline MultiIndex mi_sub(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index dim mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > a[i]) throw std::invalid_argument("multi-index subtraction underflow");
    r[i] = a[i] - b[i];
  }
  return r;
}

// Product of componentwise binomial coefficients C(m_i, j_i).
inline double mi_binomial(const MultiIndex& m, const MultiIndex& j) {
  if (m.size() != j.size()) throw std::invalid_argument("multi-index dim mismatch");
  double prod = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (j[i] > m[i]) return 0.0;
    double c = 1.0;
    for (int k = 0; k < j[i]; ++k) c = c * (m[i] - k) / (k + 1);
    prod *= c;
  }
  return prod;
}

namespace detail {
inline void enumerate_order(int dim, int pos, int remaining, MultiIndex& cur,
                            std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur[pos] = v;
    enumerate_order(dim, pos + 1, remaining - v, cur, out);
  }
}
}  // namespace detail

// All m in N^dim with |m| == order, lexicographic in the leading components.
inline std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  if (dim < 1) throw std::invalid_argument("multi-index dim must be >= 1");
  if (order < 0) throw std::invalid_argument("multi-index order must be >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(dim), 0);
  detail::enumerate_order(dim, 0, order, cur, out);
  return out;
}

// All m with |m| <= max_order, grouped by total order.
inline std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= max_order; ++k) {
    auto layer = multi_indices_of_order(dim, k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// All j with j <= m componentwise (includes 0 and m itself).
inline std::vector<MultiIndex> sub_indices(const MultiIndex& m) {
  std::vector<MultiIndex> out;
  MultiIndex cur(m.size(), 0);
  std::size_t d = m.size();
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < d && cur[i] == m[i]) {
      cur[i] = 0;
      ++i;
    }
    if (i == d) break;
    ++cur[i];
  }
  return out;
}

}  // namespace levykde
