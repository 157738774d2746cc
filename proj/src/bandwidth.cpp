#include "levykde/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levykde {

namespace {

constexpr double kExpTol = 1e-9;

// A quantity coeff * n^exponent of the scale parameter.
struct PowerLaw {
  double coeff = 1.0;
  double exponent = 0.0;
  PowerLaw operator*(const PowerLaw& o) const { return {coeff * o.coeff, exponent + o.exponent}; }
  PowerLaw pow(double p) const { return {std::pow(coeff, p), exponent * p}; }
};

enum class Requirement { to_zero, to_infinity, finite_limit, bounded };

ConditionEntry classify(std::string id, std::string description, const PowerLaw& p,
                        Requirement req) {
  ConditionEntry e;
  e.id = std::move(id);
  e.description = std::move(description);
  e.exponent = p.exponent;
  const bool flat = std::abs(p.exponent) <= kExpTol;
  switch (req) {
    case Requirement::to_zero:
      if (flat) {
        e.status = ConditionStatus::boundary;
        e.limit_constant = p.coeff;
        e.ok = false;
      } else if (p.exponent < 0.0) {
        e.status = ConditionStatus::satisfied;
        e.ok = true;
      } else {
        e.status = ConditionStatus::violated;
        e.ok = false;
      }
      break;
    case Requirement::to_infinity:
      if (flat) {
        e.status = ConditionStatus::boundary;
        e.limit_constant = p.coeff;
        e.ok = false;
      } else if (p.exponent > 0.0) {
        e.status = ConditionStatus::satisfied;
        e.ok = true;
      } else {
        e.status = ConditionStatus::violated;
        e.ok = false;
      }
      break;
    case Requirement::finite_limit:
    case Requirement::bounded:
      // a finite limit (possibly zero) is acceptable; only growth breaks it
      if (flat) {
        e.status = ConditionStatus::boundary;
        e.limit_constant = p.coeff;
        e.ok = true;
      } else if (p.exponent < 0.0) {
        e.status = ConditionStatus::satisfied;
        e.limit_constant = 0.0;
        e.ok = true;
      } else {
        e.status = ConditionStatus::violated;
        e.ok = false;
      }
      break;
  }
  return e;
}

void validate_regime(const AsymptoticRegime& r) {
  if (!(r.alpha1 > 0.0) || !(r.alpha2 > 0.0)) {
    throw std::invalid_argument("regime: smoothness orders must be > 0");
  }
  if (r.d < 1) throw std::invalid_argument("regime: d must be >= 1");
  if (!(r.beta >= 0.0) || !(r.beta <= 2.0)) {
    throw std::invalid_argument("regime: beta must lie in [0, 2]");
  }
  if (!(r.delta > 0.0) || !(r.delta <= 1.0)) {
    throw std::invalid_argument("regime: ergodic-rate exponent delta must lie in (0, 1]");
  }
}

}  // namespace

OptimalExponents optimal_exponents(const AsymptoticRegime& r) {
  validate_regime(r);
  const double denom = r.d * (r.alpha1 + r.alpha2) + 2.0 * r.alpha1 * r.alpha2;
  OptimalExponents e;
  e.xi1 = r.alpha2 / denom;
  e.xi2 = r.alpha1 / denom;
  e.rate_exponent = r.alpha1 * r.alpha2 / denom;
  return e;
}

bool ConditionReport::satisfied() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ConditionEntry& e) { return e.ok; });
}

const ConditionEntry* ConditionReport::find(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::string ConditionReport::table() const {
  std::ostringstream os;
  os << "condition  status     exponent      limit  requirement\n";
  for (const auto& e : entries) {
    const char* status = e.status == ConditionStatus::satisfied   ? "satisfied"
                         : e.status == ConditionStatus::violated ? "violated "
                                                                 : "boundary ";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s %s %12.5g ", e.id.c_str(), status, e.exponent);
    os << buf;
    if (e.limit_constant) {
      std::snprintf(buf, sizeof(buf), "%10.5g  ", *e.limit_constant);
      os << buf;
    } else {
      os << "         -  ";
    }
    os << e.description << "\n";
  }
  return os.str();
}

ConditionReport check_conditions(const DiscretisationFamily& fam,
                                 const PowerLawBandwidth& eta1,
                                 const PowerLawBandwidth& eta2,
                                 const AsymptoticRegime& r) {
  validate_regime(r);
  if (!(fam.delta_coeff > 0.0)) throw std::invalid_argument("delta_coeff must be > 0");
  if (fam.delta_exponent < 0.0) {
    throw std::invalid_argument("delta_exponent must be >= 0 (Delta must not grow)");
  }
  if (!(eta1.coeff > 0.0) || !(eta2.coeff > 0.0)) {
    throw std::invalid_argument("bandwidth coefficients must be > 0");
  }

  const double d = static_cast<double>(r.d);
  const PowerLaw delta{fam.delta_coeff, -fam.delta_exponent};
  const PowerLaw n{1.0, 1.0};
  const PowerLaw span = n * delta;  // n Delta
  const PowerLaw v = span.pow(r.delta);
  const PowerLaw e1 = PowerLaw{eta1.coeff, 0.0} * span.pow(-eta1.exponent);
  const PowerLaw e2 = PowerLaw{eta2.coeff, 0.0} * span.pow(-eta2.exponent);

  ConditionReport rep;
  rep.entries.push_back(classify("2.7a", "v * eta1^d * eta2^d -> infinity",
                                 v * e1.pow(d) * e2.pow(d), Requirement::to_infinity));
  rep.entries.push_back(classify("2.7b", "eta1 -> 0", e1, Requirement::to_zero));
  rep.entries.push_back(classify("2.7c", "eta2 -> 0", e2, Requirement::to_zero));
  rep.entries.push_back(classify("2.8a", "v * eta1^(d+2*alpha1) * eta2^d -> zeta1^2",
                                 v * e1.pow(d + 2.0 * r.alpha1) * e2.pow(d),
                                 Requirement::finite_limit));
  rep.entries.push_back(classify("2.8b", "v * eta1^d * eta2^(d+2*alpha2) -> zeta2^2",
                                 v * e1.pow(d) * e2.pow(d + 2.0 * r.alpha2),
                                 Requirement::finite_limit));

  const double grow1 = std::max(1.0 - 2.0 / (r.beta + d), 0.0);
  rep.entries.push_back(classify("2.9a1", "Delta * eta1^(-2 - d*max(1-2/(beta+d),0)) -> 0",
                                 delta * e1.pow(-2.0 - d * grow1), Requirement::to_zero));
  rep.entries.push_back(classify("2.9a2", "Delta * eta2^(-max(2, beta+d)) -> 0",
                                 delta * e2.pow(-std::max(2.0, r.beta + d)),
                                 Requirement::to_zero));
  rep.entries.push_back(classify("2.9b1", "n * Delta^2 * eta1^d * eta2^d bounded",
                                 n * delta.pow(2.0) * e1.pow(d) * e2.pow(d),
                                 Requirement::bounded));
  const double shrink1 = std::min(1.0 - 2.0 / (r.beta + d), 0.0);
  rep.entries.push_back(
      classify("2.9b2", "v * Delta^2 * eta1^(d-4-2d*min(1-2/(beta+d),0)) * eta2^d -> 0",
               v * delta.pow(2.0) * e1.pow(d - 4.0 - 2.0 * d * shrink1) * e2.pow(d),
               Requirement::to_zero));
  rep.entries.push_back(
      classify("2.9c", "v * Delta^2 * eta1^d * eta2^(d-max(4, 2(beta+d))) -> 0",
               v * delta.pow(2.0) * e1.pow(d) *
                   e2.pow(d - std::max(4.0, 2.0 * (r.beta + d))),
               Requirement::to_zero));
  return rep;
}

ConditionReport check_conditions_continuous(const PowerLawBandwidth& eta1,
                                            const PowerLawBandwidth& eta2,
                                            const AsymptoticRegime& r) {
  validate_regime(r);
  if (!(eta1.coeff > 0.0) || !(eta2.coeff > 0.0)) {
    throw std::invalid_argument("bandwidth coefficients must be > 0");
  }
  const double d = static_cast<double>(r.d);
  // scale parameter is the horizon t
  const PowerLaw t{1.0, 1.0};
  const PowerLaw v = t.pow(r.delta);
  const PowerLaw e1 = PowerLaw{eta1.coeff, 0.0} * t.pow(-eta1.exponent);
  const PowerLaw e2 = PowerLaw{eta2.coeff, 0.0} * t.pow(-eta2.exponent);

  ConditionReport rep;
  rep.entries.push_back(classify("3.2a", "v * eta1^d * eta2^d -> infinity",
                                 v * e1.pow(d) * e2.pow(d), Requirement::to_infinity));
  rep.entries.push_back(classify("3.2b", "eta1 -> 0", e1, Requirement::to_zero));
  rep.entries.push_back(classify("3.2c", "eta2 -> 0", e2, Requirement::to_zero));
  rep.entries.push_back(classify("3.3a", "v * eta1^(d+2*alpha1) * eta2^d -> zeta1^2",
                                 v * e1.pow(d + 2.0 * r.alpha1) * e2.pow(d),
                                 Requirement::finite_limit));
  rep.entries.push_back(classify("3.3b", "v * eta1^d * eta2^(d+2*alpha2) -> zeta2^2",
                                 v * e1.pow(d) * e2.pow(d + 2.0 * r.alpha2),
                                 Requirement::finite_limit));
  return rep;
}

double unreliable_threshold(double sigma, double delta_obs, double zeta) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("unreliable_threshold: sigma >= 0");
  if (!(delta_obs > 0.0)) throw std::invalid_argument("unreliable_threshold: delta > 0");
  if (!(zeta > 0.0)) throw std::invalid_argument("unreliable_threshold: zeta > 0");
  return zeta * sigma * std::sqrt(delta_obs);
}

double delta_speed_critical_exponent(const AsymptoticRegime& r) {
  validate_regime(r);
  const double d = static_cast<double>(r.d);
  const double big_d = d * (r.alpha1 + r.alpha2) + 2.0 * r.alpha1 * r.alpha2;
  const double zeta = std::max({(1.0 - r.delta) * d * (r.alpha1 + r.alpha2) +
                                    2.0 * r.alpha1 * r.alpha2,
                                r.delta * r.alpha1 * (r.alpha2 + 2.0 + d),
                                r.delta * r.alpha2 * (r.alpha1 + 2.0 + d * d / (2.0 + d))});
  // n Delta^(1 + big_d/zeta) -> 0 with Delta = n^(-q) needs q > zeta/(zeta + big_d)
  return zeta / (zeta + big_d);
}

}  // namespace levykde
