#pragma once

#include <optional>
#include <string>
#include <vector>

namespace levykde {

// eta(n) = coeff * (n Delta_n)^(-exponent): bandwidths are tied to the
// growing observation span, not to n itself.
struct PowerLawBandwidth {
  double coeff = 1.0;
  double exponent = 0.0;
};

// Delta_n = delta_coeff * n^(-delta_exponent); the scale parameter of every
// asymptotic statement below is n.
struct DiscretisationFamily {
  double delta_coeff = 1.0;
  double delta_exponent = 0.5;
};

// Problem dimensions: smoothness orders alpha1/alpha2, state dimension d,
// small-jump activity beta, and the exponent delta of the ergodic rate
// v_T = T^delta (delta = 1 is the positive-recurrent case).
struct AsymptoticRegime {
  double alpha1 = 2.0;
  double alpha2 = 2.0;
  int d = 1;
  double beta = 0.95;
  double delta = 1.0;
};

// Bandwidth exponents balancing squared bias against variance, and the
// resulting rate exponent of the estimation error in v_T.
struct OptimalExponents {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double rate_exponent = 0.0;
};

OptimalExponents optimal_exponents(const AsymptoticRegime&);

enum class ConditionStatus { satisfied, violated, boundary };

struct ConditionEntry {
  std::string id;
  std::string description;
  ConditionStatus status = ConditionStatus::satisfied;
  // growth exponent of the checked quantity in the scale parameter
  double exponent = 0.0;
  // limiting constant where finite limits are meaningful (boundary cases)
  std::optional<double> limit_constant;
  // whether this entry is acceptable for the asymptotic theory (boundary is
  // acceptable for finite-limit/boundedness conditions only)
  bool ok = true;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  bool satisfied() const;
  const ConditionEntry* find(const std::string& id) const;
  std::string table() const;  // aligned human-readable summary
};

// Checks the bandwidth/discretisation conditions of the discrete-observation
// central limit theory: span growth, variance-bias balance, and the three
// discretisation-error bounds.
ConditionReport check_conditions(const DiscretisationFamily&, const PowerLawBandwidth& eta1,
                                 const PowerLawBandwidth& eta2, const AsymptoticRegime&);

// Continuous-record analogue (bandwidths are power laws of the horizon t;
// no discretisation entries).
ConditionReport check_conditions_continuous(const PowerLawBandwidth& eta1,
                                            const PowerLawBandwidth& eta2,
                                            const AsymptoticRegime&);

// |y| below this cannot be told apart from diffusion noise at observation
// spacing delta_obs.
double unreliable_threshold(double sigma, double delta_obs, double zeta = 5.0);

// Critical exponent q*: sampling families Delta_n ~ n^(-q) with q > q* are
// fast enough for the full bias-corrected theory at the optimal bandwidths.
double delta_speed_critical_exponent(const AsymptoticRegime&);

}  // namespace levykde
