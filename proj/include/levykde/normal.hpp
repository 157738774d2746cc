#pragma once

namespace levykde {

// Standard normal cdf, pdf and quantile. The quantile refines a rational
// first guess with Newton steps on the cdf, giving errors far below 1e-8
// across the whole open interval.
double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;
double normal_quantile(double p);  // throws std::domain_error unless p in (0,1)

}  // namespace levykde
