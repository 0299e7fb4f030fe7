#pragma once

namespace briervar {

/// erf and erfc via the rational Chebyshev approximations of Cody (1969);
/// about 1e-16 relative accuracy over the full double range.
double erf_rational(double x);
double erfc_rational(double x);

/// Standard Gaussian CDF.
double gaussian_cdf(double x);

/// Gaussian CDF with mean mu and standard deviation sigma > 0.
double gaussian_cdf(double x, double mu, double sigma);

}  // namespace briervar
