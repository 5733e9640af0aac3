#pragma once

namespace igp {

// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
// Continued-fraction evaluation with the symmetry switch at
// x > (a + 1) / (a + b + 2); the prefactor is assembled in log space.
// Absolute accuracy ~1e-14 over the parameter range used here
// (a up to ~2000, b >= 0.5 and also small b for the symmetric calls).
double beta_cdf(double a, double b, double x);

// Density of the Beta(a, b) law, log-space evaluation.
double beta_pdf(double a, double b, double x);

// Smallest x with beta_cdf(a, b, x) = q, solved by bracketed Newton with
// bisection fallback. Terminates with |beta_cdf(x) - q| <= 1e-12 or a
// bracket narrower than 4 ulp; never more than 200 iterations. q must lie
// strictly inside (0, 1); q in deep tails (1e-12) is supported.
double beta_inv_cdf(double a, double b, double q);

}  // namespace igp
