#pragma once

// Special functions backing the shipped distribution families.

namespace monofn::special {

double normal_cdf(double z);
double normal_pdf(double z);

// Standard normal quantile, accurate to a few ulps on (0, 1).
double normal_quantile(double p);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
// Series below x = a + 1, Lentz continued fraction above.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double digamma(double x);
double trigamma(double x);

}  // namespace monofn::special
