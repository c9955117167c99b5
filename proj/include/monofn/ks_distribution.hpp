#pragma once

// Law of sup_{0<=y<=1} |B(y)| for a standard Brownian bridge B.

namespace monofn {

// P(sup|B| > c) = 2 sum_{k>=1} (-1)^(k+1) exp(-2 k^2 c^2), clamped to [0, 1].
// For c < 1 the equivalent theta-function form
//   P(sup|B| <= c) = sqrt(2 pi) / c sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 c^2))
// is used; both are truncated once the next term drops below 1e-14.
double ks_sup_tail(double c);

// d/dc of ks_sup_tail.
double ks_sup_tail_derivative(double c);

// c with ks_sup_tail(c) = 1 - p: bisection on [1e-6, 10] then Newton polish.
double ks_sup_quantile(double p);

}  // namespace monofn
