#ifndef MOG_CHI_SQUARED_HPP
#define MOG_CHI_SQUARED_HPP

#include <cstdint>

namespace mog {

// Regularized upper incomplete gamma function Q(a, x) = Γ(a, x) / Γ(a).
// a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// Survival function of the chi-squared distribution with `dof` degrees of
// freedom, 1 - P(dof/2, x/2). Underflows gracefully to 0. Throws
// ContractError for x < 0 or dof == 0.
double chi_squared_sf(double x, std::uint64_t dof);

} // namespace mog

#endif
