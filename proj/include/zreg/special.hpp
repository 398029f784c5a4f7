#ifndef ZREG_SPECIAL_HPP
#define ZREG_SPECIAL_HPP

namespace zreg::special
{

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Gamma on the real axis; throws zreg::Error at poles.
double gamma(double x);

/// psi^(n)(x) for real x away from the poles. Values are cached per (n, x).
double polygamma(int n, double x);

} // namespace zreg::special

#endif
