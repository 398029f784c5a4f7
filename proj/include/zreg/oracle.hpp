#ifndef ZREG_ORACLE_HPP
#define ZREG_ORACLE_HPP

#include <zreg/engine.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

/// Independent numerics used to check the symbolic engine.
namespace zreg::oracle
{

class NonConvergent : public Error
{
public:
    using Error::Error;
};

class DivergenceDetected : public Error
{
public:
    using Error::Error;
};

/// Complex Gamma by the Lanczos approximation (g = 7).
complex gamma(complex z);

complex eval_factor(const PrimitiveFactor &f, complex z, const Bindings &bindings);
/// Numeric value of a term at regulator values z and time T. Tokens with a
/// known exponent are evaluated; opaque tokens count as 1.
complex eval_term(const ZetaTerm &t, const std::map<std::string, complex> &z, double T, const Bindings &bindings);
complex eval_sum(const ZetaTermSum &s, const std::map<std::string, complex> &z, double T, const Bindings &bindings);

struct Estimate {
    complex value;
    double error = 0.0;
};

enum class Damping { linear, gaussian };

struct DampingOptions {
    double eps0 = 0.5;
    int levels = 7;
    double tolerance = 1e-6;
};

/// lim_{eps->0} int_0^inf f(r) w_eps(r) dr with w_eps = e^{-eps s r} (linear)
/// or e^{-eps s r^2} (gaussian), by polynomial extrapolation over a geometric
/// eps sequence. `s` sets the oscillation scale of f.
Estimate damped_quadrature(const std::function<complex(double)> &f, Damping kind, double s,
                           const DampingOptions &opt = {});

/// Polynomial extrapolation of samples (x_k, y_k) to x = 0.
Estimate extrapolate_to_zero(const std::vector<double> &x, const std::vector<complex> &y);

/// Integral of an angular polynomial over the unit sphere by quadrature.
complex sphere_quadrature(const AngularPoly &a, const Bindings &bindings);

/// Direct numeric value of a gauged integrand with every regulator at z.
complex integrate(const GaugedTraceIntegrand &g, double z, double T, const Bindings &bindings);

/// z -> 0 extrapolation of numerator/denominator from samples at each z.
Estimate small_z_ratio(const GaugedTraceIntegrand &num, const GaugedTraceIntegrand &den,
                       const std::vector<double> &z_samples, double T, const Bindings &bindings);

struct SweepResult {
    complex limit;
    double exponent = 0.0; ///< fitted power of the decaying part
    double spread = 0.0;   ///< variation of the fitted power across the grid
};

/// Fits f(T) = c + a T^p on a geometric grid; p >= 0 raises DivergenceDetected.
SweepResult finite_T_sweep(const std::function<complex(double)> &f, const std::vector<double> &grid);

/// All roots of sum_k c_k x^k (Durand-Kerner, then Newton polishing).
std::vector<complex> polynomial_roots(const std::vector<complex> &coeffs);

/// Richardson-extrapolated central second difference.
double second_derivative(const std::function<double(double)> &f, double x, double h = 1e-2);

} // namespace zreg::oracle

#endif
