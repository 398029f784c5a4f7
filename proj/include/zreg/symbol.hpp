#ifndef ZREG_SYMBOL_HPP
#define ZREG_SYMBOL_HPP

#include <zreg/expr.hpp>
#include <zreg/tables.hpp>

#include <map>
#include <string>
#include <vector>

namespace zreg
{

class DegenerateCase : public Error
{
public:
    using Error::Error;
};

class ZeroLeadingCoefficient : public Error
{
public:
    using Error::Error;
};

class NotInvolution : public Error
{
public:
    using Error::Error;
};

class ShapeMismatch : public Error
{
public:
    using Error::Error;
};

enum class AxisKind {
    position,
    momentum,
    field,  ///< constant field value; enters as a parameter, not integrated
    compact ///< torus direction; contributes a volume token
};

std::string to_string(AxisKind k);
AxisKind parse_axis_kind(const std::string &s);

struct Axis {
    std::string name;
    AxisKind kind = AxisKind::momentum;
    std::string group;  ///< gauge group; axes of one group share a regulator
    int dimension = 0;  ///< 0: the real line; N >= 1: radial variable of R^N

    bool integrated() const { return kind == AxisKind::position || kind == AxisKind::momentum; }
    bool radial() const { return dimension > 0; }
};

/// sigma = sum_a (h2_a u_a^2 + h1_a u_a) + h0, with the evolution factor
/// e^{-i T scale sigma}.
struct PhaseDecomposition {
    std::map<std::string, ParamPoly> h2;
    std::map<std::string, ParamPoly> h1;
    ParamPoly h0;
    ParamPoly scale = ParamPoly(1.0);

    ParamPoly quadratic(const std::string &axis) const;
    ParamPoly linear(const std::string &axis) const;
    AxisPoly assemble() const;
};

/// Splits a phase polynomial by axis. Every integrated axis needs h2 != 0 or
/// h1 != 0; monomials coupling two axes and degrees above 2 are refused.
PhaseDecomposition decompose_phase(const AxisPoly &sigma, const std::vector<Axis> &axes,
                                   const ParamPoly &scale = ParamPoly(1.0));

/// One term ||xi||^{d} (ln ||xi||)^{l} a~(xi/||xi||) of a polyhomogeneous
/// amplitude.
struct PolyhomTerm {
    Rational degree;
    int log_order = 0;
    AngularPoly angular;
};

struct PolyhomAmplitude {
    std::vector<PolyhomTerm> terms;
    /// Value of the integral of the integrable remainder, when known.
    ParamPoly remainder_integral;
};

/// Coefficients of (sum_k a_k X^k)^n to order X^M by the c_m recursion.
template <class T> std::vector<T> power_series_pow(const std::vector<T> &a, std::int64_t n, int M)
{
    if (a.empty() || a[0] == T(0)) {
        throw ZeroLeadingCoefficient("leading coefficient of the base series vanishes");
    }
    std::vector<T> c(static_cast<std::size_t>(M) + 1, T(0));
    c[0] = T(1);
    for (std::int64_t k = 0; k < n; ++k) {
        c[0] = c[0] * a[0];
    }
    for (int m = 1; m <= M; ++m) {
        T sum(0);
        for (int k = 1; k <= m && k < static_cast<int>(a.size()); ++k) {
            sum = sum + T(k * n - m + k) * a[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(m - k)];
        }
        c[static_cast<std::size_t>(m)] = sum / (T(m) * a[0]);
    }
    return c;
}

/// Coefficients of exp(s * sum_j a_j r^{-j}) in powers of r^{-1} to order M.
std::vector<complex> exp_asymptotic(const std::vector<complex> &a, complex s, int M);

using AngularMatrix = std::vector<std::vector<AngularPoly>>;

AngularMatrix identity_matrix(int n, int angular_dim);
AngularMatrix matmul(const AngularMatrix &a, const AngularMatrix &b);
AngularPoly trace(const AngularMatrix &m);

/// b I + c K with K^2 = I.
struct MatrixSymbol {
    int n = 1;
    int angular_dim = 1;
    AxisPoly b;
    AxisPoly c;
    AngularMatrix K;

    /// Checks K^2 = I at random unit directions; throws NotInvolution.
    void validate() const;
    /// The matrix b I + c K as an observable.
    std::vector<std::pair<AxisPoly, AngularMatrix>> as_terms() const;
};

/// One exponential of the evolution: e^{-i T scale phase} * matrix.
struct EvolutionBranch {
    AxisPoly phase;
    AngularMatrix matrix;
};

/// e^{-i(bI+cK)T} = e^{-i(b-c)T}(I-K)/2 + e^{-i(b+c)T}(I+K)/2.
std::vector<EvolutionBranch> involution_exp(const MatrixSymbol &m);

/// Sum of coefficient * matrix terms; `scalar` observables broadcast.
struct Observable {
    bool scalar = true;
    std::vector<std::pair<AxisPoly, AngularMatrix>> terms;

    static Observable scalar_value(const AxisPoly &p);
    static Observable matrix(std::vector<std::pair<AxisPoly, AngularMatrix>> terms);
};

/// Scalar trace-integrand term: e^{-i T scale phase} * amplitude * angular.
struct TraceTerm {
    AxisPoly phase;
    AxisPoly amplitude;
    AngularPoly angular;
};

/// Pointwise product of evolution and observable, traced.
std::vector<TraceTerm> compose_observable(const std::vector<EvolutionBranch> &evolution, const Observable &obs);

} // namespace zreg

#endif
