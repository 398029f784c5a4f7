#ifndef ZREG_LAURENT_HPP
#define ZREG_LAURENT_HPP

#include <zreg/scalar.hpp>

#include <compare>
#include <string>
#include <vector>

namespace zreg
{

class UnsupportedFactor : public Error
{
public:
    using Error::Error;
};

class ZeroOverZeroUnresolved : public Error
{
public:
    using Error::Error;
};

/// alpha * z + beta in one regulator.
struct Affine {
    Rational alpha;
    Rational beta;

    friend bool operator==(const Affine &, const Affine &) = default;
    friend auto operator<=>(const Affine &a, const Affine &b)
    {
        if (auto c = a.alpha <=> b.alpha; c != 0) {
            return c;
        }
        return a.beta <=> b.beta;
    }
    Affine operator+(const Affine &o) const { return {alpha + o.alpha, beta + o.beta}; }
    Affine operator*(const Rational &s) const { return {alpha * s, beta * s}; }
    std::string str(const std::string &reg) const;
};

/// One primitive meromorphic factor of the regulator.
struct PrimitiveFactor {
    enum class Kind { gamma, exp_i_pi, affine_power, const_power };

    Kind kind = Kind::gamma;
    Affine arg;                 ///< argument alpha*z + beta
    std::int64_t power = 1;     ///< affine_power only
    ParamPoly base;             ///< const_power only: positive monomial
    std::string regulator = "z";

    static PrimitiveFactor gamma(Affine a, std::string reg = "z");
    /// e^{i pi (alpha z + beta)}
    static PrimitiveFactor exp_i_pi(Affine a, std::string reg = "z");
    /// (alpha z + beta)^n
    static PrimitiveFactor affine_power(Affine a, std::int64_t n, std::string reg = "z");
    /// base^(alpha z + beta), base a positive monomial
    static PrimitiveFactor const_power(ParamPoly base, Affine a, std::string reg = "z");

    /// Local order at z = 0 (negative for poles).
    int order_at_zero() const;

    std::string render() const;

    /// Total order used for structural merging of terms.
    std::strong_ordering compare(const PrimitiveFactor &o) const;
    friend bool operator==(const PrimitiveFactor &a, const PrimitiveFactor &b)
    {
        return a.compare(b) == 0;
    }
    friend bool operator<(const PrimitiveFactor &a, const PrimitiveFactor &b)
    {
        return a.compare(b) < 0;
    }
};

/// prefactor * product of factors.
struct MeroFactorProduct {
    ParamPoly prefactor = ParamPoly(1.0);
    std::vector<PrimitiveFactor> factors;

    int pole_order() const;
    std::string render() const;
};

/// Truncated Laurent series sum_{k=lead}^{precision} c_k z^k with ParamPoly
/// coefficients. When every known coefficient vanishes the series is "zero
/// to precision" and has no coefficients.
class LaurentSeries
{
public:
    LaurentSeries() = default;
    LaurentSeries(int lead, std::vector<ParamPoly> coeffs);
    static LaurentSeries constant(ParamPoly c, int precision);
    static LaurentSeries zero(int precision);

    int lead_order() const { return lead_; }
    int precision() const { return precision_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<ParamPoly> &coeffs() const { return coeffs_; }
    const ParamPoly &leading() const;
    /// Coefficient of z^k; zero below the lead, throws above the precision.
    ParamPoly coefficient(int k) const;

    LaurentSeries operator*(const LaurentSeries &o) const;
    LaurentSeries operator+(const LaurentSeries &o) const;
    LaurentSeries operator-() const;
    LaurentSeries scaled(const ParamPoly &s) const;
    /// Series of exp(self) for a series with lead order >= 1.
    LaurentSeries exp_of_nilpotent(const ParamPoly &constant_exp_value) const;

    /// Numeric evaluation of the truncated sum at a complex point.
    complex eval(complex z, const Bindings &bindings) const;

    /// "c_{-p} z^{-p} + ..." rendering.
    std::string render(const std::string &reg = "z") const;

private:
    void normalize();

    int lead_ = 0;
    int precision_ = -1;
    std::vector<ParamPoly> coeffs_;
};

inline constexpr int default_series_order = 4;
inline constexpr int max_series_order = 16;

/// Series of one factor to K terms past its leading order.
LaurentSeries expand_factor(const PrimitiveFactor &f, int K);

/// Truncated product of the factor expansions times the prefactor.
LaurentSeries expand_product(const MeroFactorProduct &p, int K);

struct SeriesRatio {
    enum class Status { value, divergent };
    Status status = Status::value;
    ParamPoly value;
    int numerator_order = 0;
    int denominator_order = 0;
};

/// z -> 0 limit of n/d by leading-order comparison. Throws
/// ZeroOverZeroUnresolved when both are zero to precision.
SeriesRatio series_ratio(const LaurentSeries &n, const LaurentSeries &d);

/// Quotient of two leading coefficients. The denominator must be a
/// monomial, or the numerator a constant multiple of it.
ParamPoly divide_coefficients(const ParamPoly &num, const ParamPoly &den);

} // namespace zreg

#endif
