#ifndef ZREG_ASYMPTOTIC_HPP
#define ZREG_ASYMPTOTIC_HPP

#include <zreg/laurent.hpp>
#include <zreg/scalar.hpp>

#include <optional>
#include <string>
#include <vector>

namespace zreg
{

class PoleAtZero : public Error
{
public:
    PoleAtZero(int order, std::string residue)
        : Error("pole of order " + std::to_string(order) + " at z = 0, leading coefficient " + residue),
          order_(order), residue_(std::move(residue))
    {
    }
    int order() const { return order_; }
    const std::string &residue() const { return residue_; }

private:
    int order_;
    std::string residue_;
};

class DivergentLimit : public Error
{
public:
    using Error::Error;
};

class UncancelledToken : public Error
{
public:
    using Error::Error;
};

/// An opaque factor that must appear identically in numerator and
/// denominator. When the factor is a known exponential e^{exponent}, the
/// exponent is kept for diagnostics and for the effective potential.
struct CancellingFactor {
    std::string id;
    std::optional<ParamPoly> exponent;

    friend bool operator==(const CancellingFactor &a, const CancellingFactor &b) { return a.id == b.id; }
    friend auto operator<=>(const CancellingFactor &a, const CancellingFactor &b) { return a.id <=> b.id; }
};

/// offset + sum_r slope_r * z_r
struct TExponent {
    std::map<std::string, Rational> slope;
    Rational offset;

    friend bool operator==(const TExponent &, const TExponent &) = default;
    friend auto operator<=>(const TExponent &a, const TExponent &b)
    {
        if (auto c = a.slope <=> b.slope; c != 0) {
            return c;
        }
        return a.offset <=> b.offset;
    }
    TExponent &operator+=(const TExponent &o);
    std::string str() const;
};

/// prefactor * prod factors * T^{t_exponent} * prod tokens
struct ZetaTerm {
    ParamPoly prefactor = ParamPoly(1.0);
    std::vector<PrimitiveFactor> factors;
    TExponent t_exponent;
    std::vector<CancellingFactor> tokens;

    /// Sorts factors and tokens.
    void canonicalize();
    std::string render() const;
};

/// Finite sum of ZetaTerms sharing a regulator list (in elimination order).
class ZetaTermSum
{
public:
    ZetaTermSum() = default;
    explicit ZetaTermSum(std::vector<std::string> regulators) : regulators_(std::move(regulators)) {}

    const std::vector<std::string> &regulators() const { return regulators_; }
    const std::vector<ZetaTerm> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add(ZetaTerm t);
    ZetaTermSum &operator+=(const ZetaTermSum &o);
    ZetaTermSum scaled(const ParamPoly &s) const;

    /// Merges structurally identical terms and drops zero terms.
    void canonicalize();

    std::string render() const;

private:
    std::vector<std::string> regulators_;
    std::vector<ZetaTerm> terms_;
};

/// Laurent series in one regulator whose coefficients are term sums in the
/// remaining regulators.
struct RegulatorSeries {
    std::string regulator;
    int lead = 0;
    int precision = 0;
    std::vector<ZetaTermSum> coeffs; ///< lead .. precision; empty if zero to precision

    bool is_zero() const { return coeffs.empty(); }
};

RegulatorSeries expand_in_regulator(const ZetaTermSum &s, int K);

struct TAsymptoteTerm {
    ParamPoly coeff;
    Rational t_power;
    int log_power = 0;
};

/// Function of T: sum coeff * T^t_power * (ln T)^log_power.
class TAsymptote
{
public:
    TAsymptote() = default;
    /// Splits a poly by the exponents of T and ln(T).
    static TAsymptote from_poly(const ParamPoly &p);

    const std::vector<TAsymptoteTerm> &terms() const { return terms_; }
    ParamPoly to_poly() const;
    complex eval(const Bindings &bindings, double T) const;
    std::string render() const;

private:
    std::vector<TAsymptoteTerm> terms_;
};

struct ThermalLimit {
    bool divergent = false;
    ParamPoly value;
    std::string diagnostic;
};

/// Per-regulator record of the leading orders met while taking limits.
struct LimitDiagnostic {
    std::string regulator;
    int numerator_order = 0;
    int denominator_order = 0;
    int series_order = 0;
    std::string numerator_leading;
    std::string denominator_leading;
};

/// Tokens present in every term of both sums.
std::vector<CancellingFactor> common_tokens(const ZetaTermSum &a, const ZetaTermSum &b);
/// Removes one instance of each listed token from every term.
ZetaTermSum strip_tokens(const ZetaTermSum &s, const std::vector<CancellingFactor> &tokens);

/// Value of the meromorphic extension at z = 0 (sequentially over the
/// regulators). Throws PoleAtZero when a pole survives.
TAsymptote value_at_zero(const ZetaTermSum &s, int K = default_series_order);

/// z -> 0 limit of n/d at fixed T, with shared tokens cancelled first.
/// Raises the series order on 0/0 up to max_series_order.
TAsymptote ratio_limit(const ZetaTermSum &n, const ZetaTermSum &d, int K = default_series_order,
                       std::vector<LimitDiagnostic> *diagnostics = nullptr);

/// T -> infinity: decaying terms vanish, constants survive, anything else
/// diverges.
ThermalLimit thermal_limit(const TAsymptote &t);

} // namespace zreg

#endif
