#ifndef ZREG_SCALAR_HPP
#define ZREG_SCALAR_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zreg
{

using complex = std::complex<double>;

/// Base class of every error raised by the engine.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class UnboundParameter : public Error
{
public:
    explicit UnboundParameter(const std::string &name)
        : Error("unbound parameter: " + name), name_(name)
    {
    }
    const std::string &name() const { return name_; }

private:
    std::string name_;
};

/// Exact rational with 64-bit numerator and positive denominator.
class Rational
{
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    double to_double() const { return double(num_) / double(den_); }

    Rational operator-() const { return Rational(-num_, den_); }
    Rational &operator+=(const Rational &o);
    Rational &operator-=(const Rational &o);
    Rational &operator*=(const Rational &o);
    Rational &operator/=(const Rational &o);

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

    friend bool operator==(const Rational &a, const Rational &b) = default;
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

    /// "p" or "p/q".
    std::string str() const;

    /// Largest integer <= value.
    std::int64_t floor() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// A declared symbolic parameter. Every physical parameter is positive;
/// field variables (e.g. a constant scalar field) are declared non-positive
/// and may then only carry integer exponents.
struct Param {
    std::string name;
    bool positive = true;
    std::optional<double> numeric_default;
};

/// Name of the time-volume symbol. It is an ordinary positive symbol in
/// ParamPoly; the asymptotic layer treats its powers specially.
inline const std::string time_symbol = "T";

/// Name of the log-symbol of a parameter, e.g. ln(T).
std::string log_symbol(const std::string &param);
/// Inverse of log_symbol; empty when name is not a log-symbol.
std::string log_symbol_base(const std::string &name);

using ExponentMap = std::map<std::string, Rational>;
using Bindings = std::map<std::string, double>;

enum class RenderStyle {
    canonical, ///< "1/2 * hbar * omega", "lambda^-1/2"
    pretty,    ///< "(1/2)·hbar·omega"
    source     ///< re-parseable: "(1/2)*hbar*omega", "lambda^(-1/2)"
};

/// Sum of monomials c * prod p^e with complex floating-point coefficients and
/// rational exponents. Canonical: no two terms share an exponent map, no
/// zero coefficients, no zero exponents.
class ParamPoly
{
public:
    using TermMap = std::map<ExponentMap, complex>;

    ParamPoly() = default;
    ParamPoly(complex c);
    ParamPoly(double c) : ParamPoly(complex(c)) {}
    ParamPoly(int c) : ParamPoly(complex(double(c))) {}
    ParamPoly(const Rational &r) : ParamPoly(complex(r.to_double())) {}

    static ParamPoly symbol(const std::string &name, Rational exponent = Rational(1));
    static ParamPoly monomial(complex coeff, ExponentMap exps);
    static ParamPoly imag_unit() { return ParamPoly(complex(0.0, 1.0)); }
    static ParamPoly pi() { return symbol("pi"); }

    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    /// True when the only term has an empty exponent map (or the poly is zero).
    bool is_constant() const;
    /// Value of a constant poly; throws if not constant.
    complex constant_value() const;

    ParamPoly operator-() const;
    ParamPoly &operator+=(const ParamPoly &o);
    ParamPoly &operator-=(const ParamPoly &o);
    ParamPoly &operator*=(const ParamPoly &o);
    friend ParamPoly operator+(ParamPoly a, const ParamPoly &b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly &b) { return a -= b; }
    friend ParamPoly operator*(const ParamPoly &a, const ParamPoly &b);
    ParamPoly scaled(complex s) const;

    /// Rational power of a monomial. Throws Error for sums.
    ParamPoly pow(const Rational &e) const;
    /// Exact division by a monomial. Throws Error for sums.
    ParamPoly divided_by(const ParamPoly &monomial) const;

    /// Highest/lowest exponent of a symbol across the terms (0 if absent).
    Rational max_exponent(const std::string &name) const;
    Rational min_exponent(const std::string &name) const;
    bool depends_on(const std::string &name) const;

    /// Splits by the exponent of `name`: exponent -> poly without `name`.
    std::map<Rational, ParamPoly> collect(const std::string &name) const;

    /// Every symbol appearing in the poly.
    std::vector<std::string> symbols() const;

    /// Numeric value. `pi` is bound automatically; ln(p) evaluates to log of p.
    complex eval(const Bindings &bindings) const;

    std::string render(RenderStyle style = RenderStyle::canonical) const;

    /// Structural equality with relative tolerance on coefficients.
    bool approx_equal(const ParamPoly &o, double rel_tol = 1e-9) const;

private:
    void add_term(const ExponentMap &exps, complex c, double scale);

    TermMap terms_;
};

/// Formats a real coefficient, recognizing small rationals and square roots
/// of small rationals.
std::string format_real(double x, RenderStyle style);
std::string format_complex(complex c, RenderStyle style);

/// Best rational approximation with denominator <= max_den within tol; empty
/// if none.
std::optional<Rational> recognize_rational(double x, std::int64_t max_den = 1000,
                                           double rel_tol = 1e-10);

/// Relative zero test used whenever sums are formed.
inline bool negligible(complex value, double scale, double rel_tol = 1e-12)
{
    return std::abs(value) <= rel_tol * scale;
}

} // namespace zreg

#endif
