#ifndef ZREG_EXPR_HPP
#define ZREG_EXPR_HPP

#include <zreg/scalar.hpp>

#include <map>
#include <set>
#include <string>

namespace zreg
{

class ParseError : public Error
{
public:
    ParseError(int line, int column, const std::string &what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Axis name -> nonnegative integer power.
using AxisMonomial = std::map<std::string, int>;

/// Polynomial in integration axes with ParamPoly coefficients.
class AxisPoly
{
public:
    using TermMap = std::map<AxisMonomial, ParamPoly>;

    AxisPoly() = default;
    AxisPoly(const ParamPoly &c);
    static AxisPoly axis(const std::string &name, int power = 1);

    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// True when no axis appears.
    bool is_param() const;
    /// The coefficient of the axis-free monomial.
    ParamPoly constant_part() const;
    /// Axis-free value; throws if an axis appears.
    ParamPoly as_param() const;

    void add_term(AxisMonomial m, const ParamPoly &c);
    AxisPoly operator-() const;
    AxisPoly &operator+=(const AxisPoly &o);
    AxisPoly &operator-=(const AxisPoly &o);
    friend AxisPoly operator+(AxisPoly a, const AxisPoly &b) { return a += b; }
    friend AxisPoly operator-(AxisPoly a, const AxisPoly &b) { return a -= b; }
    friend AxisPoly operator*(const AxisPoly &a, const AxisPoly &b);
    AxisPoly scaled(const ParamPoly &s) const;
    AxisPoly pow(int n) const;

    int degree(const std::string &axis) const;
    std::set<std::string> axes() const;
    /// Splits by the power of `axis`: power -> poly without `axis`.
    std::map<int, AxisPoly> collect(const std::string &axis) const;

    /// Numeric value with axes and parameters bound.
    complex eval(const Bindings &bindings) const;
    std::string render(RenderStyle style = RenderStyle::canonical) const;
    bool approx_equal(const AxisPoly &o, double rel_tol = 1e-9) const;

private:
    TermMap terms_;
};

/// Names visible to the expression parser. Identifiers `i`, `pi` and `T`
/// are always defined.
struct ExprContext {
    std::set<std::string> axes;
    std::set<std::string> params;
};

/// Parses an expression. Positions in errors are reported relative to
/// (line, first_column).
AxisPoly parse_expression(const std::string &text, const ExprContext &ctx, int line = 1, int first_column = 1);

} // namespace zreg

#endif
