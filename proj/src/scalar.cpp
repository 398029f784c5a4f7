#include <zreg/scalar.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace zreg
{

namespace
{

std::int64_t checked(__int128 v)
{
    if (v > INT64_MAX || v < INT64_MIN) {
        throw Error("rational overflow");
    }
    return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b)
{
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) {
        throw Error("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = std::gcd(num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
}

Rational &Rational::operator+=(const Rational &o)
{
    const __int128 n = __int128(num_) * o.den_ + __int128(o.num_) * den_;
    const __int128 d = __int128(den_) * o.den_;
    const __int128 g = gcd128(n < 0 ? -n : n, d);
    *this = Rational(checked(g ? n / g : 0), checked(g ? d / g : 1));
    return *this;
}

Rational &Rational::operator-=(const Rational &o) { return *this += -o; }

Rational &Rational::operator*=(const Rational &o)
{
    const auto g1 = std::gcd(num_, o.den_);
    const auto g2 = std::gcd(o.num_, den_);
    const __int128 n = __int128(g1 ? num_ / g1 : 0) * (g2 ? o.num_ / g2 : 0);
    const __int128 d = __int128(g2 ? den_ / g2 : den_) * (g1 ? o.den_ / g1 : o.den_);
    *this = Rational(checked(n), checked(d));
    return *this;
}

Rational &Rational::operator/=(const Rational &o)
{
    if (o.num_ == 0) {
        throw Error("rational division by zero");
    }
    return *this *= Rational(o.den_, o.num_);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b)
{
    const __int128 l = __int128(a.num_) * b.den_;
    const __int128 r = __int128(b.num_) * a.den_;
    return l <=> r;
}

std::string Rational::str() const
{
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t Rational::floor() const
{
    auto q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) {
        --q;
    }
    return q;
}

std::string log_symbol(const std::string &param) { return "ln(" + param + ")"; }

std::string log_symbol_base(const std::string &name)
{
    if (name.size() > 4 && name.starts_with("ln(") && name.back() == ')') {
        return name.substr(3, name.size() - 4);
    }
    return {};
}

std::optional<Rational> recognize_rational(double x, std::int64_t max_den, double rel_tol)
{
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    const double tol = rel_tol * std::max(1.0, std::abs(x));
    // Continued-fraction convergents.
    double v = x;
    std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    for (int it = 0; it < 40; ++it) {
        const double a = std::floor(v);
        if (std::abs(a) > 1e15) {
            break;
        }
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h0 + h1;
        const std::int64_t k2 = ai * k0 + k1;
        if (k2 > max_den) {
            break;
        }
        h1 = h0;
        h0 = h2;
        k1 = k0;
        k0 = k2;
        if (std::abs(x - double(h0) / double(k0)) <= tol) {
            return Rational(h0, k0);
        }
        const double frac = v - a;
        if (frac < 1e-300) {
            break;
        }
        v = 1.0 / frac;
    }
    return std::nullopt;
}

std::string format_real(double x, RenderStyle style)
{
    if (x == 0.0) {
        return "0";
    }
    if (auto r = recognize_rational(x)) {
        return r->str();
    }
    if (x > 0) {
        if (auto r = recognize_rational(x * x)) {
            if (!r->is_integer() || r->num() > 1) {
                const std::string base = r->is_integer() ? r->str() : "(" + r->str() + ")";
                if (style == RenderStyle::pretty) {
                    return "√" + base;
                }
                return style == RenderStyle::source ? r->str() + "^(1/2)" : base + "^1/2";
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, style == RenderStyle::source ? "%.17g" : "%.12g", x);
    return buf;
}

namespace
{

bool is_sqrt_form(const std::string &s) { return s.find("^") != std::string::npos; }

/// Coefficient text for a monomial: returns {text, is_unit} where is_unit
/// means the coefficient is exactly +-1 and only a sign is emitted.
std::string coefficient_text(complex c, RenderStyle style, bool has_symbols)
{
    const double scale = std::abs(c);
    const bool real = std::abs(c.imag()) <= 1e-13 * scale;
    const bool imag = std::abs(c.real()) <= 1e-13 * scale;
    const auto wrap = [&](const std::string &s) {
        if (style == RenderStyle::canonical) {
            return s;
        }
        const bool simple = s.find('/') == std::string::npos && !is_sqrt_form(s);
        return simple ? s : "(" + s + ")";
    };
    if (real) {
        const double x = c.real();
        if (has_symbols && std::abs(x - 1.0) <= 1e-13) {
            return "";
        }
        if (has_symbols && std::abs(x + 1.0) <= 1e-13) {
            return "-";
        }
        const std::string t = format_real(std::abs(x), style);
        return (x < 0 ? "-" : "") + (has_symbols ? wrap(t) : t);
    }
    if (imag) {
        const double y = c.imag();
        const std::string sign = y < 0 ? "-" : "";
        if (std::abs(std::abs(y) - 1.0) <= 1e-13) {
            return sign + "i";
        }
        const std::string t = format_real(std::abs(y), style);
        const std::string mul = style == RenderStyle::pretty ? "·" : (style == RenderStyle::source ? "*" : " * ");
        return sign + wrap(t) + mul + "i";
    }
    return "(" + format_complex(c, style) + ")";
}

std::string exponent_text(const Rational &e, RenderStyle style)
{
    if (e == Rational(1)) {
        return "";
    }
    if (style == RenderStyle::canonical) {
        return "^" + e.str();
    }
    if (e.is_integer() && e.num() > 0) {
        return "^" + e.str();
    }
    return "^(" + e.str() + ")";
}

} // namespace

std::string format_complex(complex c, RenderStyle style)
{
    const double scale = std::abs(c);
    if (std::abs(c.imag()) <= 1e-13 * scale) {
        return format_real(c.real(), style);
    }
    const std::string mul = style == RenderStyle::source ? "*" : " * ";
    std::string im = format_real(std::abs(c.imag()), style);
    if (std::abs(c.real()) <= 1e-13 * scale) {
        return (c.imag() < 0 ? "-" : "") + im + mul + "i";
    }
    return format_real(c.real(), style) + (c.imag() < 0 ? " - " : " + ") + im + mul + "i";
}

ParamPoly::ParamPoly(complex c)
{
    if (c != complex(0.0)) {
        terms_[{}] = c;
    }
}

ParamPoly ParamPoly::symbol(const std::string &name, Rational exponent)
{
    return monomial(1.0, {{name, exponent}});
}

ParamPoly ParamPoly::monomial(complex coeff, ExponentMap exps)
{
    ParamPoly p;
    std::erase_if(exps, [](const auto &kv) { return kv.second.is_zero(); });
    if (coeff != complex(0.0)) {
        p.terms_[std::move(exps)] = coeff;
    }
    return p;
}

bool ParamPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

complex ParamPoly::constant_value() const
{
    if (!is_constant()) {
        throw Error("poly is not constant: " + render());
    }
    return terms_.empty() ? complex(0.0) : terms_.begin()->second;
}

void ParamPoly::add_term(const ExponentMap &exps, complex c, double scale)
{
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        if (c != complex(0.0)) {
            terms_.emplace(exps, c);
        }
        return;
    }
    const double s = std::max({scale, std::abs(it->second), std::abs(c)});
    it->second += c;
    if (negligible(it->second, s)) {
        terms_.erase(it);
    }
}

ParamPoly ParamPoly::operator-() const { return scaled(-1.0); }

ParamPoly &ParamPoly::operator+=(const ParamPoly &o)
{
    for (const auto &[e, c] : o.terms_) {
        add_term(e, c, 0.0);
    }
    return *this;
}

ParamPoly &ParamPoly::operator-=(const ParamPoly &o)
{
    for (const auto &[e, c] : o.terms_) {
        add_term(e, -c, 0.0);
    }
    return *this;
}

ParamPoly operator*(const ParamPoly &a, const ParamPoly &b)
{
    // Accumulate with the largest contribution as cancellation scale.
    std::map<ExponentMap, std::pair<complex, double>> acc;
    for (const auto &[ea, ca] : a.terms_) {
        for (const auto &[eb, cb] : b.terms_) {
            ExponentMap e = ea;
            for (const auto &[name, x] : eb) {
                auto &slot = e[name];
                slot += x;
                if (slot.is_zero()) {
                    e.erase(name);
                }
            }
            auto &[sum, scale] = acc[e];
            const complex prod = ca * cb;
            sum += prod;
            scale = std::max(scale, std::abs(prod));
        }
    }
    ParamPoly r;
    for (auto &[e, sc] : acc) {
        if (!negligible(sc.first, sc.second) && sc.first != complex(0.0)) {
            r.terms_.emplace(e, sc.first);
        }
    }
    return r;
}

ParamPoly &ParamPoly::operator*=(const ParamPoly &o)
{
    *this = *this * o;
    return *this;
}

ParamPoly ParamPoly::scaled(complex s) const
{
    ParamPoly r;
    if (s == complex(0.0)) {
        return r;
    }
    for (const auto &[e, c] : terms_) {
        r.terms_.emplace(e, c * s);
    }
    return r;
}

ParamPoly ParamPoly::pow(const Rational &e) const
{
    if (e.is_zero()) {
        return ParamPoly(1.0);
    }
    if (is_zero()) {
        if (e < Rational(0)) {
            throw Error("zero raised to a negative power");
        }
        return {};
    }
    if (!is_monomial()) {
        if (e.is_integer() && e.num() > 0) {
            ParamPoly r(1.0);
            for (std::int64_t k = 0; k < e.num(); ++k) {
                r *= *this;
            }
            return r;
        }
        throw Error("non-integer power of a sum: " + render());
    }
    const auto &[exps, c] = *terms_.begin();
    ExponentMap out;
    for (const auto &[name, x] : exps) {
        const Rational y = x * e;
        if (!y.is_integer() && !log_symbol_base(name).empty()) {
            throw Error("fractional power of a log-symbol");
        }
        out[name] = y;
    }
    complex coeff;
    if (e.is_integer()) {
        coeff = std::pow(c, double(e.num()));
    } else if (std::abs(c.imag()) <= 1e-15 * std::abs(c) && c.real() > 0) {
        coeff = std::pow(c.real(), e.to_double());
    } else {
        // Principal branch.
        coeff = std::pow(c, e.to_double());
    }
    return monomial(coeff, std::move(out));
}

ParamPoly ParamPoly::divided_by(const ParamPoly &m) const
{
    if (!m.is_monomial()) {
        throw Error("division by a non-monomial: " + m.render());
    }
    return *this * m.pow(Rational(-1));
}

Rational ParamPoly::max_exponent(const std::string &name) const
{
    std::optional<Rational> best;
    for (const auto &[e, c] : terms_) {
        auto it = e.find(name);
        const Rational x = it == e.end() ? Rational(0) : it->second;
        if (!best || x > *best) {
            best = x;
        }
    }
    return best.value_or(Rational(0));
}

Rational ParamPoly::min_exponent(const std::string &name) const
{
    std::optional<Rational> best;
    for (const auto &[e, c] : terms_) {
        auto it = e.find(name);
        const Rational x = it == e.end() ? Rational(0) : it->second;
        if (!best || x < *best) {
            best = x;
        }
    }
    return best.value_or(Rational(0));
}

bool ParamPoly::depends_on(const std::string &name) const
{
    return std::any_of(terms_.begin(), terms_.end(),
                       [&](const auto &kv) { return kv.first.count(name) != 0; });
}

std::map<Rational, ParamPoly> ParamPoly::collect(const std::string &name) const
{
    std::map<Rational, ParamPoly> out;
    for (const auto &[e, c] : terms_) {
        ExponentMap rest = e;
        Rational x(0);
        if (auto it = rest.find(name); it != rest.end()) {
            x = it->second;
            rest.erase(it);
        }
        out[x] += monomial(c, rest);
    }
    return out;
}

std::vector<std::string> ParamPoly::symbols() const
{
    std::set<std::string> s;
    for (const auto &[e, c] : terms_) {
        for (const auto &[name, x] : e) {
            s.insert(name);
        }
    }
    return {s.begin(), s.end()};
}

complex ParamPoly::eval(const Bindings &bindings) const
{
    const auto lookup = [&](const std::string &name) -> double {
        if (auto it = bindings.find(name); it != bindings.end()) {
            return it->second;
        }
        if (name == "pi") {
            return std::numbers::pi;
        }
        if (auto base = log_symbol_base(name); !base.empty()) {
            if (auto it = bindings.find(base); it != bindings.end()) {
                return std::log(it->second);
            }
            if (base == "pi") {
                return std::log(std::numbers::pi);
            }
        }
        throw UnboundParameter(name);
    };
    complex total = 0.0;
    for (const auto &[e, c] : terms_) {
        complex v = c;
        for (const auto &[name, x] : e) {
            const double b = lookup(name);
            if (x.is_integer()) {
                v *= std::pow(b, double(x.num()));
            } else if (b > 0) {
                v *= std::pow(b, x.to_double());
            } else {
                v *= std::pow(complex(b), x.to_double());
            }
        }
        total += v;
    }
    return total;
}

std::string ParamPoly::render(RenderStyle style) const
{
    if (terms_.empty()) {
        return "0";
    }
    const std::string mul = style == RenderStyle::canonical ? " * " : (style == RenderStyle::pretty ? "·" : "*");
    std::string out;
    bool first = true;
    for (const auto &[e, c] : terms_) {
        std::string coef = coefficient_text(c, style, !e.empty());
        std::string body;
        for (const auto &[name, x] : e) {
            if (!body.empty()) {
                body += mul;
            }
            body += name + exponent_text(x, style);
        }
        std::string term;
        if (e.empty()) {
            term = coef;
        } else if (coef.empty()) {
            term = body;
        } else if (coef == "-") {
            term = "-" + body;
        } else {
            term = coef + mul + body;
        }
        if (first) {
            out = term;
        } else if (term.starts_with("-")) {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
        first = false;
    }
    return out;
}

bool ParamPoly::approx_equal(const ParamPoly &o, double rel_tol) const
{
    if (terms_.size() != o.terms_.size()) {
        return false;
    }
    for (auto a = terms_.begin(), b = o.terms_.begin(); a != terms_.end(); ++a, ++b) {
        if (a->first != b->first) {
            return false;
        }
        const double s = std::max(std::abs(a->second), std::abs(b->second));
        if (std::abs(a->second - b->second) > rel_tol * s) {
            return false;
        }
    }
    return true;
}

} // namespace zreg
