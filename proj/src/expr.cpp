#include <zreg/expr.hpp>

#include <cctype>
#include <cmath>

namespace zreg
{

AxisPoly::AxisPoly(const ParamPoly &c)
{
    if (!c.is_zero()) {
        terms_[{}] = c;
    }
}

AxisPoly AxisPoly::axis(const std::string &name, int power)
{
    AxisPoly p;
    p.add_term(power == 0 ? AxisMonomial{} : AxisMonomial{{name, power}}, ParamPoly(1.0));
    return p;
}

bool AxisPoly::is_param() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

ParamPoly AxisPoly::constant_part() const
{
    auto it = terms_.find({});
    return it == terms_.end() ? ParamPoly() : it->second;
}

ParamPoly AxisPoly::as_param() const
{
    if (!is_param()) {
        throw Error("expression depends on an axis: " + render());
    }
    return constant_part();
}

void AxisPoly::add_term(AxisMonomial m, const ParamPoly &c)
{
    std::erase_if(m, [](const auto &kv) { return kv.second == 0; });
    auto &slot = terms_[m];
    slot += c;
    if (slot.is_zero()) {
        terms_.erase(m);
    }
}

AxisPoly AxisPoly::operator-() const { return scaled(ParamPoly(-1.0)); }

AxisPoly &AxisPoly::operator+=(const AxisPoly &o)
{
    for (const auto &[m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

AxisPoly &AxisPoly::operator-=(const AxisPoly &o) { return *this += -o; }

AxisPoly operator*(const AxisPoly &a, const AxisPoly &b)
{
    AxisPoly r;
    for (const auto &[ma, ca] : a.terms_) {
        for (const auto &[mb, cb] : b.terms_) {
            AxisMonomial m = ma;
            for (const auto &[name, k] : mb) {
                m[name] += k;
            }
            r.add_term(std::move(m), ca * cb);
        }
    }
    return r;
}

AxisPoly AxisPoly::scaled(const ParamPoly &s) const
{
    AxisPoly r;
    for (const auto &[m, c] : terms_) {
        r.add_term(m, c * s);
    }
    return r;
}

AxisPoly AxisPoly::pow(int n) const
{
    if (n < 0) {
        throw Error("negative power of an axis polynomial");
    }
    AxisPoly r(ParamPoly(1.0));
    for (int k = 0; k < n; ++k) {
        r = r * *this;
    }
    return r;
}

int AxisPoly::degree(const std::string &axis) const
{
    int d = 0;
    for (const auto &[m, c] : terms_) {
        if (auto it = m.find(axis); it != m.end()) {
            d = std::max(d, it->second);
        }
    }
    return d;
}

std::set<std::string> AxisPoly::axes() const
{
    std::set<std::string> out;
    for (const auto &[m, c] : terms_) {
        for (const auto &[name, k] : m) {
            out.insert(name);
        }
    }
    return out;
}

std::map<int, AxisPoly> AxisPoly::collect(const std::string &axis) const
{
    std::map<int, AxisPoly> out;
    for (const auto &[m, c] : terms_) {
        AxisMonomial rest = m;
        int k = 0;
        if (auto it = rest.find(axis); it != rest.end()) {
            k = it->second;
            rest.erase(it);
        }
        out[k].add_term(rest, c);
    }
    return out;
}

complex AxisPoly::eval(const Bindings &bindings) const
{
    complex total = 0.0;
    for (const auto &[m, c] : terms_) {
        complex v = c.eval(bindings);
        for (const auto &[name, k] : m) {
            auto it = bindings.find(name);
            if (it == bindings.end()) {
                throw UnboundParameter(name);
            }
            v *= std::pow(it->second, k);
        }
        total += v;
    }
    return total;
}

std::string AxisPoly::render(RenderStyle style) const
{
    if (terms_.empty()) {
        return "0";
    }
    const std::string mul = style == RenderStyle::canonical ? " * " : (style == RenderStyle::pretty ? "·" : "*");
    std::string out;
    for (const auto &[m, c] : terms_) {
        std::string axes;
        for (const auto &[name, k] : m) {
            axes += (axes.empty() ? "" : mul) + name + (k == 1 ? "" : "^" + std::to_string(k));
        }
        std::string coef = c.render(style);
        std::string term;
        if (axes.empty()) {
            term = c.is_monomial() ? coef : "(" + coef + ")";
        } else if (coef == "1") {
            term = axes;
        } else if (coef == "-1") {
            term = "-" + axes;
        } else if (c.is_monomial()) {
            term = coef + mul + axes;
        } else {
            term = "(" + coef + ")" + mul + axes;
        }
        if (out.empty()) {
            out = term;
        } else if (term.starts_with("-")) {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

bool AxisPoly::approx_equal(const AxisPoly &o, double rel_tol) const
{
    if (terms_.size() != o.terms_.size()) {
        return false;
    }
    for (const auto &[m, c] : terms_) {
        auto it = o.terms_.find(m);
        if (it == o.terms_.end() || !c.approx_equal(it->second, rel_tol)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

namespace
{

class Parser
{
public:
    Parser(const std::string &text, const ExprContext &ctx, int line, int col)
        : text_(text), ctx_(ctx), line_(line), col_(col)
    {
    }

    AxisPoly parse()
    {
        skip();
        if (pos_ >= text_.size()) {
            fail("empty expression");
        }
        AxisPoly r = expr();
        skip();
        if (pos_ < text_.size()) {
            fail(std::string("unexpected '") + text_[pos_] + "'");
        }
        return r;
    }

private:
    [[noreturn]] void fail(const std::string &what, std::size_t at) const
    {
        throw ParseError(line_, col_ + static_cast<int>(at), what);
    }
    [[noreturn]] void fail(const std::string &what) const { fail(what, pos_); }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    AxisPoly expr()
    {
        AxisPoly r = term();
        for (;;) {
            if (accept('+')) {
                r += term();
            } else if (accept('-')) {
                r -= term();
            } else {
                return r;
            }
        }
    }

    AxisPoly term()
    {
        AxisPoly r = unary();
        for (;;) {
            if (accept('*')) {
                r = r * unary();
            } else if (accept('/')) {
                skip();
                const std::size_t at = pos_;
                const AxisPoly d = unary();
                if (!d.is_param() || d.is_zero() || !d.as_param().is_monomial()) {
                    fail("divisor must be a nonzero parameter monomial", at);
                }
                r = r.scaled(d.as_param().pow(Rational(-1)));
            } else {
                return r;
            }
        }
    }

    AxisPoly unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    AxisPoly power()
    {
        skip();
        const std::size_t base_at = pos_;
        AxisPoly base = primary();
        if (!accept('^')) {
            return base;
        }
        skip();
        const std::size_t at = pos_;
        const AxisPoly e = unary();
        if (!e.is_param() || !e.as_param().is_constant()) {
            fail("exponent must be a number", at);
        }
        const complex ev = e.as_param().constant_value();
        const auto r = recognize_rational(ev.real(), 1000, 1e-12);
        if (std::abs(ev.imag()) > 0 || !r) {
            fail("exponent must be rational", at);
        }
        if (!base.is_param()) {
            if (!r->is_integer() || r->num() < 0) {
                fail("axis power must be a nonnegative integer", at);
            }
            return base.pow(static_cast<int>(r->num()));
        }
        const ParamPoly b = base.as_param();
        if (b.is_monomial()) {
            return AxisPoly(b.pow(*r));
        }
        if (b.is_zero()) {
            return AxisPoly(r->is_zero() ? ParamPoly(1.0) : ParamPoly());
        }
        if (!r->is_integer() || r->num() < 0) {
            fail("only nonnegative integer powers of a sum", base_at);
        }
        return AxisPoly(b).pow(static_cast<int>(r->num()));
    }

    AxisPoly primary()
    {
        skip();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            AxisPoly r = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t at = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name = text_.substr(at, pos_ - at);
            if (name == "i") {
                return AxisPoly(ParamPoly::imag_unit());
            }
            if (name == "pi") {
                return AxisPoly(ParamPoly::pi());
            }
            if (name == time_symbol) {
                return AxisPoly(ParamPoly::symbol(time_symbol));
            }
            if (ctx_.axes.count(name)) {
                return AxisPoly::axis(name);
            }
            if (ctx_.params.count(name)) {
                return AxisPoly(ParamPoly::symbol(name));
            }
            fail("unknown identifier '" + name + "'", at);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    AxisPoly number()
    {
        const std::size_t at = pos_;
        const auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits();
            } else {
                pos_ = save;
            }
        }
        const std::string s = text_.substr(at, pos_ - at);
        if (s == ".") {
            fail("malformed number", at);
        }
        return AxisPoly(ParamPoly(std::stod(s)));
    }

    const std::string &text_;
    const ExprContext &ctx_;
    int line_;
    int col_;
    std::size_t pos_ = 0;
};

} // namespace

AxisPoly parse_expression(const std::string &text, const ExprContext &ctx, int line, int first_column)
{
    return Parser(text, ctx, line, first_column).parse();
}

} // namespace zreg
