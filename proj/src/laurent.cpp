#include <zreg/laurent.hpp>
#include <zreg/special.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zreg
{

std::string Affine::str(const std::string &reg) const
{
    std::string out;
    if (!alpha.is_zero()) {
        out = (alpha == Rational(1) ? "" : (alpha == Rational(-1) ? "-" : alpha.str() + "*")) + reg;
    }
    if (!beta.is_zero() || out.empty()) {
        if (!out.empty() && beta > Rational(0)) {
            out += "+";
        }
        out += beta.str();
    }
    return out;
}

PrimitiveFactor PrimitiveFactor::gamma(Affine a, std::string reg)
{
    PrimitiveFactor f;
    f.kind = Kind::gamma;
    f.arg = a;
    f.regulator = std::move(reg);
    return f;
}

PrimitiveFactor PrimitiveFactor::exp_i_pi(Affine a, std::string reg)
{
    PrimitiveFactor f;
    f.kind = Kind::exp_i_pi;
    f.arg = a;
    f.regulator = std::move(reg);
    return f;
}

PrimitiveFactor PrimitiveFactor::affine_power(Affine a, std::int64_t n, std::string reg)
{
    PrimitiveFactor f;
    f.kind = Kind::affine_power;
    f.arg = a;
    f.power = n;
    f.regulator = std::move(reg);
    return f;
}

PrimitiveFactor PrimitiveFactor::const_power(ParamPoly base, Affine a, std::string reg)
{
    if (!base.is_monomial()) {
        throw UnsupportedFactor("const_power base must be a monomial: " + base.render());
    }
    const complex c = base.terms().begin()->second;
    if (std::abs(c.imag()) > 1e-14 * std::abs(c) || c.real() <= 0) {
        throw UnsupportedFactor("const_power base must be positive: " + base.render());
    }
    PrimitiveFactor f;
    f.kind = Kind::const_power;
    f.base = ParamPoly::monomial(c.real(), base.terms().begin()->first);
    f.arg = a;
    f.regulator = std::move(reg);
    return f;
}

int PrimitiveFactor::order_at_zero() const
{
    switch (kind) {
    case Kind::gamma:
        if (!arg.alpha.is_zero() && arg.beta.is_integer() && arg.beta <= Rational(0)) {
            return -1;
        }
        return 0;
    case Kind::affine_power:
        if (arg.beta.is_zero()) {
            return static_cast<int>(power);
        }
        return 0;
    default:
        return 0;
    }
}

std::string PrimitiveFactor::render() const
{
    const std::string a = arg.str(regulator);
    switch (kind) {
    case Kind::gamma:
        return "Gamma(" + a + ")";
    case Kind::exp_i_pi:
        return "exp(i*pi*(" + a + "))";
    case Kind::affine_power:
        return "(" + a + ")^" + std::to_string(power);
    case Kind::const_power:
        return "(" + base.render(RenderStyle::source) + ")^(" + a + ")";
    }
    return {};
}

std::strong_ordering PrimitiveFactor::compare(const PrimitiveFactor &o) const
{
    if (auto c = kind <=> o.kind; c != 0) {
        return c;
    }
    if (auto c = regulator <=> o.regulator; c != 0) {
        return c;
    }
    if (auto c = arg <=> o.arg; c != 0) {
        return c;
    }
    if (auto c = power <=> o.power; c != 0) {
        return c;
    }
    if (kind == Kind::const_power) {
        // Monomial bases compare by their exponent maps then coefficient.
        const auto &ta = base.terms();
        const auto &tb = o.base.terms();
        if (auto c = ta.begin()->first <=> tb.begin()->first; c != 0) {
            return c;
        }
        const double x = ta.begin()->second.real();
        const double y = tb.begin()->second.real();
        if (x < y) {
            return std::strong_ordering::less;
        }
        if (x > y) {
            return std::strong_ordering::greater;
        }
    }
    return std::strong_ordering::equal;
}

int MeroFactorProduct::pole_order() const
{
    int order = 0;
    for (const auto &f : factors) {
        order += f.order_at_zero();
    }
    return order < 0 ? -order : 0;
}

std::string MeroFactorProduct::render() const
{
    std::string out = "(" + prefactor.render() + ")";
    for (const auto &f : factors) {
        out += "*" + f.render();
    }
    return out;
}

// ---------------------------------------------------------------------------

LaurentSeries::LaurentSeries(int lead, std::vector<ParamPoly> coeffs)
    : lead_(lead), precision_(lead + static_cast<int>(coeffs.size()) - 1), coeffs_(std::move(coeffs))
{
    normalize();
}

LaurentSeries LaurentSeries::constant(ParamPoly c, int precision)
{
    std::vector<ParamPoly> v(static_cast<std::size_t>(std::max(precision, 0) + 1));
    v[0] = std::move(c);
    return LaurentSeries(0, std::move(v));
}

LaurentSeries LaurentSeries::zero(int precision)
{
    LaurentSeries s;
    s.precision_ = precision;
    s.lead_ = precision + 1;
    return s;
}

void LaurentSeries::normalize()
{
    std::size_t k = 0;
    while (k < coeffs_.size() && coeffs_[k].is_zero()) {
        ++k;
    }
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(k));
    lead_ += static_cast<int>(k);
    if (coeffs_.empty()) {
        lead_ = precision_ + 1;
    }
}

const ParamPoly &LaurentSeries::leading() const
{
    if (coeffs_.empty()) {
        throw Error("leading coefficient of a series that is zero to precision");
    }
    return coeffs_.front();
}

ParamPoly LaurentSeries::coefficient(int k) const
{
    if (k > precision_) {
        throw Error("coefficient beyond series precision");
    }
    if (k < lead_) {
        return {};
    }
    return coeffs_[static_cast<std::size_t>(k - lead_)];
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries &o) const
{
    const int prec = std::min(lead_ + o.precision_, o.lead_ + precision_);
    if (is_zero() || o.is_zero()) {
        return zero(prec);
    }
    const int lead = lead_ + o.lead_;
    std::vector<ParamPoly> c(static_cast<std::size_t>(std::max(prec - lead + 1, 0)));
    for (int k = lead; k <= prec; ++k) {
        ParamPoly sum;
        for (int i = lead_; i <= precision_; ++i) {
            const int j = k - i;
            if (j < o.lead_ || j > o.precision_) {
                continue;
            }
            sum += coeffs_[static_cast<std::size_t>(i - lead_)] * o.coeffs_[static_cast<std::size_t>(j - o.lead_)];
        }
        c[static_cast<std::size_t>(k - lead)] = std::move(sum);
    }
    LaurentSeries r(lead, std::move(c));
    r.precision_ = prec;
    if (r.coeffs_.empty()) {
        r.lead_ = prec + 1;
    }
    return r;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries &o) const
{
    const int prec = std::min(precision_, o.precision_);
    const int lead = std::min(lead_, o.lead_);
    if (lead > prec) {
        return zero(prec);
    }
    std::vector<ParamPoly> c(static_cast<std::size_t>(prec - lead + 1));
    for (int k = lead; k <= prec; ++k) {
        c[static_cast<std::size_t>(k - lead)] = coefficient(k) + o.coefficient(k);
    }
    return LaurentSeries(lead, std::move(c));
}

LaurentSeries LaurentSeries::operator-() const { return scaled(ParamPoly(-1.0)); }

LaurentSeries LaurentSeries::scaled(const ParamPoly &s) const
{
    if (s.is_zero()) {
        return zero(precision_);
    }
    std::vector<ParamPoly> c;
    c.reserve(coeffs_.size());
    for (const auto &x : coeffs_) {
        c.push_back(x * s);
    }
    LaurentSeries r(lead_, std::move(c));
    r.precision_ = precision_;
    if (r.coeffs_.empty()) {
        r.lead_ = precision_ + 1;
    }
    return r;
}

LaurentSeries LaurentSeries::exp_of_nilpotent(const ParamPoly &constant_exp_value) const
{
    if (!is_zero() && lead_ < 1) {
        throw Error("exp_of_nilpotent needs a series vanishing at z = 0");
    }
    const int prec = std::max(precision_, 0);
    // b_m = (1/m) sum_{k=1}^m k a_k b_{m-k}
    std::vector<ParamPoly> b(static_cast<std::size_t>(prec + 1));
    b[0] = constant_exp_value;
    for (int m = 1; m <= prec; ++m) {
        ParamPoly sum;
        for (int k = 1; k <= m; ++k) {
            const ParamPoly ak = coefficient(k);
            if (!ak.is_zero()) {
                sum += (ak * b[static_cast<std::size_t>(m - k)]).scaled(double(k));
            }
        }
        b[static_cast<std::size_t>(m)] = sum.scaled(1.0 / m);
    }
    return LaurentSeries(0, std::move(b));
}

complex LaurentSeries::eval(complex z, const Bindings &bindings) const
{
    complex total = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        total += coeffs_[i].eval(bindings) * std::pow(z, lead_ + static_cast<int>(i));
    }
    return total;
}

std::string LaurentSeries::render(const std::string &reg) const
{
    if (coeffs_.empty()) {
        return "O(" + reg + "^" + std::to_string(precision_ + 1) + ")";
    }
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) {
            continue;
        }
        const int k = lead_ + static_cast<int>(i);
        if (!out.empty()) {
            out += " + ";
        }
        out += "(" + coeffs_[i].render() + ")";
        if (k != 0) {
            out += " " + reg + "^" + std::to_string(k);
        }
    }
    return out + " + O(" + reg + "^" + std::to_string(precision_ + 1) + ")";
}

// ---------------------------------------------------------------------------

namespace
{

/// e^{i pi beta}, exact on multiples of 1/2.
complex exp_i_pi_exact(const Rational &beta)
{
    const Rational twice = beta * Rational(2);
    if (twice.is_integer()) {
        static const complex units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        auto k = twice.num() % 4;
        if (k < 0) {
            k += 4;
        }
        return units[k];
    }
    return std::polar(1.0, std::numbers::pi * beta.to_double());
}

LaurentSeries truncate_to(const LaurentSeries &s, int prec)
{
    if (s.precision() <= prec) {
        return s;
    }
    if (s.is_zero()) {
        return LaurentSeries::zero(prec);
    }
    std::vector<ParamPoly> c;
    for (int k = s.lead_order(); k <= prec; ++k) {
        c.push_back(s.coefficient(k));
    }
    if (c.empty()) {
        return LaurentSeries::zero(prec);
    }
    return LaurentSeries(s.lead_order(), std::move(c));
}

/// exp(a z) as a series of K+1 terms with ParamPoly slope.
LaurentSeries exp_linear(const ParamPoly &slope, int K)
{
    std::vector<ParamPoly> c(static_cast<std::size_t>(K + 1));
    c[0] = ParamPoly(1.0);
    for (int k = 1; k <= K; ++k) {
        c[static_cast<std::size_t>(k)] = (c[static_cast<std::size_t>(k - 1)] * slope).scaled(1.0 / k);
    }
    return LaurentSeries(0, std::move(c));
}

LaurentSeries expand_gamma(const Affine &a, int K)
{
    const double beta = a.beta.to_double();
    const bool pole = a.beta.is_integer() && a.beta <= Rational(0);
    if (a.alpha.is_zero()) {
        if (pole) {
            throw UnsupportedFactor("Gamma pole at " + a.beta.str() + " without regulator");
        }
        return LaurentSeries::constant(ParamPoly(special::gamma(beta)), K);
    }
    if (pole) {
        // Gamma(beta + alpha z) = Gamma(1 + alpha z) / prod_{j=0}^{n} (alpha z + beta + j)
        const auto n = -a.beta.num();
        LaurentSeries s = expand_gamma(Affine{a.alpha, Rational(1)}, K + 1);
        for (std::int64_t j = 0; j <= n; ++j) {
            s = s * expand_factor(PrimitiveFactor::affine_power(Affine{a.alpha, a.beta + Rational(j)}, -1), K + 1);
        }
        return truncate_to(s, -1 + K);
    }
    // log Gamma(beta + alpha z) - log Gamma(beta) = sum_k psi^(k-1)(beta) (alpha z)^k / k!
    std::vector<ParamPoly> logc(static_cast<std::size_t>(K + 1));
    const double alpha = a.alpha.to_double();
    double fact = 1.0;
    for (int k = 1; k <= K; ++k) {
        fact *= k;
        logc[static_cast<std::size_t>(k)] = ParamPoly(special::polygamma(k - 1, beta) * std::pow(alpha, k) / fact);
    }
    return LaurentSeries(0, std::move(logc)).exp_of_nilpotent(ParamPoly(special::gamma(beta)));
}

} // namespace

LaurentSeries expand_factor(const PrimitiveFactor &f, int K)
{
    if (K < 2) {
        throw Error("series order must be at least 2");
    }
    switch (f.kind) {
    case PrimitiveFactor::Kind::gamma:
        return expand_gamma(f.arg, K);
    case PrimitiveFactor::Kind::exp_i_pi: {
        const ParamPoly slope(complex(0.0, std::numbers::pi * f.arg.alpha.to_double()));
        return exp_linear(slope, K).scaled(ParamPoly(exp_i_pi_exact(f.arg.beta)));
    }
    case PrimitiveFactor::Kind::affine_power: {
        const auto n = f.power;
        if (f.arg.beta.is_zero()) {
            if (f.arg.alpha.is_zero()) {
                throw UnsupportedFactor("affine factor identically zero");
            }
            std::vector<ParamPoly> c(static_cast<std::size_t>(K + 1));
            c[0] = ParamPoly(std::pow(f.arg.alpha.to_double(), double(n)));
            return LaurentSeries(static_cast<int>(n), std::move(c));
        }
        // beta^n (1 + (alpha/beta) z)^n
        const double ratio = (f.arg.alpha / f.arg.beta).to_double();
        std::vector<ParamPoly> c(static_cast<std::size_t>(K + 1));
        double binom = 1.0;
        const double scale = std::pow(f.arg.beta.to_double(), double(n));
        for (int k = 0; k <= K; ++k) {
            c[static_cast<std::size_t>(k)] = ParamPoly(scale * binom * std::pow(ratio, k));
            binom *= (double(n) - k) / (k + 1);
        }
        return LaurentSeries(0, std::move(c));
    }
    case PrimitiveFactor::Kind::const_power: {
        const auto &[exps, coeff] = *f.base.terms().begin();
        ParamPoly log_base(std::log(coeff.real()));
        for (const auto &[name, e] : exps) {
            if (!log_symbol_base(name).empty()) {
                throw UnsupportedFactor("log-symbol in a power base");
            }
            log_base += ParamPoly::symbol(log_symbol(name)).scaled(e.to_double());
        }
        const ParamPoly slope = log_base.scaled(f.arg.alpha.to_double());
        return exp_linear(slope, K).scaled(f.base.pow(f.arg.beta));
    }
    }
    throw UnsupportedFactor("unknown factor kind");
}

LaurentSeries expand_product(const MeroFactorProduct &p, int K)
{
    LaurentSeries s = LaurentSeries::constant(p.prefactor, K);
    if (p.prefactor.is_zero()) {
        return s;
    }
    int lead = 0;
    for (const auto &f : p.factors) {
        const LaurentSeries e = expand_factor(f, K);
        lead += e.lead_order();
        s = s * e;
    }
    return truncate_to(s, lead + K);
}

ParamPoly divide_coefficients(const ParamPoly &num, const ParamPoly &den)
{
    if (den.is_zero()) {
        throw Error("division by a zero coefficient");
    }
    if (den.is_monomial()) {
        return num.divided_by(den);
    }
    // num = q * den for a constant q
    const auto &[de, dc] = *den.terms().begin();
    auto it = num.terms().find(de);
    if (it != num.terms().end()) {
        const complex q = it->second / dc;
        if ((num - den.scaled(q)).is_zero()) {
            return ParamPoly(q);
        }
    }
    throw Error("cannot divide by the non-monomial coefficient " + den.render());
}

SeriesRatio series_ratio(const LaurentSeries &n, const LaurentSeries &d)
{
    SeriesRatio r;
    r.numerator_order = n.lead_order();
    r.denominator_order = d.lead_order();
    if (n.is_zero() && d.is_zero()) {
        throw ZeroOverZeroUnresolved("numerator and denominator vanish to order " +
                                     std::to_string(std::min(n.precision(), d.precision())));
    }
    if (d.is_zero()) {
        if (n.lead_order() <= d.precision()) {
            r.status = SeriesRatio::Status::divergent;
            return r;
        }
        throw ZeroOverZeroUnresolved("denominator vanishes to series precision");
    }
    if (n.is_zero()) {
        if (d.lead_order() <= n.precision()) {
            return r; // value 0
        }
        throw ZeroOverZeroUnresolved("numerator vanishes to series precision");
    }
    if (n.lead_order() > d.lead_order()) {
        return r;
    }
    if (n.lead_order() < d.lead_order()) {
        r.status = SeriesRatio::Status::divergent;
        return r;
    }
    r.value = divide_coefficients(n.leading(), d.leading());
    return r;
}

} // namespace zreg
