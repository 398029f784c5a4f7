#include <zreg/tables.hpp>

#include <cmath>

namespace zreg
{

std::string to_string(BranchPolicy p) { return p == BranchPolicy::paper ? "paper" : "principal"; }

BranchPolicy parse_branch(const std::string &s)
{
    if (s == "paper") {
        return BranchPolicy::paper;
    }
    if (s == "principal") {
        return BranchPolicy::principal;
    }
    throw Error("unknown branch policy: " + s);
}

namespace
{

void check_gamma(const Affine &w)
{
    if (w.alpha.is_zero() && w.beta.is_integer() && w.beta <= Rational(0)) {
        throw GammaPole("Gamma(" + w.beta.str() + ") without a regulator");
    }
}

void check_frequency(const ParamPoly &c)
{
    if (!c.is_monomial()) {
        throw UnsupportedFactor("frequency must be a monomial: " + c.render());
    }
}

// Gamma(w) * e^{i pi phase} * (c T)^{-w}
ZetaTerm assemble(const Affine &w, const Affine &phase, const ParamPoly &c, const ParamPoly &prefactor,
                  const std::string &reg)
{
    check_gamma(w);
    check_frequency(c);
    ZetaTerm t;
    t.prefactor = prefactor;
    t.factors.push_back(PrimitiveFactor::gamma(w, reg));
    if (!(phase.alpha.is_zero() && phase.beta.is_zero())) {
        t.factors.push_back(PrimitiveFactor::exp_i_pi(phase, reg));
    }
    if (!c.is_constant() || c.constant_value() != complex(1.0)) {
        t.factors.push_back(PrimitiveFactor::const_power(c, w * Rational(-1), reg));
    }
    if (!w.alpha.is_zero()) {
        t.t_exponent.slope[reg] = -w.alpha;
    }
    t.t_exponent.offset = -w.beta;
    t.canonicalize();
    return t;
}

} // namespace

ZetaTerm osc_linear(Affine q, int sign, const ParamPoly &c, BranchPolicy policy, const std::string &reg)
{
    const Affine w = q + Affine{Rational(0), Rational(1)};
    Affine phase;
    if (policy == BranchPolicy::principal) {
        phase = w * Rational(sign, 2);
    } else {
        phase = w * (sign > 0 ? Rational(-1, 2) : Rational(-3, 2));
    }
    return assemble(w, phase, c, ParamPoly(1.0), reg);
}

ZetaTerm gauss_radial(Affine q, int sign, const ParamPoly &c, BranchPolicy, const std::string &reg)
{
    const Affine w = (q + Affine{Rational(0), Rational(1)}) * Rational(1, 2);
    return assemble(w, w * Rational(-sign, 2), c, ParamPoly(1.0), reg);
}

ZetaTerm gauss_half(Affine q, int sign, const ParamPoly &c, BranchPolicy policy, const std::string &reg)
{
    ZetaTerm t = gauss_radial(q, sign, c, policy, reg);
    t.prefactor = t.prefactor.scaled(0.5);
    return t;
}

ZetaTerm gauss_displayed(Affine q, const ParamPoly &c, const std::string &reg)
{
    const Affine w = (q + Affine{Rational(0), Rational(1)}) * Rational(1, 2);
    return assemble(w, w * Rational(-3, 2) + Affine{Rational(0), Rational(1)}, c, ParamPoly(1.0), reg);
}

// ---------------------------------------------------------------------------

AngularPoly::AngularPoly(int dim, const ParamPoly &c) : dim_(dim)
{
    add_term(Exponents(static_cast<std::size_t>(dim), 0), c);
}

AngularPoly AngularPoly::component(int dim, int j)
{
    AngularPoly a(dim);
    Exponents e(static_cast<std::size_t>(dim), 0);
    e.at(static_cast<std::size_t>(j)) = 1;
    a.add_term(e, ParamPoly(1.0));
    return a;
}

void AngularPoly::add_term(Exponents e, const ParamPoly &c)
{
    if (static_cast<int>(e.size()) != dim_) {
        throw Error("angular exponent length mismatch");
    }
    auto &slot = terms_[e];
    slot += c;
    if (slot.is_zero()) {
        terms_.erase(e);
    }
}

AngularPoly &AngularPoly::operator+=(const AngularPoly &o)
{
    if (terms_.empty()) {
        dim_ = o.dim_;
    }
    for (const auto &[e, c] : o.terms_) {
        add_term(e, c);
    }
    return *this;
}

AngularPoly operator*(const AngularPoly &a, const AngularPoly &b)
{
    if (a.dim_ != b.dim_) {
        throw Error("angular dimension mismatch");
    }
    AngularPoly r(a.dim_);
    for (const auto &[ea, ca] : a.terms_) {
        for (const auto &[eb, cb] : b.terms_) {
            AngularPoly::Exponents e = ea;
            for (std::size_t j = 0; j < e.size(); ++j) {
                e[j] += eb[j];
            }
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

AngularPoly AngularPoly::scaled(const ParamPoly &s) const
{
    AngularPoly r(dim_);
    for (const auto &[e, c] : terms_) {
        r.add_term(e, c * s);
    }
    return r;
}

complex AngularPoly::eval(const std::vector<double> &direction, const Bindings &bindings) const
{
    complex total = 0.0;
    for (const auto &[e, c] : terms_) {
        complex m = c.eval(bindings);
        for (std::size_t j = 0; j < e.size(); ++j) {
            m *= std::pow(direction.at(j), e[j]);
        }
        total += m;
    }
    return total;
}

std::string AngularPoly::render() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (const auto &[e, c] : terms_) {
        std::string m = "(" + c.render() + ")";
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] != 0) {
                m += " * n" + std::to_string(j + 1) + (e[j] == 1 ? "" : "^" + std::to_string(e[j]));
            }
        }
        out += (out.empty() ? "" : " + ") + m;
    }
    return out;
}

namespace
{

std::int64_t double_factorial(std::int64_t n)
{
    std::int64_t r = 1;
    for (; n > 1; n -= 2) {
        r *= n;
    }
    return r;
}

std::int64_t factorial(std::int64_t n)
{
    std::int64_t r = 1;
    for (; n > 1; --n) {
        r *= n;
    }
    return r;
}

} // namespace

ParamPoly sphere_monomial(const std::vector<int> &exponents)
{
    const int N = static_cast<int>(exponents.size());
    if (N < 1) {
        throw Error("sphere dimension must be positive");
    }
    Rational coeff(2);
    Rational pi_power(N, 2);
    int A = 0;
    for (int a : exponents) {
        if (a < 0) {
            throw UnsupportedAngular("negative power of a direction component");
        }
        if (a % 2 != 0) {
            return {};
        }
        coeff *= Rational(double_factorial(a - 1), std::int64_t(1) << (a / 2));
        A += a;
    }
    const int m = A + N;
    if (m % 2 == 0) {
        coeff /= Rational(factorial(m / 2 - 1));
    } else {
        coeff /= Rational(double_factorial(m - 2), std::int64_t(1) << ((m - 1) / 2));
        pi_power -= Rational(1, 2);
    }
    return ParamPoly(coeff) * ParamPoly::symbol("pi", pi_power);
}

ParamPoly sphere_volume(int N) { return sphere_monomial(std::vector<int>(static_cast<std::size_t>(N), 0)); }

ParamPoly angular_reduce(const AngularPoly &a)
{
    ParamPoly total;
    for (const auto &[e, c] : a.terms()) {
        total += c * sphere_monomial(e);
    }
    return total;
}

} // namespace zreg
