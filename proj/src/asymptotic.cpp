#include <zreg/asymptotic.hpp>

#include <algorithm>
#include <map>
#include <tuple>

namespace zreg
{

TExponent &TExponent::operator+=(const TExponent &o)
{
    for (const auto &[r, a] : o.slope) {
        auto &s = slope[r];
        s += a;
        if (s.is_zero()) {
            slope.erase(r);
        }
    }
    offset += o.offset;
    return *this;
}

std::string TExponent::str() const
{
    std::string out;
    for (const auto &[r, a] : slope) {
        out += (out.empty() || a < Rational(0) ? "" : "+") + a.str() + "*" + r;
    }
    if (!offset.is_zero() || out.empty()) {
        out += (out.empty() || offset < Rational(0) ? "" : "+") + offset.str();
    }
    return out;
}

void ZetaTerm::canonicalize()
{
    std::sort(factors.begin(), factors.end());
    std::sort(tokens.begin(), tokens.end());
}

std::string ZetaTerm::render() const
{
    std::string out = "(" + prefactor.render() + ")";
    for (const auto &f : factors) {
        out += " * " + f.render();
    }
    const std::string e = t_exponent.str();
    if (e != "0") {
        out += " * T^(" + e + ")";
    }
    for (const auto &t : tokens) {
        out += " * [" + t.id + "]";
    }
    return out;
}

void ZetaTermSum::add(ZetaTerm t)
{
    if (t.prefactor.is_zero()) {
        return;
    }
    t.canonicalize();
    terms_.push_back(std::move(t));
}

ZetaTermSum &ZetaTermSum::operator+=(const ZetaTermSum &o)
{
    if (regulators_.empty()) {
        regulators_ = o.regulators_;
    }
    for (const auto &t : o.terms_) {
        add(t);
    }
    return *this;
}

ZetaTermSum ZetaTermSum::scaled(const ParamPoly &s) const
{
    ZetaTermSum r(regulators_);
    for (auto t : terms_) {
        t.prefactor = t.prefactor * s;
        r.add(std::move(t));
    }
    return r;
}

void ZetaTermSum::canonicalize()
{
    using Key = std::tuple<std::vector<PrimitiveFactor>, TExponent, std::vector<CancellingFactor>>;
    std::map<Key, ZetaTerm> merged;
    for (auto &t : terms_) {
        t.canonicalize();
        Key key{t.factors, t.t_exponent, t.tokens};
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(std::move(key), t);
        } else {
            it->second.prefactor += t.prefactor;
        }
    }
    terms_.clear();
    for (auto &[k, t] : merged) {
        if (!t.prefactor.is_zero()) {
            terms_.push_back(std::move(t));
        }
    }
}

std::string ZetaTermSum::render() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (const auto &t : terms_) {
        out += (out.empty() ? "" : " + ") + t.render();
    }
    return out;
}

// ---------------------------------------------------------------------------

RegulatorSeries expand_in_regulator(const ZetaTermSum &s, int K)
{
    if (s.regulators().empty()) {
        throw Error("no regulator left to expand in");
    }
    const std::string &reg = s.regulators().front();
    const std::vector<std::string> rest(s.regulators().begin() + 1, s.regulators().end());

    struct Piece {
        LaurentSeries series;
        ZetaTerm shell;
    };
    std::vector<Piece> pieces;
    for (const auto &t : s.terms()) {
        MeroFactorProduct local{t.prefactor, {}};
        ZetaTerm shell;
        shell.tokens = t.tokens;
        shell.t_exponent = t.t_exponent;
        for (const auto &f : t.factors) {
            (f.regulator == reg ? local.factors : shell.factors).push_back(f);
        }
        if (auto it = shell.t_exponent.slope.find(reg); it != shell.t_exponent.slope.end()) {
            local.factors.push_back(PrimitiveFactor::const_power(ParamPoly::symbol(time_symbol), Affine{it->second, Rational(0)}, reg));
            shell.t_exponent.slope.erase(it);
        }
        pieces.push_back({expand_product(local, K), std::move(shell)});
    }

    RegulatorSeries out;
    out.regulator = reg;
    int lead = 1 << 20;
    int prec = 1 << 20;
    for (const auto &p : pieces) {
        prec = std::min(prec, p.series.precision());
        if (!p.series.is_zero()) {
            lead = std::min(lead, p.series.lead_order());
        }
    }
    if (pieces.empty()) {
        prec = K;
    }
    out.precision = prec;
    std::vector<ZetaTermSum> coeffs;
    for (int k = lead; k <= prec; ++k) {
        ZetaTermSum c(rest);
        for (const auto &p : pieces) {
            ZetaTerm t = p.shell;
            t.prefactor = p.series.coefficient(k);
            c.add(std::move(t));
        }
        c.canonicalize();
        coeffs.push_back(std::move(c));
    }
    std::size_t skip = 0;
    while (skip < coeffs.size() && coeffs[skip].empty()) {
        ++skip;
    }
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(skip));
    out.lead = coeffs.empty() ? prec + 1 : lead + static_cast<int>(skip);
    out.coeffs = std::move(coeffs);
    return out;
}

namespace
{

ParamPoly collapse(const ZetaTermSum &s)
{
    ParamPoly total;
    for (const auto &t : s.terms()) {
        if (!t.factors.empty() || !t.t_exponent.slope.empty()) {
            throw Error("term depends on an undeclared regulator: " + t.render());
        }
        total += t.prefactor * ParamPoly::symbol(time_symbol, t.t_exponent.offset);
    }
    return total;
}

ParamPoly value_rec(const ZetaTermSum &s, int K)
{
    if (s.regulators().empty()) {
        return collapse(s);
    }
    const RegulatorSeries rs = expand_in_regulator(s, K);
    if (rs.is_zero()) {
        if (rs.precision < 0) {
            throw ZeroOverZeroUnresolved("series precision below order 0");
        }
        return {};
    }
    if (rs.lead < 0) {
        throw PoleAtZero(-rs.lead, rs.coeffs.front().render());
    }
    if (rs.lead > 0) {
        return {};
    }
    return value_rec(rs.coeffs.front(), K);
}

ParamPoly ratio_rec(const ZetaTermSum &n, const ZetaTermSum &d, int K, std::vector<LimitDiagnostic> *diag)
{
    if (n.regulators().empty()) {
        const ParamPoly N = collapse(n);
        const ParamPoly D = collapse(d);
        if (D.is_zero()) {
            if (N.is_zero()) {
                throw ZeroOverZeroUnresolved("numerator and denominator vanish");
            }
            throw DivergentLimit("denominator vanishes");
        }
        return divide_coefficients(N, D);
    }
    const RegulatorSeries rn = expand_in_regulator(n, K);
    const RegulatorSeries rd = expand_in_regulator(d, K);
    if (diag) {
        diag->push_back({rn.regulator, rn.lead, rd.lead, K, rn.is_zero() ? "0" : rn.coeffs.front().render(),
                         rd.is_zero() ? "0" : rd.coeffs.front().render()});
    }
    if (rn.is_zero() && rd.is_zero()) {
        throw ZeroOverZeroUnresolved("both vanish to order " + std::to_string(std::min(rn.precision, rd.precision)) +
                                     " in " + rn.regulator);
    }
    if (rd.is_zero()) {
        if (rn.lead <= rd.precision) {
            throw DivergentLimit("denominator vanishes faster than numerator in " + rd.regulator);
        }
        throw ZeroOverZeroUnresolved("denominator vanishes to series precision");
    }
    if (rn.is_zero()) {
        if (rd.lead <= rn.precision) {
            return {};
        }
        throw ZeroOverZeroUnresolved("numerator vanishes to series precision");
    }
    if (rn.lead > rd.lead) {
        return {};
    }
    if (rn.lead < rd.lead) {
        throw DivergentLimit("numerator pole order exceeds denominator's in " + rn.regulator);
    }
    return ratio_rec(rn.coeffs.front(), rd.coeffs.front(), K, diag);
}

void require_no_tokens(const ZetaTermSum &s)
{
    for (const auto &t : s.terms()) {
        if (t.tokens.empty()) {
            continue;
        }
        for (const auto &tok : t.tokens) {
            if (tok.exponent && tok.exponent->depends_on(time_symbol)) {
                throw DivergentLimit("oscillatory factor [" + tok.id + "] does not cancel");
            }
        }
        throw UncancelledToken("factor [" + t.tokens.front().id + "] does not cancel");
    }
}

} // namespace

std::vector<CancellingFactor> common_tokens(const ZetaTermSum &a, const ZetaTermSum &b)
{
    std::optional<std::vector<CancellingFactor>> common;
    const auto visit = [&](const ZetaTermSum &s) {
        for (auto t : s.terms()) {
            t.canonicalize();
            if (!common) {
                common = t.tokens;
                continue;
            }
            std::vector<CancellingFactor> out;
            std::set_intersection(common->begin(), common->end(), t.tokens.begin(), t.tokens.end(),
                                  std::back_inserter(out));
            common = std::move(out);
        }
    };
    visit(a);
    visit(b);
    return common.value_or(std::vector<CancellingFactor>{});
}

ZetaTermSum strip_tokens(const ZetaTermSum &s, const std::vector<CancellingFactor> &tokens)
{
    ZetaTermSum out(s.regulators());
    for (auto t : s.terms()) {
        for (const auto &tok : tokens) {
            auto it = std::find(t.tokens.begin(), t.tokens.end(), tok);
            if (it == t.tokens.end()) {
                throw UncancelledToken("factor [" + tok.id + "] missing from a term");
            }
            t.tokens.erase(it);
        }
        out.add(std::move(t));
    }
    return out;
}

TAsymptote value_at_zero(const ZetaTermSum &s, int K)
{
    require_no_tokens(s);
    ZetaTermSum c = s;
    c.canonicalize();
    return TAsymptote::from_poly(value_rec(c, K));
}

TAsymptote ratio_limit(const ZetaTermSum &n, const ZetaTermSum &d, int K, std::vector<LimitDiagnostic> *diagnostics)
{
    if (n.regulators() != d.regulators()) {
        throw Error("numerator and denominator must share the same gauge regulators");
    }
    const auto shared = common_tokens(n, d);
    ZetaTermSum ns = strip_tokens(n, shared);
    ZetaTermSum ds = strip_tokens(d, shared);
    require_no_tokens(ns);
    require_no_tokens(ds);
    ns.canonicalize();
    ds.canonicalize();
    if (ds.empty()) {
        throw Error("denominator is identically zero");
    }
    for (int order = std::max(K, 2);; order *= 2) {
        std::vector<LimitDiagnostic> local;
        try {
            auto value = ratio_rec(ns, ds, std::min(order, max_series_order), &local);
            if (diagnostics) {
                *diagnostics = std::move(local);
            }
            return TAsymptote::from_poly(value);
        } catch (const ZeroOverZeroUnresolved &) {
            if (order >= max_series_order) {
                if (diagnostics) {
                    *diagnostics = std::move(local);
                }
                throw;
            }
        }
    }
}

// ---------------------------------------------------------------------------

TAsymptote TAsymptote::from_poly(const ParamPoly &p)
{
    const std::string lnT = log_symbol(time_symbol);
    std::map<std::pair<Rational, int>, ParamPoly> grouped;
    for (const auto &[exps, c] : p.terms()) {
        ExponentMap rest = exps;
        Rational tp(0);
        int lp = 0;
        if (auto it = rest.find(time_symbol); it != rest.end()) {
            tp = it->second;
            rest.erase(it);
        }
        if (auto it = rest.find(lnT); it != rest.end()) {
            if (!it->second.is_integer() || it->second < Rational(0)) {
                throw Error("ln T must carry a nonnegative integer power");
            }
            lp = static_cast<int>(it->second.num());
            rest.erase(it);
        }
        grouped[{tp, lp}] += ParamPoly::monomial(c, rest);
    }
    TAsymptote t;
    for (auto it = grouped.rbegin(); it != grouped.rend(); ++it) {
        if (!it->second.is_zero()) {
            t.terms_.push_back({it->second, it->first.first, it->first.second});
        }
    }
    return t;
}

ParamPoly TAsymptote::to_poly() const
{
    ParamPoly p;
    for (const auto &t : terms_) {
        p += t.coeff * ParamPoly::symbol(time_symbol, t.t_power) *
             ParamPoly::symbol(log_symbol(time_symbol), Rational(t.log_power));
    }
    return p;
}

complex TAsymptote::eval(const Bindings &bindings, double T) const
{
    Bindings b = bindings;
    b[time_symbol] = T;
    return to_poly().eval(b);
}

std::string TAsymptote::render() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (const auto &t : terms_) {
        std::string term = "(" + t.coeff.render() + ")";
        if (!t.t_power.is_zero()) {
            term += " * T^" + t.t_power.str();
        }
        if (t.log_power > 0) {
            term += " * ln(T)^" + std::to_string(t.log_power);
        }
        out += (out.empty() ? "" : " + ") + term;
    }
    return out;
}

ThermalLimit thermal_limit(const TAsymptote &t)
{
    ThermalLimit r;
    for (const auto &term : t.terms()) {
        if (term.t_power < Rational(0)) {
            continue;
        }
        if (term.t_power.is_zero() && term.log_power == 0) {
            r.value += term.coeff;
            continue;
        }
        r.divergent = true;
        r.diagnostic = "term (" + term.coeff.render() + ") * T^" + term.t_power.str() +
                       (term.log_power ? " * ln(T)^" + std::to_string(term.log_power) : "") +
                       " does not vanish as T -> infinity";
        r.value = ParamPoly();
        return r;
    }
    return r;
}

} // namespace zreg
