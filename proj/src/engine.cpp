#include <zreg/engine.hpp>
#include <zreg/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace zreg
{

ExprContext ModelSpec::context() const
{
    ExprContext ctx;
    for (const auto &p : params) {
        ctx.params.insert(p.name);
    }
    for (const auto &a : axes) {
        (a.kind == AxisKind::field ? ctx.params : ctx.axes).insert(a.name);
    }
    return ctx;
}

Bindings ModelSpec::default_bindings() const
{
    Bindings b;
    for (const auto &p : params) {
        if (p.numeric_default) {
            b[p.name] = *p.numeric_default;
        }
    }
    return b;
}

std::vector<std::string> ModelSpec::regulators() const
{
    if (!regulator_order.empty()) {
        return regulator_order;
    }
    std::vector<std::string> out;
    for (const auto &a : axes) {
        if (a.integrated() && !a.group.empty() && std::find(out.begin(), out.end(), a.group) == out.end()) {
            out.push_back(a.group);
        }
    }
    return out;
}

namespace
{

std::string phase_token_id(const std::string &prefix, const ParamPoly &exponent_body)
{
    return prefix + "(" + exponent_body.render(RenderStyle::source) + "))";
}

/// (sign, |p|) of a real monomial.
std::pair<int, ParamPoly> signed_monomial(const ParamPoly &p, const std::string &what)
{
    if (!p.is_monomial()) {
        throw UnsupportedFactor(what + " must be a single monomial: " + p.render());
    }
    const auto &[exps, c] = *p.terms().begin();
    if (std::abs(c.imag()) > 1e-12 * std::abs(c)) {
        throw UnsupportedFactor(what + " must be real: " + p.render());
    }
    const int sign = c.real() > 0 ? 1 : -1;
    return {sign, ParamPoly::monomial(std::abs(c.real()), exps)};
}

std::int64_t binomial(int n, int k)
{
    std::int64_t r = 1;
    for (int j = 1; j <= k; ++j) {
        r = r * (n - k + j) / j;
    }
    return r;
}

ZetaTerm multiply(const ZetaTerm &a, const ZetaTerm &b)
{
    ZetaTerm r = a;
    r.prefactor = a.prefactor * b.prefactor;
    r.factors.insert(r.factors.end(), b.factors.begin(), b.factors.end());
    r.t_exponent += b.t_exponent;
    r.tokens.insert(r.tokens.end(), b.tokens.begin(), b.tokens.end());
    return r;
}

ParamPoly angular_factor(const AngularPoly &angular, const std::vector<const Axis *> &radial)
{
    const bool constant = angular.terms().size() <= 1 &&
                          (angular.terms().empty() ||
                           std::all_of(angular.terms().begin()->first.begin(), angular.terms().begin()->first.end(),
                                       [](int e) { return e == 0; }));
    if (constant) {
        ParamPoly c = angular.terms().empty() ? ParamPoly() : angular.terms().begin()->second;
        for (const Axis *a : radial) {
            c = c * sphere_volume(a->dimension);
        }
        return c;
    }
    if (radial.size() != 1 || radial.front()->dimension != angular.dim()) {
        throw UnsupportedAngular("direction dependence needs exactly one radial axis of matching dimension");
    }
    return angular_reduce(angular);
}

std::string describe_gauge(const GaugedTraceIntegrand &g)
{
    std::string out;
    for (const auto &a : g.axes) {
        auto it = g.gauge.find(a.name);
        if (it == g.gauge.end()) {
            continue;
        }
        const std::string var = a.radial() ? "||" + a.name + "||" : "|" + a.name + "|";
        const Rational &s = it->second.share;
        const std::string exp = s == Rational(1) ? it->second.regulator : s.str() + "*" + it->second.regulator;
        out += (out.empty() ? "" : " ") + var + "^(" + exp + ")";
    }
    return out;
}

} // namespace

GaugedTraceIntegrand build_integrand(const ModelSpec &model, const std::vector<TraceTerm> &terms)
{
    GaugedTraceIntegrand g;
    g.measure = model.measure;
    for (const auto &a : model.axes) {
        if (a.integrated()) {
            g.axes.push_back(a);
        } else if (a.kind == AxisKind::compact) {
            g.tokens.push_back({"vol(" + a.name + ")", std::nullopt});
        }
    }
    g.tokens.insert(g.tokens.end(), model.tokens.begin(), model.tokens.end());
    std::set<std::string> integrated;
    for (const auto &a : g.axes) {
        integrated.insert(a.name);
    }
    for (const auto &tt : terms) {
        const PhaseDecomposition d = decompose_phase(tt.phase, model.axes, model.phase_scale);
        std::vector<CancellingFactor> tokens;
        if (!d.h0.is_zero()) {
            const ParamPoly body = model.phase_scale * d.h0;
            tokens.push_back({phase_token_id("exp(-i*T*", body),
                              ParamPoly(complex(0.0, -1.0)) * ParamPoly::symbol(time_symbol) * body});
        }
        for (const auto &[m, c] : tt.amplitude.terms()) {
            for (const auto &[name, k] : m) {
                if (!integrated.count(name)) {
                    throw Error("amplitude depends on non-integrated axis " + name);
                }
            }
            IntegrandTerm t;
            t.coeff = c;
            t.powers = m;
            t.angular = tt.angular;
            t.phase = d;
            t.tokens = tokens;
            g.terms.push_back(std::move(t));
        }
    }
    return g;
}

GaugedTraceIntegrand apply_gauge(GaugedTraceIntegrand g, const std::vector<std::string> &regulator_order)
{
    std::map<std::string, int> group_size;
    for (const auto &a : g.axes) {
        if (a.group.empty() ||
            std::find(regulator_order.begin(), regulator_order.end(), a.group) == regulator_order.end()) {
            throw UncoveredAxis("axis " + a.name + " is not covered by a gauge group");
        }
        ++group_size[a.group];
    }
    g.regulators = regulator_order;
    g.gauge.clear();
    for (const auto &a : g.axes) {
        g.gauge[a.name] = {a.group, Rational(1, group_size[a.group])};
    }
    g.trace.push_back({"gauge", describe_gauge(g)});
    return g;
}

GaugedTraceIntegrand complete_square(GaugedTraceIntegrand g, const std::string &axis)
{
    auto ax = std::find_if(g.axes.begin(), g.axes.end(), [&](const Axis &a) { return a.name == axis; });
    if (ax == g.axes.end()) {
        throw Error("unknown axis " + axis);
    }
    std::vector<IntegrandTerm> out;
    bool shifted = false;
    for (const auto &t : g.terms) {
        const ParamPoly h2 = t.phase.quadratic(axis);
        const ParamPoly h1 = t.phase.linear(axis);
        if (h2.is_zero()) {
            throw ZeroQuadraticCoefficient("axis " + axis + " has no quadratic phase");
        }
        if (h1.is_zero()) {
            out.push_back(t);
            continue;
        }
        if (ax->radial()) {
            throw UnsupportedFactor("cannot shift the radial axis " + axis);
        }
        shifted = true;
        const ParamPoly shift = h1.divided_by(h2.scaled(2.0));
        const ParamPoly constant = (h1 * h1).divided_by(h2.scaled(4.0));
        const ParamPoly body = t.phase.scale * constant;
        IntegrandTerm base = t;
        base.phase.h1.erase(axis);
        base.tokens.push_back({phase_token_id("exp(i*T*", body),
                               ParamPoly(complex(0.0, 1.0)) * ParamPoly::symbol(time_symbol) * body});
        const int k = t.powers.count(axis) ? t.powers.at(axis) : 0;
        for (int j = 0; j <= k; ++j) {
            IntegrandTerm n = base;
            n.coeff = t.coeff * ParamPoly(double(binomial(k, j))) * (-shift).pow(Rational(k - j));
            if (n.coeff.is_zero()) {
                continue;
            }
            n.powers[axis] = j;
            std::erase_if(n.powers, [](const auto &kv) { return kv.second == 0; });
            out.push_back(std::move(n));
        }
    }
    g.terms = std::move(out);
    if (shifted) {
        g.trace.push_back({"complete_square", "axis " + axis + " shifted to a purely quadratic phase"});
    }
    return g;
}

ZetaTermSum reduce(const GaugedTraceIntegrand &g, BranchPolicy policy)
{
    ZetaTermSum sum(g.regulators);
    std::vector<const Axis *> radial;
    for (const auto &a : g.axes) {
        if (a.radial()) {
            radial.push_back(&a);
        }
    }
    for (const auto &t : g.terms) {
        ZetaTerm seed;
        seed.prefactor = g.measure * t.coeff * angular_factor(t.angular, radial);
        seed.tokens = t.tokens;
        seed.tokens.insert(seed.tokens.end(), g.tokens.begin(), g.tokens.end());
        std::vector<ZetaTerm> partial{seed};
        for (const auto &a : g.axes) {
            auto gi = g.gauge.find(a.name);
            if (gi == g.gauge.end()) {
                throw UncoveredAxis("axis " + a.name + " has no gauge");
            }
            const std::string &reg = gi->second.regulator;
            const int k = t.powers.count(a.name) ? t.powers.at(a.name) : 0;
            const Affine q{gi->second.share, Rational(k + (a.radial() ? a.dimension - 1 : 0))};
            const ParamPoly h2 = t.phase.scale * t.phase.quadratic(a.name);
            const ParamPoly h1 = t.phase.scale * t.phase.linear(a.name);
            std::vector<ZetaTerm> axis_terms;
            if (!h2.is_zero()) {
                if (!h1.is_zero()) {
                    throw Error("axis " + a.name + " needs completing the square before reduction");
                }
                const auto [sign, c] = signed_monomial(h2, "quadratic phase coefficient");
                if (a.radial()) {
                    axis_terms.push_back(gauss_half(q, sign, c, policy, reg));
                } else if (k % 2 == 0) {
                    axis_terms.push_back(gauss_radial(q, sign, c, policy, reg));
                }
            } else {
                // e^{-i T b u}: frequency sign is opposite to b's
                const auto [sign, c] = signed_monomial(h1, "linear phase coefficient");
                axis_terms.push_back(osc_linear(q, -sign, c, policy, reg));
                if (!a.radial()) {
                    ZetaTerm mirrored = osc_linear(q, sign, c, policy, reg);
                    if (k % 2 != 0) {
                        mirrored.prefactor = -mirrored.prefactor;
                    }
                    axis_terms.push_back(std::move(mirrored));
                }
            }
            std::vector<ZetaTerm> next;
            for (const auto &p : partial) {
                for (const auto &x : axis_terms) {
                    next.push_back(multiply(p, x));
                }
            }
            partial = std::move(next);
        }
        for (auto &p : partial) {
            sum.add(std::move(p));
        }
    }
    sum.canonicalize();
    return sum;
}

namespace
{

GaugedTraceIntegrand prepare(const ModelSpec &model, const std::vector<TraceTerm> &terms)
{
    GaugedTraceIntegrand g = apply_gauge(build_integrand(model, terms), model.regulators());
    for (const auto &a : model.axes) {
        if (!a.integrated()) {
            continue;
        }
        const bool needs = std::any_of(g.terms.begin(), g.terms.end(), [&](const IntegrandTerm &t) {
            return !t.phase.quadratic(a.name).is_zero() && !t.phase.linear(a.name).is_zero();
        });
        if (needs) {
            g = complete_square(std::move(g), a.name);
        }
    }
    return g;
}

std::vector<EvolutionBranch> evolution_of(const ModelSpec &model)
{
    if (model.matrix) {
        return involution_exp(*model.matrix);
    }
    return {{model.hamiltonian, identity_matrix(1, 1)}};
}

} // namespace

ExpectationSums expectation_sums(const ModelSpec &model, const Observable &obs, BranchPolicy policy)
{
    const auto evolution = evolution_of(model);
    ExpectationSums s;
    s.numerator_integrand = prepare(model, compose_observable(evolution, obs));
    s.denominator_integrand =
        prepare(model, compose_observable(evolution, Observable::scalar_value(AxisPoly(ParamPoly(1.0)))));
    s.numerator = reduce(s.numerator_integrand, policy);
    s.denominator = reduce(s.denominator_integrand, policy);
    return s;
}

ExpectationResult expectation(const ModelSpec &model, const NamedObservable &obs, BranchPolicy policy, int K)
{
    ExpectationResult r;
    r.model = model.name;
    r.observable = obs.name;
    r.branch = policy;
    r.series_order = K;
    const ExpectationSums s = expectation_sums(model, obs.observable, policy);
    r.trace = s.denominator_integrand.trace;
    r.trace.push_back({"reduce", "numerator = " + s.numerator.render()});
    r.trace.push_back({"reduce", "denominator = " + s.denominator.render()});
    try {
        r.finite_T = ratio_limit(s.numerator, s.denominator, K, &r.diagnostics);
    } catch (const DivergentLimit &e) {
        r.divergent = true;
        r.diagnostic = e.what();
        r.trace.push_back({"laurent", r.diagnostic});
        return r;
    }
    for (const auto &d : r.diagnostics) {
        r.trace.push_back({"laurent", d.regulator + ": numerator order " + std::to_string(d.numerator_order) +
                                          ", denominator order " + std::to_string(d.denominator_order) +
                                          ", series order " + std::to_string(d.series_order)});
    }
    r.trace.push_back({"limit z->0", r.finite_T.render()});
    const ThermalLimit th = thermal_limit(r.finite_T);
    if (th.divergent) {
        r.divergent = true;
        r.diagnostic = th.diagnostic;
        r.trace.push_back({"thermal", "divergent: " + th.diagnostic});
        return r;
    }
    r.value = th.value;
    r.trace.push_back({"thermal", r.value.render()});
    return r;
}

// ---------------------------------------------------------------------------

ParamPoly kv_trace_at_zero(const KVAmplitudeSpec &spec)
{
    if (spec.N < 1) {
        throw Error("dimension must be positive");
    }
    ParamPoly total = spec.amplitude.remainder_integral;
    for (const auto &t : spec.amplitude.terms) {
        const Rational shift = Rational(spec.N) + t.degree;
        if (shift.is_zero()) {
            throw CriticalDegree("degree " + t.degree.str() + " equals -N");
        }
        if (t.log_order < 0) {
            throw Error("negative logarithmic order");
        }
        Rational weight((t.log_order + 1) % 2 == 0 ? 1 : -1);
        for (int j = 2; j <= t.log_order; ++j) {
            weight *= Rational(j);
        }
        for (int j = 0; j <= t.log_order; ++j) {
            weight /= shift;
        }
        ParamPoly sphere;
        if (t.angular.dim() == spec.N) {
            sphere = angular_reduce(t.angular);
        } else {
            const Axis radial{"xi", AxisKind::momentum, "", spec.N};
            sphere = angular_factor(t.angular, {&radial});
        }
        total += ParamPoly(weight) * sphere;
    }
    const complex phase = std::exp(complex(0.0, spec.theta));
    return total.scaled(phase) * spec.volume;
}

// ---------------------------------------------------------------------------

ParamPoly derivative(const ParamPoly &p, const std::string &name)
{
    ParamPoly out;
    for (const auto &[exps, c] : p.terms()) {
        auto it = exps.find(name);
        if (it == exps.end()) {
            continue;
        }
        ExponentMap e = exps;
        const Rational k = it->second;
        e[name] = k - Rational(1);
        out += ParamPoly::monomial(c * k.to_double(), e);
    }
    return out;
}

ParamPoly substitute(const ParamPoly &p, const std::string &name, const ParamPoly &value)
{
    ParamPoly out;
    for (const auto &[exps, c] : p.terms()) {
        ExponentMap e = exps;
        Rational k(0);
        if (auto it = e.find(name); it != e.end()) {
            k = it->second;
            e.erase(it);
        }
        out += ParamPoly::monomial(c, e) * value.pow(k);
    }
    return out;
}

namespace
{

bool positive_under_positivity(const ParamPoly &p, const Bindings &fallback, bool &decided)
{
    decided = true;
    if (p.is_zero()) {
        return false;
    }
    if (p.is_monomial()) {
        const complex c = p.terms().begin()->second;
        if (std::abs(c.imag()) <= 1e-12 * std::abs(c)) {
            return c.real() > 0;
        }
    }
    if (!fallback.empty()) {
        return p.eval(fallback).real() > 0;
    }
    decided = false;
    return false;
}

} // namespace

EffectivePotential solve_potential(const ParamPoly &potential, const std::string &field, const Bindings &classify_at)
{
    EffectivePotential ep;
    ep.potential = potential;
    const ParamPoly dV = derivative(potential, field);
    const ParamPoly ddV = derivative(dV, field);
    ep.trace.push_back({"potential", "V_e = " + potential.render()});
    ep.trace.push_back({"potential", "dV_e = " + dV.render()});
    if (dV.is_zero()) {
        throw UnsolvablePotential("potential does not depend on " + field);
    }
    const auto powers = dV.collect(field);
    std::set<std::int64_t> keys;
    for (const auto &[k, c] : powers) {
        if (!k.is_integer() || k < Rational(0)) {
            throw UnsolvablePotential("non-integer power of " + field + " in the stationarity condition");
        }
        keys.insert(k.num());
    }
    const auto coeff = [&](std::int64_t k) {
        auto it = powers.find(Rational(k));
        return it == powers.end() ? ParamPoly() : it->second;
    };
    std::vector<ParamPoly> locations;
    const auto subset = [&](std::set<std::int64_t> allowed) {
        return std::all_of(keys.begin(), keys.end(), [&](auto k) { return allowed.count(k) > 0; });
    };
    if (keys.count(1) && subset({1, 3})) {
        locations.push_back(ParamPoly());
        const ParamPoly a = coeff(1);
        const ParamPoly b = coeff(3);
        if (!b.is_zero()) {
            if (!b.is_monomial()) {
                throw UnsolvablePotential("cubic coefficient is not a monomial");
            }
            const ParamPoly r2 = (-a).divided_by(b);
            if (!r2.is_monomial()) {
                throw UnsolvablePotential("squared root is not a monomial: " + r2.render());
            }
            bool decided = false;
            if (positive_under_positivity(r2, classify_at, decided)) {
                const ParamPoly root = r2.pow(Rational(1, 2));
                locations.push_back(root);
                locations.push_back(-root);
            } else if (!decided) {
                throw UnsolvablePotential("sign of " + r2.render() + " is undetermined");
            }
        }
    } else if (keys.count(1) && subset({0, 1})) {
        if (!coeff(1).is_monomial()) {
            throw UnsolvablePotential("linear coefficient is not a monomial");
        }
        locations.push_back((-coeff(0)).divided_by(coeff(1)));
    } else {
        throw UnsolvablePotential("stationarity condition " + dV.render() + " has no supported pattern");
    }
    for (const auto &loc : locations) {
        CriticalPoint cp;
        cp.location = loc;
        cp.curvature = substitute(ddV, field, loc);
        bool decided = false;
        cp.minimum = positive_under_positivity(cp.curvature, classify_at, decided);
        if (!decided) {
            throw UnsolvablePotential("cannot classify the critical point " + loc.render());
        }
        ep.trace.push_back({"critical point", field + " = " + loc.render() + ", curvature " + cp.curvature.render() +
                                                  (cp.minimum ? " (minimum)" : " (not a minimum)")});
        ep.critical_points.push_back(cp);
        if (cp.minimum) {
            ep.minima.push_back(loc);
            if (!cp.curvature.is_monomial()) {
                throw UnsolvablePotential("curvature is not a monomial: " + cp.curvature.render());
            }
            const ParamPoly mass = cp.curvature.pow(Rational(1, 2));
            if (std::none_of(ep.masses.begin(), ep.masses.end(), [&](const ParamPoly &m) { return m.approx_equal(mass); })) {
                ep.masses.push_back(mass);
            }
        }
    }
    return ep;
}

NumericPotential solve_potential_numeric(const ParamPoly &potential, const std::string &field,
                                         const Bindings &bindings)
{
    const ParamPoly dV = derivative(potential, field);
    std::vector<complex> coeffs;
    for (const auto &[k, c] : dV.collect(field)) {
        if (!k.is_integer() || k < Rational(0)) {
            throw UnsolvablePotential("non-integer power of " + field);
        }
        const auto idx = static_cast<std::size_t>(k.num());
        if (coeffs.size() <= idx) {
            coeffs.resize(idx + 1, 0.0);
        }
        coeffs[idx] += c.eval(bindings);
    }
    NumericPotential out;
    const auto V = [&](double phi) {
        Bindings b = bindings;
        b[field] = phi;
        return potential.eval(b).real();
    };
    for (const complex &root : oracle::polynomial_roots(coeffs)) {
        if (std::abs(root.imag()) > 1e-7 * (1.0 + std::abs(root))) {
            continue;
        }
        const double x = root.real();
        if (std::any_of(out.critical_points.begin(), out.critical_points.end(),
                        [&](double y) { return std::abs(x - y) < 1e-9 * (1.0 + std::abs(x)); })) {
            continue;
        }
        out.critical_points.push_back(x);
    }
    std::sort(out.critical_points.begin(), out.critical_points.end());
    for (double x : out.critical_points) {
        const double curvature = oracle::second_derivative(V, x);
        if (curvature > 0) {
            out.minima.push_back(x);
            const double m = std::sqrt(curvature);
            if (std::none_of(out.masses.begin(), out.masses.end(),
                             [&](double y) { return std::abs(m - y) < 1e-6 * (1.0 + m); })) {
                out.masses.push_back(m);
            }
        }
    }
    return out;
}

EffectivePotential effective_potential(const ModelSpec &model, BranchPolicy policy, int K)
{
    if (model.field.empty()) {
        throw Error("model " + model.name + " declares no field axis");
    }
    const auto evolution = evolution_of(model);
    const GaugedTraceIntegrand g =
        prepare(model, compose_observable(evolution, Observable::scalar_value(AxisPoly(ParamPoly(1.0)))));
    const ZetaTermSum Z = reduce(g, policy);
    const auto tokens = common_tokens(Z, Z);
    ParamPoly potential;
    bool found = false;
    const ParamPoly normalization = ParamPoly(complex(0.0, -1.0)) * ParamPoly::symbol(time_symbol) * model.phase_scale;
    for (const auto &t : tokens) {
        if (t.exponent && t.exponent->depends_on(model.field)) {
            if (found) {
                throw UnsolvablePotential("several field-dependent phases");
            }
            potential = t.exponent->divided_by(normalization);
            found = true;
        }
    }
    if (!found) {
        throw UnsolvablePotential("partition function does not depend on " + model.field);
    }
    const ZetaTermSum stripped = strip_tokens(Z, tokens);
    const ParamPoly residual = value_at_zero(stripped, K).to_poly();
    if (!residual.is_monomial() || residual.depends_on(model.field)) {
        throw LogOfNonmonomial("residual " + residual.render() + " is not a field-independent monomial");
    }
    EffectivePotential ep = solve_potential(potential, model.field);
    ep.residual = residual;
    std::vector<DerivationStep> trace = g.trace;
    trace.push_back({"reduce", "Z = " + Z.render()});
    trace.push_back({"limit z->0", "residual = " + residual.render() + "; ln(residual)/(-i*T*" +
                                       model.phase_scale.render() + ") vanishes as T -> infinity"});
    trace.insert(trace.end(), ep.trace.begin(), ep.trace.end());
    ep.trace = std::move(trace);
    return ep;
}

} // namespace zreg
