#include <zreg/models.hpp>
#include <zreg/oracle.hpp>

#include <doctest.h>

#include <cmath>

using namespace zreg;

namespace
{

ParamPoly P(const ModelSpec &m, const std::string &text)
{
    return parse_expression(text, m.context()).as_param();
}

ModelSpec line_model(const std::string &phase, const std::vector<std::string> &extra_params = {})
{
    ModelSpec m;
    m.name = "line";
    for (const auto &p : extra_params) {
        m.params.push_back({p, true, std::nullopt});
    }
    m.axes = {{"u", AxisKind::momentum, "z"}};
    m.hamiltonian = parse_expression(phase, m.context());
    m.observables.push_back({"one", Observable::scalar_value(AxisPoly(ParamPoly(1.0))), ParamPoly(1.0)});
    return m;
}

GaugedTraceIntegrand gauged(const ModelSpec &m)
{
    const TraceTerm t{m.hamiltonian, AxisPoly(ParamPoly(1.0)), AngularPoly(1, ParamPoly(1.0))};
    return apply_gauge(build_integrand(m, {t}), m.regulators());
}

const CancellingFactor *exponential_token(const GaugedTraceIntegrand &g)
{
    for (const auto &t : g.tokens) {
        if (t.exponent && t.id.rfind("exp(i*T*", 0) == 0) {
            return &t;
        }
    }
    for (const auto &term : g.terms) {
        for (const auto &t : term.tokens) {
            if (t.exponent && t.id.rfind("exp(i*T*", 0) == 0) {
                return &t;
            }
        }
    }
    return nullptr;
}

NamedObservable named(const std::string &name, const AxisPoly &p)
{
    return {name, Observable::scalar_value(p), std::nullopt};
}

} // namespace

TEST_SUITE("engine")
{
    TEST_CASE("gauge assignment")
    {
        const ModelSpec ho = harmonic_oscillator_1d();
        const GaugedTraceIntegrand g = gauged(ho);
        CHECK(g.gauge.at("xi").regulator == "z1");
        CHECK(g.gauge.at("x").regulator == "z2");
        CHECK(g.gauge.at("x").share == Rational(1));

        const ModelSpec ho3 = harmonic_oscillator_nd(3, true);
        const GaugedTraceIntegrand g3 = gauged(ho3);
        for (const auto &[axis, gauge] : g3.gauge) {
            CHECK(gauge.share == Rational(1, 3));
            CHECK(gauge.regulator == (axis.rfind("xi", 0) == 0 ? "z1" : "z2"));
        }

        const GaugedTraceIntegrand rotor = gauged(topological_oscillator());
        REQUIRE(rotor.gauge.size() == 1);
        CHECK(rotor.gauge.at("xi").regulator == "z");

        ModelSpec bad = harmonic_oscillator_1d();
        bad.regulator_order = {"z1"};
        CHECK_THROWS_AS(gauged(bad), UncoveredAxis);
    }

    TEST_CASE("completing the square")
    {
        const ModelSpec m = line_model("u^2 + 2*u");
        const GaugedTraceIntegrand g = complete_square(gauged(m), "u");
        for (const auto &t : g.terms) {
            CHECK(t.phase.linear("u").is_zero());
            CHECK(t.phase.quadratic("u").render() == "1");
        }
        const CancellingFactor *tok = exponential_token(g);
        REQUIRE(tok != nullptr);
        CHECK(tok->exponent->approx_equal(ParamPoly::imag_unit() * ParamPoly::symbol("T")));

        const GaugedTraceIntegrand rotor = gauged(topological_oscillator());
        const GaugedTraceIntegrand same = complete_square(rotor, "xi");
        CHECK(exponential_token(same) == nullptr);
        REQUIRE(same.terms.size() == rotor.terms.size());
        CHECK(same.terms[0].phase.quadratic("xi").approx_equal(rotor.terms[0].phase.quadratic("xi")));

        const ModelSpec source = line_model("u^2/(2*J) + c*u", {"J", "c"});
        const GaugedTraceIntegrand s = complete_square(gauged(source), "u");
        const CancellingFactor *st = exponential_token(s);
        REQUIRE(st != nullptr);
        CHECK(st->exponent->approx_equal(P(source, "i*T*c^2*J/2")));
        CHECK(expectation(source, source.observables[0], BranchPolicy::paper).value.render() == "1");
        const ExpectationResult shifted =
            expectation(source, named("u", AxisPoly::axis("u")), BranchPolicy::principal);
        CHECK(shifted.value.approx_equal(P(source, "-c*J")));
    }

    TEST_CASE("reductions agree with quadrature at finite z")
    {
        struct Case {
            ModelSpec model;
            Observable obs;
            Bindings bindings;
        };
        const ModelSpec boson = schwinger_boson_mass();
        const std::vector<Case> cases{
            {topological_oscillator(), Observable::scalar_value(AxisPoly(ParamPoly(1.0))), {{"J", 0.7}}},
            {dirac_fermion(3), Observable::scalar_value(AxisPoly(ParamPoly(1.0))), {{"m", 1.2}}},
            {boson, Observable::scalar_value(AxisPoly::axis("E", 2)), {{"e", 1.0}, {"m", 0.5}}},
        };
        for (const auto &c : cases) {
            const ExpectationSums s = expectation_sums(c.model, c.obs, BranchPolicy::principal);
            const double T = 3;
            for (double z : {-0.1, 0.15}) {
                INFO(c.model.name << " z=" << z);
                std::map<std::string, complex> zs;
                for (const auto &r : c.model.regulators()) {
                    zs[r] = z;
                }
                const complex sym = oracle::eval_sum(s.numerator, zs, T, c.bindings);
                const complex num = oracle::integrate(s.numerator_integrand, z, T, c.bindings);
                CHECK(std::abs(sym - num) < 1e-7 + 1e-6 * std::abs(num));
                const complex dsym = oracle::eval_sum(s.denominator, zs, T, c.bindings);
                const complex dnum = oracle::integrate(s.denominator_integrand, z, T, c.bindings);
                CHECK(std::abs(dsym - dnum) < 1e-7 + 1e-6 * std::abs(dnum));
            }
        }
        const ExpectationSums fermion = expectation_sums(dirac_fermion(3), Observable::scalar_value(AxisPoly(ParamPoly(1.0))),
                                                         BranchPolicy::paper);
        CHECK(fermion.denominator.terms().size() == 2);
    }

    TEST_CASE("bundled expectations")
    {
        const ModelSpec ho = harmonic_oscillator_1d();
        CHECK(expectation(ho, ho.observables[0], BranchPolicy::paper).value.render() == "1/2 * hbar * omega");
        CHECK(expectation(ho, named("one", AxisPoly(ParamPoly(1.0))), BranchPolicy::paper).value.render() == "1");
        const ExpectationResult odd = expectation(ho, named("x", AxisPoly::axis("x")), BranchPolicy::paper);
        CHECK(!odd.divergent);
        CHECK(odd.value.is_zero());
        const ModelRun rotor = run_model(topological_oscillator());
        CHECK(rotor.outcomes[0].value.render() == "1/4 * J^-1 * pi^-2");
        CHECK(rotor.outcomes[1].value.render() == "1/2 * J^-1");
        CHECK(rotor.passed());
        const ExpectationResult trace = expectation(ho, ho.observables[0], BranchPolicy::paper);
        std::vector<std::string> stages;
        for (const auto &s : trace.trace) {
            stages.push_back(s.stage);
        }
        CHECK(std::find(stages.begin(), stages.end(), "gauge") != stages.end());
        CHECK(std::find(stages.begin(), stages.end(), "thermal") != stages.end());
    }

    TEST_CASE("divergent observables are reported")
    {
        const ModelSpec ho = harmonic_oscillator_1d();
        const ExpectationResult r = expectation(ho, named("T", AxisPoly(ParamPoly::symbol("T"))), BranchPolicy::paper);
        CHECK(r.divergent);
        CHECK(!r.diagnostic.empty());
    }

    TEST_CASE("trace at zero")
    {
        KVAmplitudeSpec s;
        s.N = 1;
        s.amplitude.terms.push_back({Rational(-3), 0, AngularPoly(1, ParamPoly(1.0))});
        CHECK(kv_trace_at_zero(s).render() == "1");
        s.amplitude.terms[0].log_order = 1;
        CHECK(kv_trace_at_zero(s).render() == "1/2");
        CHECK(kv_trace_at_zero(KVAmplitudeSpec{}).is_zero());
        KVAmplitudeSpec critical;
        critical.N = 2;
        critical.amplitude.terms.push_back({Rational(-2), 0, AngularPoly(2, ParamPoly(1.0))});
        CHECK_THROWS_AS(kv_trace_at_zero(critical), CriticalDegree);
        KVAmplitudeSpec phased = s;
        phased.theta = M_PI;
        phased.volume = ParamPoly(2.0);
        CHECK(std::abs(kv_trace_at_zero(phased).eval({}) + 1.0) < 1e-14);
    }

    TEST_CASE("effective potentials")
    {
        const ModelSpec m = phi4();
        const EffectivePotential v = effective_potential(m, BranchPolicy::paper);
        REQUIRE(v.minima.size() == 2);
        CHECK(v.masses.front().render() == "2^1/2 * mu");
        const Bindings b{{"mu", 1.0}, {"lambda", 6.0}};
        const NumericPotential n = solve_potential_numeric(v.potential, m.field, b);
        REQUIRE(n.minima.size() == 2);
        CHECK(n.minima[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(n.minima[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(n.masses.front() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

        const ParamPoly free = ParamPoly::symbol("phi", Rational(2)).scaled(0.5);
        const EffectivePotential f = solve_potential(free, "phi");
        REQUIRE(f.minima.size() == 1);
        CHECK(f.minima[0].is_zero());
        CHECK(f.masses.front().render() == "1");
    }

    TEST_CASE("derivative and substitution")
    {
        const ParamPoly p = ParamPoly::symbol("x", Rational(3)) + ParamPoly::symbol("x").scaled(2.0);
        CHECK(derivative(p, "x").approx_equal(ParamPoly::symbol("x", Rational(2)).scaled(3.0) + ParamPoly(2.0)));
        CHECK(substitute(p, "x", ParamPoly(2.0)).render() == "12");
    }
}
