#include <zreg/models.hpp>

#include <doctest.h>

#include <cmath>

using namespace zreg;

namespace
{

/// Traced evolution times observable at one point.
complex trace_at(const std::vector<TraceTerm> &terms, const Bindings &b, const std::vector<double> &dir, double T)
{
    complex sum = 0.0;
    for (const auto &t : terms) {
        sum += std::exp(complex(0, -T) * t.phase.eval(b)) * t.amplitude.eval(b) * t.angular.eval(dir, b);
    }
    return sum;
}

} // namespace

TEST_SUITE("symbol")
{
    TEST_CASE("power-series recursion")
    {
        const std::vector<Rational> a{Rational(1), Rational(2)};
        CHECK(power_series_pow(a, 3, 4) ==
              std::vector<Rational>{Rational(1), Rational(6), Rational(12), Rational(8), Rational(0)});
        CHECK_THROWS_AS(power_series_pow(std::vector<Rational>{Rational(0), Rational(1)}, 2, 3), ZeroLeadingCoefficient);
    }

    TEST_CASE("exponential of an asymptotic sum")
    {
        const auto c = exp_asymptotic({2.0}, 0.5, 3);
        CHECK(std::abs(c[0] - std::exp(1.0)) < 1e-14);
        for (std::size_t k = 1; k < c.size(); ++k) {
            CHECK(std::abs(c[k]) < 1e-14);
        }
        const auto d = exp_asymptotic({1.0, 1.0}, 1.0, 2);
        const double e = std::exp(1.0);
        CHECK(std::abs(d[0] - e) < 1e-14);
        CHECK(std::abs(d[1] - e) < 1e-14);
        CHECK(std::abs(d[2] - e / 2) < 1e-14);
    }

    TEST_CASE("two-level evolution")
    {
        const ModelSpec m = schwinger_free();
        const auto evo = involution_exp(*m.matrix);
        const Bindings b{{"m", 0.7}, {"xi", 1.9}};
        const double T = 2.3;
        const auto plain = compose_observable(evo, Observable::scalar_value(AxisPoly(ParamPoly(1.0))));
        const complex want = 2.0 * std::exp(complex(0, -0.7 * T)) * std::cos(1.9 * T);
        CHECK(std::abs(trace_at(plain, b, {1.0}, T) - want) < 1e-13);

        const auto withH = compose_observable(evo, Observable::matrix(m.matrix->as_terms()));
        const complex wantH =
            std::exp(complex(0, -0.7 * T)) * (2 * 0.7 * std::cos(1.9 * T) - complex(0, 2 * 1.9) * std::sin(1.9 * T));
        CHECK(std::abs(trace_at(withH, b, {1.0}, T) - wantH) < 1e-13);
    }

    TEST_CASE("vanishing off-diagonal part")
    {
        MatrixSymbol s = schwinger_free().matrix.value();
        s.c = AxisPoly();
        const auto terms = compose_observable(involution_exp(s), Observable::scalar_value(AxisPoly(ParamPoly(1.0))));
        const double T = 1.7;
        CHECK(std::abs(trace_at(terms, {{"m", 0.4}, {"xi", 3.0}}, {1.0}, T) - 2.0 * std::exp(complex(0, -0.4 * T))) <
              1e-13);
    }

    TEST_CASE("Dirac evolution in three dimensions")
    {
        const ModelSpec m = dirac_fermion(3);
        m.matrix->validate();
        const auto terms = compose_observable(involution_exp(*m.matrix), Observable::scalar_value(AxisPoly(ParamPoly(1.0))));
        const Bindings b{{"m", 1.1}, {"r", 0.8}};
        const double T = 3.1;
        const std::vector<double> dir{0.48, -0.6, 0.64};
        const complex want = 4.0 * std::exp(complex(0, -1.1 * T)) * std::cos(0.8 * T);
        CHECK(std::abs(trace_at(terms, b, dir, T) - want) < 1e-12);
        const auto withH = compose_observable(involution_exp(*m.matrix), Observable::matrix(m.matrix->as_terms()));
        const complex wantH =
            std::exp(complex(0, -1.1 * T)) * (4 * 1.1 * std::cos(0.8 * T) - complex(0, 4 * 0.8) * std::sin(0.8 * T));
        CHECK(std::abs(trace_at(withH, b, dir, T) - wantH) < 1e-12);
    }

    TEST_CASE("oscillator phase from ladder symbols")
    {
        const ModelSpec m = harmonic_oscillator_1d();
        const ExprContext ctx = m.context();
        const AxisPoly a = parse_expression("(m*omega/(2*hbar))^(1/2)*(x + i*hbar*xi/(m*omega))", ctx);
        const AxisPoly adag = parse_expression("(m*omega/(2*hbar))^(1/2)*(x - i*hbar*xi/(m*omega))", ctx);
        const AxisPoly sigma = (adag * a + AxisPoly(ParamPoly(Rational(1, 2)))).scaled(parse_expression("hbar*omega", ctx).as_param());
        const PhaseDecomposition d = decompose_phase(m.hamiltonian, m.axes, m.phase_scale);
        const PhaseDecomposition e = decompose_phase(sigma, m.axes, m.phase_scale);
        CHECK(d.quadratic("x").approx_equal(e.quadratic("x")));
        CHECK(d.quadratic("xi").approx_equal(e.quadratic("xi")));
        CHECK(d.h0.approx_equal(e.h0));
        CHECK(d.quadratic("x").render() == "1/2 * m * omega^2");
        CHECK(d.quadratic("xi").render() == "1/2 * hbar^2 * m^-1");
        CHECK(d.h0.render() == "1/2 * hbar * omega");
    }

    TEST_CASE("rotor and linear phases")
    {
        const ModelSpec rotor = topological_oscillator();
        const PhaseDecomposition d = decompose_phase(rotor.hamiltonian, rotor.axes);
        CHECK(d.quadratic("xi").render() == "1/2 * J^-1");
        CHECK(d.linear("xi").is_zero());
        CHECK(d.h0.is_zero());

        const ModelSpec s = schwinger_free();
        std::set<std::string> slopes;
        for (const auto &br : involution_exp(*s.matrix)) {
            const PhaseDecomposition p = decompose_phase(br.phase, s.axes);
            CHECK(p.quadratic("xi").is_zero());
            slopes.insert(p.linear("xi").render());
        }
        CHECK(slopes == std::set<std::string>{"-1", "1"});
    }

    TEST_CASE("degenerate phases are refused")
    {
        const ModelSpec rotor = topological_oscillator();
        const ExprContext ctx = rotor.context();
        CHECK_THROWS_AS(decompose_phase(parse_expression("xi^3", ctx), rotor.axes), DegenerateCase);
        CHECK_THROWS_AS(decompose_phase(parse_expression("J", ctx), rotor.axes), DegenerateCase);
    }
}
