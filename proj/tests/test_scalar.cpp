#include <zreg/expr.hpp>
#include <zreg/special.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace zreg;

namespace
{

ParamPoly P(const std::string &text)
{
    ExprContext ctx;
    ctx.params = {"hbar", "omega", "m", "mu", "lambda", "e", "J"};
    return parse_expression(text, ctx).as_param();
}

} // namespace

TEST_SUITE("scalar")
{
    TEST_CASE("rational arithmetic normalizes")
    {
        CHECK(Rational(2, 4) == Rational(1, 2));
        CHECK(Rational(3, -6) == Rational(-1, 2));
        CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
        CHECK((Rational(-7, 2)).floor() == -4);
        CHECK(Rational(5, 3).str() == "5/3");
        CHECK_THROWS_AS(Rational(1, 0), Error);
    }

    TEST_CASE("poly arithmetic")
    {
        CHECK(P("hbar*omega/2").scaled(2.0).render() == "hbar * omega");
        CHECK((P("m") + P("-m")).is_zero());
        const ParamPoly v = P("mu*lambda^(-1/2)");
        CHECK((v * v).render() == P("mu^2/lambda").render());
        CHECK(v.pow(Rational(2)).approx_equal(P("mu^2/lambda")));
    }

    TEST_CASE("numeric evaluation")
    {
        CHECK(std::abs(P("e^2/pi").eval({{"e", 1.0}}) - 0.3183098861837907) < 1e-15);
        CHECK(std::abs(P("hbar*omega/2").eval({{"hbar", 1.0}, {"omega", 2.0}}) - 1.0) < 1e-15);
        CHECK(std::abs(P("(6/lambda)^(1/2)*mu").eval({{"lambda", 6.0}, {"mu", 3.0}}) - 3.0) < 1e-14);
        CHECK_THROWS_AS(P("m").eval({}), UnboundParameter);
    }

    TEST_CASE("render styles")
    {
        const ParamPoly h = P("hbar*omega/2");
        CHECK(h.render() == "1/2 * hbar * omega");
        CHECK(h.render(RenderStyle::pretty) == "(1/2)·hbar·omega");
        CHECK(P("e^2/pi").render() == "e^2 * pi^-1");
        CHECK(ParamPoly().render() == "0");
    }

    TEST_CASE("source rendering parses back")
    {
        std::mt19937 rng(3);
        std::uniform_int_distribution<int> num(-9, 9), den(1, 6), pick(0, 3);
        const std::vector<std::string> names{"hbar", "omega", "m", "mu"};
        for (int t = 0; t < 100; ++t) {
            ParamPoly p;
            for (int k = 0; k < 3; ++k) {
                ParamPoly mono(Rational(num(rng), den(rng)));
                mono *= ParamPoly::symbol(names[static_cast<std::size_t>(pick(rng))], Rational(num(rng), den(rng)));
                p += mono;
            }
            const ParamPoly q = P(p.render(RenderStyle::source));
            CHECK(q.approx_equal(p, 1e-14));
            CHECK(q.render() == p.render());
        }
    }

    TEST_CASE("special functions")
    {
        CHECK(special::gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
        CHECK(special::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
        CHECK(special::polygamma(0, 1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
        CHECK(special::polygamma(1, 1.0) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-13));
    }
}
