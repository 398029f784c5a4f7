#include <zreg/oracle.hpp>

#include <doctest.h>

#include <cmath>

using namespace zreg;

namespace
{

const complex I(0, 1);

complex at(const ZetaTerm &t, double z, double T)
{
    return oracle::eval_term(t, {{"z", z}}, T, {});
}

} // namespace

TEST_SUITE("tables")
{
    TEST_CASE("one-sided transforms, paper policy")
    {
        const Affine q{Rational(1), Rational(0)};
        for (double z : {-0.3, 0.0, 0.4}) {
            const double T = 2.5;
            const complex plus = -I * std::exp(-I * M_PI * z / 2.0) * std::tgamma(z + 1) * std::pow(T, -z - 1);
            const complex minus = I * std::exp(-3.0 * I * M_PI * z / 2.0) * std::tgamma(z + 1) * std::pow(T, -z - 1);
            CHECK(std::abs(at(osc_linear(q, 1, ParamPoly(1.0), BranchPolicy::paper), z, T) - plus) < 1e-12);
            CHECK(std::abs(at(osc_linear(q, -1, ParamPoly(1.0), BranchPolicy::paper), z, T) - minus) < 1e-12);
        }
    }

    TEST_CASE("one-sided transform, principal branch, against damped quadrature")
    {
        const double T = 3;
        const ZetaTerm t = osc_linear({Rational(0), Rational(0)}, 1, ParamPoly(1.0), BranchPolicy::principal);
        CHECK(std::abs(at(t, 0, T) - I / T) < 1e-14);
        const auto q = oracle::damped_quadrature([&](double r) { return std::exp(I * T * r); }, oracle::Damping::linear, T);
        CHECK(std::abs(q.value - I / T) < 1e-6);
    }

    TEST_CASE("Gaussian transforms")
    {
        const ZetaTerm fresnel = gauss_radial({Rational(0), Rational(0)}, 1, ParamPoly(1.0), BranchPolicy::principal);
        const complex want = std::sqrt(M_PI) * std::exp(-I * M_PI / 4.0);
        CHECK(std::abs(at(fresnel, 0, 1) - want) < 1e-13);
        const auto q = oracle::damped_quadrature([&](double u) { return std::exp(-I * u * u); }, oracle::Damping::gaussian, 1);
        CHECK(std::abs(2.0 * q.value - want) < 1e-6);
        // both policies share the Gaussian continuation
        const ZetaTerm paper = gauss_radial({Rational(0), Rational(0)}, 1, ParamPoly(1.0), BranchPolicy::paper);
        CHECK(std::abs(at(paper, 0, 1) - want) < 1e-13);
        const ZetaTerm half = gauss_half({Rational(0), Rational(0)}, 1, ParamPoly(1.0), BranchPolicy::principal);
        CHECK(std::abs(at(half, 0, 1) - want / 2.0) < 1e-13);
    }

    TEST_CASE("displayed Gaussian form")
    {
        const ZetaTerm t = gauss_displayed({Rational(1), Rational(0)}, ParamPoly(Rational(1, 2)));
        for (double z : {-0.2, 0.3}) {
            const double T = 4;
            const double w = (z + 1) / 2;
            const complex want =
                -I * std::exp(-1.5 * I * M_PI * (z - 1) / 2.0) * std::tgamma(w) * std::pow(2.0 / T, w);
            CHECK(std::abs(at(t, z, T) - want) < 1e-12);
        }
    }

    TEST_CASE("sphere volumes")
    {
        CHECK(sphere_volume(3).render() == "4 * pi");
        CHECK(sphere_volume(2).render() == "2 * pi");
        CHECK(sphere_volume(1).render() == "2");
        for (int N : {1, 2, 3}) {
            CHECK(std::abs(sphere_volume(N).eval({}) - oracle::sphere_quadrature(AngularPoly(N, ParamPoly(1.0)), {})) <
                  1e-12);
        }
    }

    TEST_CASE("angular reduction")
    {
        const ParamPoly m = ParamPoly::symbol("m");
        CHECK(angular_reduce(AngularPoly(3, m.scaled(4.0))).render() == "16 * m * pi");
        CHECK(angular_reduce(AngularPoly::component(3, 0)).is_zero());
        const AngularPoly sq = AngularPoly::component(2, 0) * AngularPoly::component(2, 0);
        CHECK(angular_reduce(sq).render() == "pi");
        CHECK(std::abs(oracle::sphere_quadrature(sq, {}) - M_PI) < 1e-12);
        const AngularPoly mixed = AngularPoly::component(3, 0) * AngularPoly::component(3, 0) *
                                      AngularPoly::component(3, 1) * AngularPoly::component(3, 1) +
                                  AngularPoly::component(3, 2) * AngularPoly::component(3, 2);
        CHECK(std::abs(angular_reduce(mixed).eval({}) - oracle::sphere_quadrature(mixed, {})) < 1e-12);
    }

    TEST_CASE("gamma poles are reported")
    {
        CHECK_THROWS_AS(osc_linear({Rational(0), Rational(-1)}, 1, ParamPoly(1.0), BranchPolicy::paper), GammaPole);
    }
}
