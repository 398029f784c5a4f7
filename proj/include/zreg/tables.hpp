#ifndef ZREG_TABLES_HPP
#define ZREG_TABLES_HPP

#include <zreg/asymptotic.hpp>

#include <map>
#include <string>
#include <vector>

namespace zreg
{

/// Continuation branch for the half-line Laplace transform at imaginary
/// argument.
enum class BranchPolicy { paper, principal };

std::string to_string(BranchPolicy p);
BranchPolicy parse_branch(const std::string &s);

class GammaPole : public Error
{
public:
    using Error::Error;
};

class UnsupportedAngular : public Error
{
public:
    using Error::Error;
};

/// int_0^inf r^q e^{sign i T c r} dr for a positive monomial c.
ZetaTerm osc_linear(Affine q, int sign, const ParamPoly &c, BranchPolicy policy, const std::string &reg = "z");

/// int_R e^{-i a u^2} |u|^q du with a = sign * c * T, principal branch.
ZetaTerm gauss_radial(Affine q, int sign, const ParamPoly &c, BranchPolicy policy, const std::string &reg = "z");

/// Half-line version of gauss_radial.
ZetaTerm gauss_half(Affine q, int sign, const ParamPoly &c, BranchPolicy policy, const std::string &reg = "z");

/// The displayed form -i e^{-3 i pi (w-1)/2} Gamma(w) (cT)^{-w}, w = (q+1)/2,
/// for a = c T > 0. Kept for comparison only; it is not the continuation
/// the engine uses.
ZetaTerm gauss_displayed(Affine q, const ParamPoly &c, const std::string &reg = "z");

/// Polynomial in the direction components xi_1..xi_N of a unit vector.
class AngularPoly
{
public:
    using Exponents = std::vector<int>;

    AngularPoly() = default;
    explicit AngularPoly(int dim) : dim_(dim) {}
    AngularPoly(int dim, const ParamPoly &c);
    /// The component xi_j (0-based).
    static AngularPoly component(int dim, int j);

    int dim() const { return dim_; }
    const std::map<Exponents, ParamPoly> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Exponents e, const ParamPoly &c);
    AngularPoly &operator+=(const AngularPoly &o);
    friend AngularPoly operator+(AngularPoly a, const AngularPoly &b) { return a += b; }
    friend AngularPoly operator*(const AngularPoly &a, const AngularPoly &b);
    AngularPoly scaled(const ParamPoly &s) const;

    complex eval(const std::vector<double> &direction, const Bindings &bindings) const;
    std::string render() const;

private:
    int dim_ = 1;
    std::map<Exponents, ParamPoly> terms_;
};

/// Integral of prod xi_j^{a_j} over the unit sphere in R^N: rational * pi^e.
ParamPoly sphere_monomial(const std::vector<int> &exponents);

/// 2 pi^{N/2} / Gamma(N/2).
ParamPoly sphere_volume(int N);

/// Integral of the angular polynomial over the unit sphere.
ParamPoly angular_reduce(const AngularPoly &a);

} // namespace zreg

#endif
