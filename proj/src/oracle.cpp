#include <zreg/oracle.hpp>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace zreg::oracle
{

namespace
{

constexpr double pi = boost::math::constants::pi<double>();

Bindings with_time(Bindings b, double T)
{
    b[time_symbol] = T;
    b[log_symbol(time_symbol)] = std::log(T);
    return b;
}

complex regulator_value(const std::map<std::string, complex> &z, const std::string &reg)
{
    auto it = z.find(reg);
    return it == z.end() ? complex(0.0) : it->second;
}

} // namespace

complex gamma(complex z)
{
    static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        return pi / (std::sin(pi * z) * gamma(1.0 - z));
    }
    z -= 1.0;
    complex x = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) {
        x += c[i] / (z + double(i));
    }
    const complex t = z + 7.5;
    return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

complex eval_factor(const PrimitiveFactor &f, complex z, const Bindings &bindings)
{
    const complex arg = f.arg.alpha.to_double() * z + f.arg.beta.to_double();
    switch (f.kind) {
    case PrimitiveFactor::Kind::gamma:
        return gamma(arg);
    case PrimitiveFactor::Kind::exp_i_pi:
        return std::exp(complex(0.0, pi) * arg);
    case PrimitiveFactor::Kind::affine_power:
        return std::pow(arg, double(f.power));
    case PrimitiveFactor::Kind::const_power:
        return std::exp(arg * std::log(f.base.eval(bindings).real()));
    }
    return 0.0;
}

complex eval_term(const ZetaTerm &t, const std::map<std::string, complex> &z, double T, const Bindings &bindings)
{
    const Bindings b = with_time(bindings, T);
    complex v = t.prefactor.eval(b);
    for (const auto &f : t.factors) {
        v *= eval_factor(f, regulator_value(z, f.regulator), b);
    }
    complex texp = t.t_exponent.offset.to_double();
    for (const auto &[reg, slope] : t.t_exponent.slope) {
        texp += slope.to_double() * regulator_value(z, reg);
    }
    v *= std::exp(texp * std::log(T));
    for (const auto &tok : t.tokens) {
        if (tok.exponent) {
            v *= std::exp(tok.exponent->eval(b));
        }
    }
    return v;
}

complex eval_sum(const ZetaTermSum &s, const std::map<std::string, complex> &z, double T, const Bindings &bindings)
{
    complex v = 0.0;
    for (const auto &t : s.terms()) {
        v += eval_term(t, z, T, bindings);
    }
    return v;
}

Estimate extrapolate_to_zero(const std::vector<double> &x, const std::vector<complex> &y)
{
    if (x.empty() || x.size() != y.size()) {
        throw Error("extrapolation needs matching non-empty samples");
    }
    std::vector<complex> p = y;
    Estimate e{p[0], 0.0};
    // Neville tableau at 0; p[i] holds the interpolant through x[i..i+m].
    for (std::size_t m = 1; m < x.size(); ++m) {
        for (std::size_t i = 0; i + m < x.size(); ++i) {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
        const complex next = p[0];
        e.error = std::abs(next - e.value);
        e.value = next;
    }
    return e;
}

namespace
{

complex first_panel(const std::function<complex(double)> &f, double b)
{
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    const double re = ts.integrate([&](double u) { return f(u).real(); }, 0.0, b);
    const double im = ts.integrate([&](double u) { return f(u).imag(); }, 0.0, b);
    return {re, im};
}

complex panel(const std::function<complex(double)> &f, double a, double b)
{
    using G = boost::math::quadrature::gauss<double, 20>;
    const double re = G::integrate([&](double u) { return f(u).real(); }, a, b);
    const double im = G::integrate([&](double u) { return f(u).imag(); }, a, b);
    return {re, im};
}

/// int_0^inf f with panels about half a local period wide, stopping past
/// `R` once the tail bound |f(a)| * decay(a) is negligible.
complex march(const std::function<complex(double)> &f, const std::function<double(double)> &frequency,
              const std::function<double(double)> &decay, double first, double R)
{
    const auto width = [&](double u) { return pi / std::max(frequency(u), 1e-12); };
    double a = first;
    complex sum = first_panel(f, a);
    while (a < R || std::abs(f(a)) * decay(a) > 1e-17 * std::max(1.0, std::abs(sum))) {
        if (a > 64 * R) {
            throw NonConvergent("damped integrand does not decay");
        }
        const double b = a + width(a);
        sum += panel(f, a, b);
        a = b;
    }
    return sum;
}

} // namespace

Estimate damped_quadrature(const std::function<complex(double)> &f, Damping kind, double s,
                           const DampingOptions &opt)
{
    if (!(s > 0)) {
        throw Error("damping scale must be positive");
    }
    std::vector<double> xs;
    std::vector<complex> ys;
    double eps = opt.eps0;
    for (int k = 0; k < opt.levels; ++k, eps /= 2) {
        const double damp = eps * s;
        double R = 0;
        std::function<complex(double)> g;
        std::function<double(double)> freq, decay;
        if (kind == Damping::linear) {
            R = 30.0 / damp;
            g = [&, damp](double u) { return f(u) * std::exp(-damp * u); };
            freq = [s](double) { return s; };
            decay = [damp](double) { return 1 / damp; };
        } else {
            R = std::sqrt(30.0 / damp);
            g = [&, damp](double u) { return f(u) * std::exp(-damp * u * u); };
            freq = [s](double u) { return 2 * s * u; };
            decay = [damp](double u) { return 1 / (2 * damp * u); };
        }
        xs.push_back(eps);
        ys.push_back(march(g, freq, decay, std::min(kind == Damping::linear ? pi / s : std::sqrt(pi / s), R), R));
    }
    Estimate e = extrapolate_to_zero(xs, ys);
    if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()) ||
        e.error > opt.tolerance * std::max(1.0, std::abs(e.value))) {
        throw NonConvergent("damped integral did not settle (error " + std::to_string(e.error) + ")");
    }
    return e;
}

complex sphere_quadrature(const AngularPoly &a, const Bindings &bindings)
{
    const int N = a.dim();
    if (N == 1) {
        return a.eval({1.0}, bindings) + a.eval({-1.0}, bindings);
    }
    if (N == 2) {
        constexpr int n = 64;
        complex sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double t = 2 * pi * j / n;
            sum += a.eval({std::cos(t), std::sin(t)}, bindings);
        }
        return sum * (2 * pi / n);
    }
    if (N == 3) {
        constexpr int n = 32;
        using G = boost::math::quadrature::gauss<double, 16>;
        const auto ring = [&](double ct, bool imag) {
            const double st = std::sqrt(std::max(0.0, 1 - ct * ct));
            complex sum = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p = 2 * pi * j / n;
                sum += a.eval({st * std::cos(p), st * std::sin(p), ct}, bindings);
            }
            sum *= 2 * pi / n;
            return imag ? sum.imag() : sum.real();
        };
        return {G::integrate([&](double ct) { return ring(ct, false); }, -1.0, 1.0),
                G::integrate([&](double ct) { return ring(ct, true); }, -1.0, 1.0)};
    }
    throw UnsupportedAngular("sphere quadrature supports dimensions 1 to 3");
}

complex integrate(const GaugedTraceIntegrand &g, double z, double T, const Bindings &bindings)
{
    const Bindings b = with_time(bindings, T);
    std::vector<const Axis *> radial;
    for (const auto &a : g.axes) {
        if (a.radial()) {
            radial.push_back(&a);
        }
    }
    complex total = 0.0;
    for (const auto &t : g.terms) {
        complex v = g.measure.eval(b) * t.coeff.eval(b);
        const double scale = t.phase.scale.eval(b).real();
        v *= std::exp(complex(0.0, -T * scale) * t.phase.h0.eval(b));
        for (const auto &tok : t.tokens) {
            if (tok.exponent && !tok.exponent->is_zero()) {
                // h0 enters through the phase itself
                if (tok.id.rfind("exp(-i*T*", 0) != 0) {
                    v *= std::exp(tok.exponent->eval(b));
                }
            }
        }
        for (const auto &tok : g.tokens) {
            if (tok.exponent) {
                v *= std::exp(tok.exponent->eval(b));
            }
        }
        if (radial.empty()) {
            v *= t.angular.eval(std::vector<double>(static_cast<std::size_t>(t.angular.dim()), 0.0), b);
        } else {
            v *= sphere_quadrature(t.angular, b);
            for (std::size_t j = 1; j < radial.size(); ++j) {
                v *= sphere_quadrature(AngularPoly(radial[j]->dimension, ParamPoly(1.0)), b);
            }
        }
        for (const auto &a : g.axes) {
            const double share = g.gauge.at(a.name).share.to_double();
            const int k = t.powers.count(a.name) ? t.powers.at(a.name) : 0;
            const double A = T * scale * t.phase.quadratic(a.name).eval(b).real();
            const double B = T * scale * t.phase.linear(a.name).eval(b).real();
            const double q = share * z + k + (a.radial() ? a.dimension - 1 : 0);
            std::function<complex(double)> f;
            if (a.radial()) {
                f = [=](double u) { return std::pow(u, q) * std::exp(complex(0.0, -(A * u * u + B * u))); };
            } else {
                const double sign = k % 2 ? -1.0 : 1.0;
                f = [=](double u) {
                    return std::pow(u, q) * (std::exp(complex(0.0, -(A * u * u + B * u))) +
                                             sign * std::exp(complex(0.0, -(A * u * u - B * u))));
                };
            }
            const Damping kind = A != 0 ? Damping::gaussian : Damping::linear;
            v *= damped_quadrature(f, kind, A != 0 ? std::abs(A) : std::abs(B)).value;
        }
        total += v;
    }
    return total;
}

Estimate small_z_ratio(const GaugedTraceIntegrand &num, const GaugedTraceIntegrand &den,
                       const std::vector<double> &z_samples, double T, const Bindings &bindings)
{
    if (z_samples.size() < 2) {
        throw NonConvergent("small-z extrapolation needs at least two samples");
    }
    std::vector<complex> ratios;
    for (double z : z_samples) {
        ratios.push_back(integrate(num, z, T, bindings) / integrate(den, z, T, bindings));
    }
    return extrapolate_to_zero(z_samples, ratios);
}

SweepResult finite_T_sweep(const std::function<complex(double)> &f, const std::vector<double> &grid)
{
    if (grid.size() < 4) {
        throw Error("sweep needs at least four points");
    }
    const double rho = grid[1] / grid[0];
    std::vector<complex> v;
    for (double T : grid) {
        v.push_back(f(T));
    }
    std::vector<complex> d;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        d.push_back(v[i + 1] - v[i]);
    }
    SweepResult r;
    const double floor = 1e-13 * std::max(1.0, std::abs(v.back()));
    if (std::abs(d.back()) <= floor) {
        r.limit = v.back();
        r.exponent = -std::numeric_limits<double>::infinity();
        return r;
    }
    std::vector<double> exps;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        if (std::abs(d[i]) > floor) {
            exps.push_back(std::log(std::abs(d[i + 1] / d[i])) / std::log(rho));
        }
    }
    if (exps.empty()) {
        throw NonConvergent("sweep differences vanish irregularly");
    }
    r.exponent = exps.back();
    r.spread = *std::max_element(exps.begin(), exps.end()) - *std::min_element(exps.begin(), exps.end());
    if (r.exponent >= 0) {
        throw DivergenceDetected("finite-T values grow like T^" + std::to_string(r.exponent));
    }
    const double rp = std::pow(rho, r.exponent);
    r.limit = v.back() + d.back() * rp / (1 - rp);
    return r;
}

std::vector<complex> polynomial_roots(const std::vector<complex> &coeffs)
{
    std::vector<complex> c = coeffs;
    while (!c.empty() && std::abs(c.back()) == 0.0) {
        c.pop_back();
    }
    if (c.size() <= 1) {
        return {};
    }
    const std::size_t n = c.size() - 1;
    const complex lead = c.back();
    for (auto &x : c) {
        x /= lead;
    }
    const auto p = [&](complex x) {
        complex s = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) {
            s = s * x + c[i];
        }
        return s;
    };
    const auto dp = [&](complex x) {
        complex s = 0.0;
        for (std::size_t i = c.size(); i-- > 1;) {
            s = s * x + double(i) * c[i];
        }
        return s;
    };
    double radius = 0;
    for (std::size_t i = 0; i < n; ++i) {
        radius = std::max(radius, std::abs(c[i]));
    }
    radius += 1;
    std::vector<complex> r(n);
    const complex seed(0.4, 0.9);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = radius * std::pow(seed, double(i));
    }
    for (int iter = 0; iter < 1000; ++iter) {
        double change = 0;
        for (std::size_t i = 0; i < n; ++i) {
            complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    denom *= r[i] - r[j];
                }
            }
            const complex step = p(r[i]) / denom;
            r[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15 * radius) {
            break;
        }
    }
    for (auto &x : r) {
        for (int iter = 0; iter < 5; ++iter) {
            const complex d = dp(x);
            if (std::abs(d) == 0.0) {
                break;
            }
            x -= p(x) / d;
        }
        if (std::abs(x.imag()) < 1e-12 * (1 + std::abs(x))) {
            x = x.real();
        }
    }
    return r;
}

double second_derivative(const std::function<double(double)> &f, double x, double h)
{
    const auto D = [&](double s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
    return (4 * D(h / 2) - D(h)) / 3;
}

} // namespace zreg::oracle
