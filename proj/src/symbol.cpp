#include <zreg/symbol.hpp>

#include <cmath>
#include <random>

namespace zreg
{

std::string to_string(AxisKind k)
{
    switch (k) {
    case AxisKind::position:
        return "position";
    case AxisKind::momentum:
        return "momentum";
    case AxisKind::field:
        return "field";
    case AxisKind::compact:
        return "compact";
    }
    return {};
}

AxisKind parse_axis_kind(const std::string &s)
{
    for (auto k : {AxisKind::position, AxisKind::momentum, AxisKind::field, AxisKind::compact}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw Error("unknown axis kind: " + s);
}

ParamPoly PhaseDecomposition::quadratic(const std::string &axis) const
{
    auto it = h2.find(axis);
    return it == h2.end() ? ParamPoly() : it->second;
}

ParamPoly PhaseDecomposition::linear(const std::string &axis) const
{
    auto it = h1.find(axis);
    return it == h1.end() ? ParamPoly() : it->second;
}

AxisPoly PhaseDecomposition::assemble() const
{
    AxisPoly p(h0);
    for (const auto &[a, c] : h2) {
        p += AxisPoly::axis(a, 2).scaled(c);
    }
    for (const auto &[a, c] : h1) {
        p += AxisPoly::axis(a, 1).scaled(c);
    }
    return p;
}

PhaseDecomposition decompose_phase(const AxisPoly &sigma, const std::vector<Axis> &axes, const ParamPoly &scale)
{
    std::map<std::string, const Axis *> by_name;
    for (const auto &a : axes) {
        by_name[a.name] = &a;
    }
    PhaseDecomposition d;
    d.scale = scale;
    for (const auto &[m, c] : sigma.terms()) {
        std::string axis;
        int power = 0;
        for (const auto &[name, k] : m) {
            auto it = by_name.find(name);
            if (it == by_name.end()) {
                throw DegenerateCase("phase depends on undeclared axis " + name);
            }
            if (!it->second->integrated()) {
                throw DegenerateCase("phase depends on non-integrated axis " + name);
            }
            if (!axis.empty()) {
                throw DegenerateCase("phase couples axes " + axis + " and " + name);
            }
            axis = name;
            power = k;
        }
        if (axis.empty()) {
            d.h0 += c;
        } else if (power == 1) {
            d.h1[axis] += c;
        } else if (power == 2) {
            d.h2[axis] += c;
        } else {
            throw DegenerateCase("phase has degree " + std::to_string(power) + " in axis " + axis);
        }
    }
    std::erase_if(d.h1, [](const auto &kv) { return kv.second.is_zero(); });
    std::erase_if(d.h2, [](const auto &kv) { return kv.second.is_zero(); });
    for (const auto &a : axes) {
        if (a.integrated() && d.quadratic(a.name).is_zero() && d.linear(a.name).is_zero()) {
            throw DegenerateCase("phase does not oscillate in axis " + a.name);
        }
    }
    return d;
}

std::vector<complex> exp_asymptotic(const std::vector<complex> &a, complex s, int M)
{
    if (a.empty() || a[0] == complex(0.0)) {
        throw ZeroLeadingCoefficient("leading amplitude coefficient vanishes");
    }
    std::vector<complex> out(static_cast<std::size_t>(M) + 1, 0.0);
    std::size_t p = 1;
    while (p < a.size() && a[p] == complex(0.0)) {
        ++p;
    }
    if (p >= a.size()) {
        out[0] = 1.0;
    } else {
        const std::vector<complex> shifted(a.begin() + static_cast<std::ptrdiff_t>(p), a.end());
        complex weight = 1.0; // s^k / k!
        for (int k = 0; static_cast<int>(p) * k <= M; ++k) {
            const int offset = static_cast<int>(p) * k;
            const auto powk = power_series_pow(shifted, k, M - offset);
            for (int j = 0; j + offset <= M; ++j) {
                out[static_cast<std::size_t>(j + offset)] += weight * powk[static_cast<std::size_t>(j)];
            }
            weight *= s / double(k + 1);
        }
    }
    const complex lead = std::exp(s * a[0]);
    for (auto &c : out) {
        c *= lead;
    }
    return out;
}

AngularMatrix identity_matrix(int n, int angular_dim)
{
    AngularMatrix m(static_cast<std::size_t>(n), std::vector<AngularPoly>(static_cast<std::size_t>(n), AngularPoly(angular_dim)));
    for (int i = 0; i < n; ++i) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = AngularPoly(angular_dim, ParamPoly(1.0));
    }
    return m;
}

AngularMatrix matmul(const AngularMatrix &a, const AngularMatrix &b)
{
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw ShapeMismatch("matrix sizes " + std::to_string(n) + " and " + std::to_string(b.size()));
    }
    const int dim = n ? a[0][0].dim() : 1;
    AngularMatrix r(n, std::vector<AngularPoly>(n, AngularPoly(dim)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                r[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return r;
}

AngularPoly trace(const AngularMatrix &m)
{
    AngularPoly t(m.empty() ? 1 : m[0][0].dim());
    for (std::size_t i = 0; i < m.size(); ++i) {
        t += m[i][i];
    }
    return t;
}

namespace
{

AngularMatrix combine(const AngularMatrix &a, const AngularMatrix &b, double sa, double sb)
{
    AngularMatrix r = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            r[i][j] = a[i][j].scaled(ParamPoly(sa)) + b[i][j].scaled(ParamPoly(sb));
        }
    }
    return r;
}

} // namespace

void MatrixSymbol::validate() const
{
    if (static_cast<int>(K.size()) != n) {
        throw ShapeMismatch("involution has " + std::to_string(K.size()) + " rows, expected " + std::to_string(n));
    }
    for (const auto &row : K) {
        if (static_cast<int>(row.size()) != n) {
            throw ShapeMismatch("involution is not square");
        }
    }
    const AngularMatrix sq = matmul(K, K);
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    for (int sample = 0; sample < 5; ++sample) {
        std::vector<double> dir(static_cast<std::size_t>(angular_dim));
        double norm = 0;
        for (auto &x : dir) {
            x = normal(rng);
            norm += x * x;
        }
        for (auto &x : dir) {
            x /= std::sqrt(norm);
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const complex v = sq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(dir, {});
                if (std::abs(v - complex(i == j ? 1.0 : 0.0)) > 1e-9) {
                    throw NotInvolution("K^2 differs from the identity at entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
                }
            }
        }
    }
}

std::vector<std::pair<AxisPoly, AngularMatrix>> MatrixSymbol::as_terms() const
{
    return {{b, identity_matrix(n, angular_dim)}, {c, K}};
}

std::vector<EvolutionBranch> involution_exp(const MatrixSymbol &m)
{
    m.validate();
    const AngularMatrix id = identity_matrix(m.n, m.angular_dim);
    if (m.c.is_zero()) {
        return {{m.b, id}};
    }
    return {{m.b - m.c, combine(id, m.K, 0.5, -0.5)}, {m.b + m.c, combine(id, m.K, 0.5, 0.5)}};
}

Observable Observable::scalar_value(const AxisPoly &p)
{
    Observable o;
    o.scalar = true;
    o.terms.push_back({p, {}});
    return o;
}

Observable Observable::matrix(std::vector<std::pair<AxisPoly, AngularMatrix>> terms)
{
    Observable o;
    o.scalar = false;
    o.terms = std::move(terms);
    return o;
}

std::vector<TraceTerm> compose_observable(const std::vector<EvolutionBranch> &evolution, const Observable &obs)
{
    std::vector<TraceTerm> out;
    for (const auto &branch : evolution) {
        for (const auto &[coeff, mat] : obs.terms) {
            if (coeff.is_zero()) {
                continue;
            }
            AngularPoly angular;
            if (obs.scalar) {
                angular = trace(branch.matrix);
            } else {
                if (mat.size() != branch.matrix.size()) {
                    throw ShapeMismatch("observable is " + std::to_string(mat.size()) + "x" +
                                        std::to_string(mat.size()) + ", evolution is " +
                                        std::to_string(branch.matrix.size()) + "x" +
                                        std::to_string(branch.matrix.size()));
                }
                angular = trace(matmul(branch.matrix, mat));
            }
            if (!angular.is_zero()) {
                out.push_back({branch.phase, coeff, angular});
            }
        }
    }
    return out;
}

} // namespace zreg
