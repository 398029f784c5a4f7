#include <zreg/models.hpp>
#include <zreg/oracle.hpp>

#include <algorithm>
#include <random>

namespace zreg
{

namespace
{

AxisPoly expr(const ModelSpec &m, const std::string &text)
{
    return parse_expression(text, m.context());
}

ParamPoly param_expr(const ModelSpec &m, const std::string &text)
{
    return expr(m, text).as_param();
}

Param positive(const std::string &name, double value = 1.0)
{
    return {name, true, value};
}

AngularPoly constant(int dim, complex c)
{
    return AngularPoly(dim, ParamPoly(c));
}

AngularPoly n(int dim, int j, complex c = 1.0)
{
    return AngularPoly::component(dim, j).scaled(ParamPoly(c));
}

/// K = [[0, s], [s, 0]] for a 2x2 block s.
AngularMatrix off_diagonal(const AngularMatrix &s)
{
    const std::size_t k = s.size();
    const int dim = s[0][0].dim();
    AngularMatrix out(2 * k, std::vector<AngularPoly>(2 * k, AngularPoly(dim)));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            out[i][k + j] = s[i][j];
            out[k + i][j] = s[i][j];
        }
    }
    return out;
}

ModelSpec matrix_model(ModelSpec m, MatrixSymbol sym)
{
    sym.validate();
    m.hamiltonian = sym.b + sym.c;
    m.observables.push_back({"H_m", Observable::matrix(sym.as_terms()), param_expr(m, "m")});
    m.matrix = std::move(sym);
    return m;
}

} // namespace

ModelSpec harmonic_oscillator_1d()
{
    ModelSpec m;
    m.name = "harmonic_oscillator_1d";
    m.description = "harmonic oscillator, gauge |xi|^z1 |x|^z2";
    m.params = {positive("m"), positive("hbar"), positive("omega")};
    m.axes = {{"x", AxisKind::position, "z2"}, {"xi", AxisKind::momentum, "z1"}};
    m.regulator_order = {"z1", "z2"};
    m.phase_scale = param_expr(m, "1/hbar");
    m.measure = param_expr(m, "1/(2*pi)");
    m.hamiltonian = expr(m, "m*omega^2*x^2/2 + hbar^2*xi^2/(2*m) + hbar*omega/2");
    m.observables.push_back({"H", Observable::scalar_value(m.hamiltonian), param_expr(m, "hbar*omega/2")});
    return m;
}

ModelSpec harmonic_oscillator_nd(int N, bool grouped)
{
    if (N < 1) {
        throw Error("dimension must be positive");
    }
    ModelSpec m;
    m.name = "harmonic_oscillator_nd";
    m.description = "N-dimensional harmonic oscillator (N = " + std::to_string(N) + ")" +
                    (grouped ? ", gauge |xi_1...xi_N|^(z1/N) |x_1...x_N|^(z2/N)" : ", one regulator per axis");
    m.params = {positive("m"), positive("hbar"), positive("omega")};
    std::vector<std::string> momenta, positions;
    for (int j = 1; j <= N; ++j) {
        const std::string s = std::to_string(j);
        const std::string gx = grouped ? "z2" : "zx" + s;
        const std::string gxi = grouped ? "z1" : "zxi" + s;
        m.axes.push_back({"x" + s, AxisKind::position, gx});
        m.axes.push_back({"xi" + s, AxisKind::momentum, gxi});
        positions.push_back(gx);
        momenta.push_back(gxi);
    }
    if (grouped) {
        m.regulator_order = {"z1", "z2"};
    } else {
        m.regulator_order = momenta;
        m.regulator_order.insert(m.regulator_order.end(), positions.begin(), positions.end());
    }
    m.phase_scale = param_expr(m, "1/hbar");
    m.measure = param_expr(m, "1/(2*pi)").pow(Rational(N));
    for (int j = 1; j <= N; ++j) {
        const std::string s = std::to_string(j);
        m.hamiltonian += expr(m, "m*omega^2*x" + s + "^2/2 + hbar^2*xi" + s + "^2/(2*m) + hbar*omega/2");
    }
    m.observables.push_back(
        {"H", Observable::scalar_value(m.hamiltonian), param_expr(m, "hbar*omega/2").scaled(double(N))});
    return m;
}

ModelSpec topological_oscillator()
{
    ModelSpec m;
    m.name = "topological_oscillator";
    m.description = "quantum rotor: topological susceptibility and energy gap";
    m.params = {positive("J")};
    m.axes = {{"xi", AxisKind::momentum, "z"}};
    m.hamiltonian = expr(m, "xi^2/(2*J)");
    m.observables.push_back({"chi_top", Observable::scalar_value(expr(m, "(T*xi/(2*pi*J))^2/(-i*T)")),
                             param_expr(m, "1/(4*pi^2*J)")});
    m.derived.push_back({"Delta_E", "chi_top", param_expr(m, "2*pi^2"), param_expr(m, "1/(2*J)")});
    return m;
}

ModelSpec schwinger_free()
{
    ModelSpec m;
    m.name = "schwinger_free";
    m.description = "free massive Schwinger model on a space torus";
    m.params = {positive("m")};
    m.axes = {{"x", AxisKind::compact, ""}, {"xi", AxisKind::momentum, "z"}};
    m.measure = param_expr(m, "1/(2*pi)");
    MatrixSymbol sym;
    sym.n = 2;
    sym.angular_dim = 1;
    sym.b = expr(m, "m");
    sym.c = expr(m, "xi");
    sym.K = off_diagonal({{constant(1, 1.0)}});
    return matrix_model(std::move(m), std::move(sym));
}

ModelSpec dirac_fermion(int N)
{
    if (N < 1 || N > 3) {
        throw Error("dirac_fermion supports N = 1, 2, 3");
    }
    ModelSpec m;
    m.name = "dirac_fermion";
    m.description = "free relativistic fermion in " + std::to_string(N) + " spatial dimension" + (N > 1 ? "s" : "");
    m.params = {positive("m")};
    m.axes = {{"r", AxisKind::momentum, "z", N}};
    m.measure = param_expr(m, "1/(2*pi)").pow(Rational(N));
    MatrixSymbol sym;
    sym.angular_dim = N;
    sym.b = expr(m, "m");
    sym.c = expr(m, "r");
    if (N == 1) {
        sym.n = 2;
        sym.K = off_diagonal({{n(1, 0)}});
    } else if (N == 2) {
        sym.n = 2;
        sym.K = {{AngularPoly(2), n(2, 0) + n(2, 1, {0.0, -1.0})}, {n(2, 0) + n(2, 1, {0.0, 1.0}), AngularPoly(2)}};
    } else {
        sym.n = 4;
        const AngularMatrix sn{{n(3, 2), n(3, 0) + n(3, 1, {0.0, -1.0})},
                               {n(3, 0) + n(3, 1, {0.0, 1.0}), n(3, 2, -1.0)}};
        sym.K = off_diagonal(sn);
    }
    return matrix_model(std::move(m), std::move(sym));
}

ModelSpec schwinger_boson_mass()
{
    ModelSpec m;
    m.name = "schwinger_boson_mass";
    m.description = "gauge boson mass in the massive Schwinger model";
    m.params = {positive("e"), positive("m")};
    m.axes = {{"x", AxisKind::compact, ""}, {"E", AxisKind::momentum, "z"}};
    m.tokens = {{"int DA", std::nullopt}, {"(e^(iT*xi)e^(-ie*int A) + c.c.)", std::nullopt}};
    m.hamiltonian = expr(m, "E^2/2 + m");
    m.observables.push_back({"m_g^2", Observable::scalar_value(expr(m, "E^2 + e^2/pi")), param_expr(m, "e^2/pi")});
    return m;
}

ModelSpec phi4()
{
    ModelSpec m;
    m.name = "phi4";
    m.description = "phi^4 effective potential, minima and mass";
    m.params = {positive("mu"), positive("lambda", 6.0), positive("X")};
    m.axes = {{"p", AxisKind::momentum, "z"}, {"phi", AxisKind::field, ""}};
    m.field = "phi";
    m.phase_scale = param_expr(m, "X");
    m.measure = param_expr(m, "1/(2*pi)");
    m.hamiltonian = expr(m, "p^2/2 - mu^2*phi^2/2 + lambda*phi^4/24");
    const ParamPoly vev = param_expr(m, "6^(1/2)*lambda^(-1/2)*mu");
    m.expected_critical_points = {ParamPoly(), vev, -vev};
    m.expected_minima = {vev, -vev};
    m.expected_mass = param_expr(m, "2^(1/2)*mu");
    return m;
}

// ---------------------------------------------------------------------------

bool matches_expected(const ParamPoly &value, const ParamPoly &expected, const std::vector<Param> &params)
{
    if (value.render() == expected.render() && value.approx_equal(expected, 1e-12)) {
        return true;
    }
    std::set<std::string> names;
    for (const auto &p : {value, expected}) {
        for (const auto &s : p.symbols()) {
            if (s != "pi") {
                names.insert(s);
            }
        }
    }
    std::mt19937 rng(20240607);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    std::uniform_real_distribution<double> any(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        Bindings b;
        for (const auto &s : names) {
            const std::string base = log_symbol_base(s);
            if (!base.empty()) {
                continue;
            }
            auto it = std::find_if(params.begin(), params.end(), [&](const Param &p) { return p.name == s; });
            b[s] = (it == params.end() || it->positive) ? pos(rng) : any(rng);
        }
        for (const auto &s : names) {
            const std::string base = log_symbol_base(s);
            if (!base.empty() && b.count(base)) {
                b[s] = std::log(b[base]);
            }
        }
        complex v, e;
        try {
            v = value.eval(b);
            e = expected.eval(b);
        } catch (const Error &) {
            return false;
        }
        if (std::abs(v - e) > 1e-9 * std::max({std::abs(v), std::abs(e), 1e-300})) {
            return false;
        }
    }
    return true;
}

bool ModelRun::passed() const
{
    return std::all_of(outcomes.begin(), outcomes.end(), [](const Outcome &o) { return o.pass; });
}

namespace
{

std::optional<complex> try_eval(const ParamPoly &p, const Bindings &b)
{
    try {
        return p.eval(b);
    } catch (const Error &) {
        return std::nullopt;
    }
}

bool same_set(const std::vector<ParamPoly> &values, const std::vector<ParamPoly> &expected,
              const std::vector<Param> &params)
{
    if (values.size() != expected.size()) {
        return false;
    }
    std::vector<bool> used(values.size(), false);
    for (const auto &e : expected) {
        bool found = false;
        for (std::size_t j = 0; j < values.size() && !found; ++j) {
            if (!used[j] && matches_expected(values[j], e, params)) {
                used[j] = found = true;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

void run_potential(const ModelSpec &model, const RunOptions &opt, const Bindings &bindings, ModelRun &run)
{
    std::vector<Param> params = model.params;
    params.push_back({model.field, false, std::nullopt});
    Outcome cps, minima, mass;
    cps.quantity = "critical_points";
    minima.quantity = "minima";
    mass.quantity = "mass";
    EffectivePotential ep;
    try {
        ep = effective_potential(model, opt.policy, opt.series_order);
    } catch (const Error &e) {
        for (Outcome *o : {&cps, &minima, &mass}) {
            o->divergent = true;
            o->diagnostic = e.what();
            o->pass = false;
            run.outcomes.push_back(*o);
        }
        return;
    }
    for (const auto &cp : ep.critical_points) {
        cps.values.push_back(cp.location);
    }
    cps.expected_values = model.expected_critical_points;
    cps.trace = ep.trace;
    minima.values = ep.minima;
    minima.expected_values = model.expected_minima;
    mass.values = ep.masses;
    if (ep.masses.size() == 1) {
        mass.value = ep.masses.front();
    }
    if (model.expected_mass) {
        mass.expected = model.expected_mass;
        mass.expected_values = {*model.expected_mass};
    }
    cps.pass = cps.expected_values.empty() || same_set(cps.values, cps.expected_values, params);
    minima.pass = minima.expected_values.empty() || same_set(minima.values, minima.expected_values, params);
    mass.pass = mass.expected_values.empty() || same_set(mass.values, mass.expected_values, params);
    if (opt.numeric) {
        const NumericPotential np = solve_potential_numeric(ep.potential, model.field, bindings);
        cps.numeric_values = np.critical_points;
        minima.numeric_values = np.minima;
        mass.numeric_values = np.masses;
        // The numeric fallback must reproduce the symbolic solution.
        const auto agree = [&](const std::vector<double> &num, const std::vector<ParamPoly> &sym) {
            if (num.size() != sym.size()) {
                return false;
            }
            for (const auto &s : sym) {
                const auto v = try_eval(s, bindings);
                if (!v || std::none_of(num.begin(), num.end(), [&](double x) {
                        return std::abs(x - v->real()) <= 1e-9 * std::max(1.0, std::abs(x));
                    })) {
                    return false;
                }
            }
            return true;
        };
        cps.pass = cps.pass && agree(np.critical_points, cps.values);
        minima.pass = minima.pass && agree(np.minima, minima.values);
        mass.pass = mass.pass && agree(np.masses, mass.values);
    }
    run.outcomes.push_back(cps);
    run.outcomes.push_back(minima);
    run.outcomes.push_back(mass);
}

} // namespace

ModelRun run_model(const ModelSpec &model, const RunOptions &opt)
{
    ModelRun run;
    run.model = model.name;
    run.policy = opt.policy;
    run.series_order = opt.series_order;
    Bindings bindings = model.default_bindings();
    for (const auto &[k, v] : opt.bindings) {
        bindings[k] = v;
    }
    if (!model.field.empty()) {
        run_potential(model, opt, bindings, run);
    }
    for (const auto &obs : model.observables) {
        Outcome o;
        o.quantity = obs.name;
        o.expected = obs.expected;
        const ExpectationResult r = expectation(model, obs, opt.policy, opt.series_order);
        o.trace = r.trace;
        if (r.divergent) {
            o.divergent = true;
            o.diagnostic = r.diagnostic;
            o.pass = false;
        } else {
            o.value = r.value;
            o.numeric_value = try_eval(r.value, bindings);
            o.pass = !o.expected || matches_expected(o.value, *o.expected, model.params);
        }
        run.outcomes.push_back(std::move(o));
    }
    for (const auto &d : model.derived) {
        auto src = std::find_if(run.outcomes.begin(), run.outcomes.end(),
                                [&](const Outcome &o) { return o.quantity == d.source; });
        if (src == run.outcomes.end()) {
            throw Error("derived quantity " + d.name + " refers to unknown " + d.source);
        }
        Outcome o;
        o.quantity = d.name;
        o.expected = d.expected;
        if (src->divergent) {
            o.divergent = true;
            o.diagnostic = src->diagnostic;
            o.pass = false;
        } else {
            o.value = d.factor * src->value;
            o.numeric_value = try_eval(o.value, bindings);
            o.trace = {{"derived", d.name + " = " + d.factor.render() + " * " + d.source}};
            o.pass = !o.expected || matches_expected(o.value, *o.expected, model.params);
        }
        run.outcomes.push_back(std::move(o));
    }
    return run;
}

// ---------------------------------------------------------------------------

Registry::Registry()
{
    models_ = {harmonic_oscillator_1d(), harmonic_oscillator_nd(3), topological_oscillator(), schwinger_free(),
               dirac_fermion(3),         schwinger_boson_mass(),    phi4()};
}

void Registry::add(ModelSpec m)
{
    auto it = std::find_if(models_.begin(), models_.end(), [&](const ModelSpec &x) { return x.name == m.name; });
    if (it != models_.end()) {
        *it = std::move(m);
    } else {
        models_.push_back(std::move(m));
    }
}

const ModelSpec &Registry::find(const std::string &name) const
{
    auto it = std::find_if(models_.begin(), models_.end(), [&](const ModelSpec &x) { return x.name == name; });
    if (it == models_.end()) {
        throw UnknownModel("unknown model: " + name);
    }
    return *it;
}

std::vector<RegistryEntry> Registry::list() const
{
    std::vector<RegistryEntry> out;
    for (const auto &m : models_) {
        RegistryEntry e{m.name, m.description, {}};
        for (const auto &o : m.observables) {
            if (o.expected) {
                e.expected.emplace_back(o.name, o.expected->render());
            }
        }
        for (const auto &d : m.derived) {
            if (d.expected) {
                e.expected.emplace_back(d.name, d.expected->render());
            }
        }
        const auto join = [](const std::vector<ParamPoly> &v) {
            std::string s;
            for (const auto &p : v) {
                s += (s.empty() ? "" : ", ") + p.render();
            }
            return "{" + s + "}";
        };
        if (!m.expected_critical_points.empty()) {
            e.expected.emplace_back("critical_points", join(m.expected_critical_points));
        }
        if (!m.expected_minima.empty()) {
            e.expected.emplace_back("minima", join(m.expected_minima));
        }
        if (m.expected_mass) {
            e.expected.emplace_back("mass", m.expected_mass->render());
        }
        out.push_back(std::move(e));
    }
    return out;
}

ModelRun run_model(const std::string &name, const RunOptions &opt, const Registry &registry)
{
    return run_model(registry.find(name), opt);
}

} // namespace zreg
