#include <zreg/model_file.hpp>
#include <zreg/models.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace zreg;
using json = nlohmann::ordered_json;

namespace
{

struct RunFlags {
    std::vector<std::string> params;
    std::string branch = "paper";
    int series_order = default_series_order;
    std::string emit = "text";
    bool trace = false;
    bool numeric = false;
    int dim = 0;
};

void add_run_flags(CLI::App *cmd, RunFlags &f)
{
    cmd->add_option("--param", f.params, "parameter binding k=v")->take_all();
    cmd->add_option("--branch", f.branch, "branch policy")->check(CLI::IsMember({"paper", "principal"}));
    cmd->add_option("--series-order", f.series_order, "Laurent truncation order")->check(CLI::Range(1, max_series_order));
    cmd->add_option("--emit", f.emit, "output format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_flag("--trace", f.trace, "print the derivation steps");
    cmd->add_flag("--numeric", f.numeric, "numeric evaluation at the bindings");
}

RunOptions options(const RunFlags &f)
{
    RunOptions o;
    o.policy = parse_branch(f.branch);
    o.series_order = f.series_order;
    o.numeric = f.numeric;
    for (const auto &p : f.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) {
            throw ParseError(1, 1, "expected k=v, got '" + p + "'");
        }
        try {
            o.bindings[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
        } catch (const std::exception &) {
            throw ParseError(1, static_cast<int>(eq) + 2, "not a number: '" + p.substr(eq + 1) + "'");
        }
    }
    return o;
}

double round12(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json number(complex c)
{
    if (std::abs(c.imag()) <= 1e-12 * std::max(1.0, std::abs(c.real()))) {
        return round12(c.real());
    }
    return json{{"re", round12(c.real())}, {"im", round12(c.imag())}};
}

std::string decimal(complex c)
{
    char buf[80];
    if (std::abs(c.imag()) <= 1e-12 * std::max(1.0, std::abs(c.real()))) {
        std::snprintf(buf, sizeof buf, "%.12g", c.real());
    } else {
        std::snprintf(buf, sizeof buf, "%.12g%+.12gi", c.real(), c.imag());
    }
    return buf;
}

std::string join(const std::vector<ParamPoly> &v, RenderStyle style)
{
    std::string s;
    for (const auto &p : v) {
        s += (s.empty() ? "" : ", ") + p.render(style);
    }
    return "{" + s + "}";
}

std::string rendered_value(const Outcome &o, RenderStyle style)
{
    if (!o.values.empty() || !o.expected_values.empty()) {
        return join(o.values, style);
    }
    return o.value.render(style);
}

json outcome_json(const ModelRun &run, const Outcome &o, bool trace)
{
    json j;
    j["model"] = run.model;
    j["observable"] = o.quantity;
    if (o.divergent) {
        j["value"] = nullptr;
        j["diagnostic"] = o.diagnostic;
    } else {
        j["value"] = rendered_value(o, RenderStyle::canonical);
    }
    if (!o.numeric_values.empty()) {
        json a = json::array();
        for (double x : o.numeric_values) {
            a.push_back(round12(x));
        }
        j["numeric_value"] = a;
    } else if (o.numeric_value) {
        j["numeric_value"] = number(*o.numeric_value);
    }
    j["branch"] = to_string(run.policy);
    j["series_order"] = run.series_order;
    if (trace) {
        json steps = json::array();
        for (const auto &s : o.trace) {
            steps.push_back(json{{"stage", s.stage}, {"detail", s.detail}});
        }
        j["trace"] = steps;
    }
    return j;
}

void print_text(const ModelSpec &model, const ModelRun &run, bool trace)
{
    for (const auto &o : run.outcomes) {
        const bool observable = std::any_of(model.observables.begin(), model.observables.end(),
                                            [&](const NamedObservable &n) { return n.name == o.quantity; });
        const std::string label = observable ? "⟨" + o.quantity + "⟩" : o.quantity;
        if (o.divergent) {
            std::cout << label << " diverges: " << o.diagnostic << "\n";
        } else {
            std::cout << label << " = " << rendered_value(o, RenderStyle::pretty) << "\n";
        }
        if (!o.numeric_values.empty()) {
            std::cout << "  numeric:";
            for (double x : o.numeric_values) {
                std::cout << " " << decimal(x);
            }
            std::cout << "\n";
        } else if (o.numeric_value && !o.divergent) {
            std::cout << "  numeric: " << decimal(*o.numeric_value) << "\n";
        }
        if (trace) {
            for (const auto &s : o.trace) {
                std::cout << "  [" << s.stage << "] " << s.detail << "\n";
            }
        }
    }
    std::cout << "branch: " << to_string(run.policy) << ", series order " << run.series_order << "\n";
}

int emit_run(const ModelSpec &model, const RunFlags &f)
{
    const ModelRun run = run_model(model, options(f));
    if (f.emit == "json") {
        for (const auto &o : run.outcomes) {
            std::cout << outcome_json(run, o, f.trace).dump() << "\n";
        }
    } else {
        print_text(model, run, f.trace);
    }
    const bool divergent = std::any_of(run.outcomes.begin(), run.outcomes.end(), [](const Outcome &o) { return o.divergent; });
    return divergent ? 1 : 0;
}

ModelSpec with_dimension(const std::string &name, int dim)
{
    if (dim == 0) {
        return Registry().find(name);
    }
    if (name == "harmonic_oscillator_nd") {
        return harmonic_oscillator_nd(dim);
    }
    if (name == "dirac_fermion") {
        return dirac_fermion(dim);
    }
    throw Error("--dim applies to harmonic_oscillator_nd and dirac_fermion only");
}

Registry registry_with(const std::vector<std::string> &files, const std::string &dir)
{
    Registry r;
    std::vector<std::string> paths = files;
    if (!dir.empty()) {
        std::vector<std::string> found;
        for (const auto &e : std::filesystem::directory_iterator(dir)) {
            if (e.is_regular_file() && e.path().extension() == ".model") {
                found.push_back(e.path().string());
            }
        }
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    }
    for (const auto &p : paths) {
        r.add(parse_model_file(p));
    }
    return r;
}

AngularPoly angular_from(const std::string &text, int N)
{
    ExprContext ctx;
    for (int j = 1; j <= N; ++j) {
        ctx.axes.insert("n" + std::to_string(j));
    }
    const AxisPoly p = parse_expression(text, ctx);
    AngularPoly a(N);
    for (const auto &[m, c] : p.terms()) {
        std::vector<int> e(static_cast<std::size_t>(N), 0);
        for (const auto &[name, k] : m) {
            e[static_cast<std::size_t>(std::stoi(name.substr(1)) - 1)] = k;
        }
        a.add_term(e, c);
    }
    return a;
}

Rational rational_from(const json &j)
{
    if (j.is_number_integer()) {
        return Rational(j.get<std::int64_t>());
    }
    if (j.is_number()) {
        if (auto r = recognize_rational(j.get<double>())) {
            return *r;
        }
        throw ParseError(1, 1, "degree is not a simple rational");
    }
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        return Rational(std::stoll(s));
    }
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

int kv_trace(const std::string &path, const std::string &emit)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ParseError(1, static_cast<int>(e.byte), e.what());
    }
    KVAmplitudeSpec spec;
    try {
        spec.N = j.value("N", 1);
        spec.theta = j.value("theta", 0.0);
        ExprContext none;
        spec.volume = parse_expression(j.value("volume", std::string("1")), none).as_param();
        spec.amplitude.remainder_integral = parse_expression(j.value("remainder", std::string("0")), none).as_param();
        for (const auto &t : j.value("terms", json::array())) {
            PolyhomTerm term;
            term.degree = rational_from(t.at("degree"));
            term.log_order = t.value("log_order", 0);
            term.angular = angular_from(t.value("angular", std::string("1")), spec.N);
            spec.amplitude.terms.push_back(term);
        }
    } catch (const json::exception &e) {
        throw ParseError(1, 1, e.what());
    }
    const ParamPoly v = kv_trace_at_zero(spec);
    if (emit == "json") {
        json out;
        out["value"] = v.render();
        try {
            out["numeric_value"] = number(v.eval({}));
        } catch (const Error &) {
        }
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "trace at zero = " << v.render(RenderStyle::pretty) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"zeta-regularized expectation values"};
    app.require_subcommand(1);

    RunFlags run_flags;
    std::string model_name;
    auto *run = app.add_subcommand("run", "evaluate a bundled model");
    run->add_option("model", model_name, "model name")->required();
    run->add_option("--dim", run_flags.dim, "spatial dimension of harmonic_oscillator_nd or dirac_fermion");
    add_run_flags(run, run_flags);

    std::string check_branch = "paper";
    std::vector<std::string> check_files;
    std::string custom_dir;
    auto *check = app.add_subcommand("check", "run every model against its expected values");
    check->add_option("--branch", check_branch, "branch policy")->check(CLI::IsMember({"paper", "principal"}));
    check->add_option("--model", check_files, "additional model file")->check(CLI::ExistingFile);
    check->add_option("--custom-dir", custom_dir, "directory of *.model files")->check(CLI::ExistingDirectory);

    auto *list = app.add_subcommand("list", "list the registered models");
    list->add_option("--model", check_files, "additional model file")->check(CLI::ExistingFile);
    list->add_option("--custom-dir", custom_dir, "directory of *.model files")->check(CLI::ExistingDirectory);

    std::string kv_file, kv_emit = "text";
    auto *kv = app.add_subcommand("kv-trace", "trace at zero of a polyhomogeneous amplitude (JSON file)");
    kv->add_option("file", kv_file)->required()->check(CLI::ExistingFile);
    kv->add_option("--emit", kv_emit)->check(CLI::IsMember({"text", "json"}));

    std::string model_file;
    RunFlags file_flags;
    auto *model = app.add_subcommand("model", "evaluate a model definition file");
    model->add_option("file", model_file)->required()->check(CLI::ExistingFile);
    add_run_flags(model, file_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            return emit_run(with_dimension(model_name, run_flags.dim), run_flags);
        }
        if (*model) {
            return emit_run(parse_model_file(model_file), file_flags);
        }
        if (*list) {
            const auto entries = registry_with(check_files, custom_dir).list();
            for (const auto &e : entries) {
                std::cout << e.name << "  " << e.description << "\n";
                for (const auto &[q, v] : e.expected) {
                    std::cout << "    " << q << " = " << v << "\n";
                }
            }
            std::cout << entries.size() << " models\n";
            return 0;
        }
        if (*kv) {
            return kv_trace(kv_file, kv_emit);
        }
        if (*check) {
            const Registry reg = registry_with(check_files, custom_dir);
            RunOptions opt;
            opt.policy = parse_branch(check_branch);
            int passed = 0;
            for (const auto &m : reg.models()) {
                std::string status = "PASS", detail;
                try {
                    const ModelRun r = run_model(m, opt);
                    for (const auto &o : r.outcomes) {
                        detail += (detail.empty() ? "" : "; ") + o.quantity + " = " +
                                  (o.divergent ? "divergent" : rendered_value(o, RenderStyle::canonical));
                        if (!o.pass) {
                            status = "FAIL";
                        }
                    }
                } catch (const Error &e) {
                    status = "FAIL";
                    detail = e.what();
                }
                passed += status == "PASS";
                std::printf("%-24s %s  %s\n", m.name.c_str(), status.c_str(), detail.c_str());
            }
            const int total = static_cast<int>(reg.models().size());
            std::printf("%d/%d models passing (branch %s)\n", passed, total, check_branch.c_str());
            return passed == total ? 0 : 1;
        }
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
