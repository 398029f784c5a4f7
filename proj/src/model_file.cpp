#include <zreg/model_file.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace zreg
{

namespace
{

std::string trim(const std::string &s, std::size_t *lead = nullptr)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        if (lead) {
            *lead = s.size();
        }
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    if (lead) {
        *lead = b;
    }
    return s.substr(b, e - b + 1);
}

bool is_identifier(const std::string &s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string format_number(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

struct Line {
    int number;
    std::string text;   // trimmed
    int column;         // 1-based column of text[0]
};

struct KeyValue {
    std::string key;
    std::string value;
    int line;
    int value_column;
};

KeyValue split_key(const Line &l)
{
    const auto eq = l.text.find('=');
    if (eq == std::string::npos) {
        throw ParseError(l.number, l.column, "expected 'name = value'");
    }
    KeyValue kv;
    kv.key = trim(l.text.substr(0, eq));
    if (!is_identifier(kv.key)) {
        throw ParseError(l.number, l.column, "invalid name '" + kv.key + "'");
    }
    std::size_t lead = 0;
    kv.value = trim(l.text.substr(eq + 1), &lead);
    kv.line = l.number;
    kv.value_column = l.column + static_cast<int>(eq + 1 + lead);
    if (kv.value.empty()) {
        throw ParseError(l.number, kv.value_column, "missing value for '" + kv.key + "'");
    }
    return kv;
}

std::vector<std::string> split_commas(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        out.push_back(trim(part));
    }
    return out;
}

const std::vector<std::string> section_names{"model", "params", "axes", "phase", "observable", "expect"};

} // namespace

ModelSpec parse_model(const std::string &text, const std::string &fallback_name)
{
    std::map<std::string, std::vector<Line>> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    bool any = false;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::size_t lead = 0;
        const std::string t = trim(raw, &lead);
        if (t.empty()) {
            continue;
        }
        const int column = static_cast<int>(lead) + 1;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ParseError(number, column, "unterminated section header");
            }
            current = trim(t.substr(1, t.size() - 2));
            if (std::find(section_names.begin(), section_names.end(), current) == section_names.end()) {
                throw ParseError(number, column + 1, "unknown section '" + current + "'");
            }
            if (sections.count(current)) {
                throw ParseError(number, column, "duplicate section '" + current + "'");
            }
            sections[current];
            any = true;
            continue;
        }
        if (current.empty()) {
            throw ParseError(number, column, "content before the first section");
        }
        sections[current].push_back({number, t, column});
    }
    if (!any) {
        throw ParseError(std::max(number, 1), 1, "empty model definition");
    }
    for (const char *required : {"axes", "phase", "observable"}) {
        if (!sections.count(required)) {
            throw ParseError(number + 1, 1, std::string("missing section [") + required + "]");
        }
    }

    ModelSpec m;
    m.name = fallback_name;
    std::set<std::string> names;
    const auto declare = [&](const KeyValue &kv) {
        if (!names.insert(kv.key).second || kv.key == "i" || kv.key == "pi" || kv.key == time_symbol) {
            throw ParseError(kv.line, kv.value_column, "name '" + kv.key + "' is already defined");
        }
    };

    for (const auto &l : sections["params"]) {
        const KeyValue kv = split_key(l);
        declare(kv);
        Param p{kv.key, true, std::nullopt};
        if (kv.value != "positive") {
            double v = 0;
            auto [end, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
            if (ec != std::errc() || end != kv.value.data() + kv.value.size()) {
                throw ParseError(kv.line, kv.value_column, "expected 'positive' or a number");
            }
            p.positive = v > 0;
            p.numeric_default = v;
        }
        m.params.push_back(p);
    }
    for (const auto &l : sections["axes"]) {
        const KeyValue kv = split_key(l);
        declare(kv);
        const auto parts = split_commas(kv.value);
        Axis a;
        a.name = kv.key;
        try {
            a.kind = parse_axis_kind(parts[0]);
        } catch (const Error &) {
            throw ParseError(kv.line, kv.value_column, "unknown axis kind '" + parts[0] + "'");
        }
        if (parts.size() > 1) {
            if (!is_identifier(parts[1])) {
                throw ParseError(kv.line, kv.value_column, "invalid gauge group '" + parts[1] + "'");
            }
            a.group = parts[1];
        }
        if (parts.size() > 2) {
            int d = 0;
            auto [end, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), d);
            if (ec != std::errc() || end != parts[2].data() + parts[2].size() || d < 1) {
                throw ParseError(kv.line, kv.value_column, "dimension must be a positive integer");
            }
            a.dimension = d;
        }
        if (parts.size() > 3) {
            throw ParseError(kv.line, kv.value_column, "expected 'kind, group[, dimension]'");
        }
        if (a.integrated() && a.group.empty()) {
            throw ParseError(kv.line, kv.value_column, "integrated axis '" + a.name + "' needs a gauge group");
        }
        if (a.kind == AxisKind::field) {
            m.field = a.name;
        }
        m.axes.push_back(a);
    }
    const ExprContext ctx = m.context();
    for (const auto &l : sections["model"]) {
        const KeyValue kv = split_key(l);
        if (kv.key == "name") {
            if (!is_identifier(kv.value)) {
                throw ParseError(kv.line, kv.value_column, "invalid model name");
            }
            m.name = kv.value;
        } else if (kv.key == "description") {
            m.description = kv.value;
        } else if (kv.key == "scale" || kv.key == "measure") {
            const AxisPoly p = parse_expression(kv.value, ctx, kv.line, kv.value_column);
            if (!p.is_param()) {
                throw ParseError(kv.line, kv.value_column, kv.key + " may not depend on an axis");
            }
            (kv.key == "scale" ? m.phase_scale : m.measure) = p.as_param();
        } else if (kv.key == "order") {
            m.regulator_order = split_commas(kv.value);
        } else {
            throw ParseError(kv.line, l.column, "unknown key '" + kv.key + "'");
        }
    }
    const auto &phase = sections["phase"];
    if (phase.empty()) {
        throw ParseError(number + 1, 1, "empty [phase] section");
    }
    for (const auto &l : phase) {
        m.hamiltonian += parse_expression(l.text, ctx, l.number, l.column);
    }
    std::set<std::string> observable_names;
    for (const auto &l : sections["observable"]) {
        const KeyValue kv = split_key(l);
        if (!observable_names.insert(kv.key).second) {
            throw ParseError(kv.line, l.column, "duplicate observable '" + kv.key + "'");
        }
        m.observables.push_back(
            {kv.key, Observable::scalar_value(parse_expression(kv.value, ctx, kv.line, kv.value_column)), std::nullopt});
    }
    if (m.observables.empty()) {
        throw ParseError(number + 1, 1, "no observable declared");
    }
    for (const auto &l : sections["expect"]) {
        const KeyValue kv = split_key(l);
        auto it = std::find_if(m.observables.begin(), m.observables.end(),
                               [&](const NamedObservable &o) { return o.name == kv.key; });
        if (it == m.observables.end()) {
            throw ParseError(kv.line, l.column, "expectation for unknown observable '" + kv.key + "'");
        }
        const AxisPoly p = parse_expression(kv.value, ctx, kv.line, kv.value_column);
        if (!p.is_param()) {
            throw ParseError(kv.line, kv.value_column, "expected value may not depend on an axis");
        }
        it->expected = p.as_param();
    }

    try {
        decompose_phase(m.hamiltonian, m.axes, m.phase_scale);
    } catch (const DegenerateCase &e) {
        throw ValidationError(e.what());
    }
    for (const auto &reg : m.regulator_order) {
        if (std::none_of(m.axes.begin(), m.axes.end(), [&](const Axis &a) { return a.group == reg; })) {
            throw ValidationError("regulator order names unknown group " + reg);
        }
    }
    for (const auto &a : m.axes) {
        if (a.integrated() && !m.regulator_order.empty() &&
            std::find(m.regulator_order.begin(), m.regulator_order.end(), a.group) == m.regulator_order.end()) {
            throw ValidationError("axis " + a.name + " is not covered by the regulator order");
        }
    }
    return m;
}

ModelSpec parse_model_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f) {
        throw Error("cannot open " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    std::string stem = path.substr(path.find_last_of('/') + 1);
    stem = stem.substr(0, stem.find('.'));
    return parse_model(ss.str(), is_identifier(stem) ? stem : "custom");
}

std::string render_model(const ModelSpec &m)
{
    if (m.matrix || !m.tokens.empty() || !m.derived.empty()) {
        throw Error("model " + m.name + " has no file representation");
    }
    std::ostringstream out;
    out << "[model]\nname = " << m.name << "\n";
    if (!m.description.empty()) {
        out << "description = " << m.description << "\n";
    }
    if (!m.phase_scale.approx_equal(ParamPoly(1.0))) {
        out << "scale = " << m.phase_scale.render(RenderStyle::source) << "\n";
    }
    if (!m.measure.approx_equal(ParamPoly(1.0))) {
        out << "measure = " << m.measure.render(RenderStyle::source) << "\n";
    }
    if (!m.regulator_order.empty()) {
        out << "order = ";
        for (std::size_t j = 0; j < m.regulator_order.size(); ++j) {
            out << (j ? ", " : "") << m.regulator_order[j];
        }
        out << "\n";
    }
    if (!m.params.empty()) {
        out << "\n[params]\n";
        for (const auto &p : m.params) {
            out << p.name << " = " << (p.numeric_default ? format_number(*p.numeric_default) : "positive") << "\n";
        }
    }
    out << "\n[axes]\n";
    for (const auto &a : m.axes) {
        out << a.name << " = " << to_string(a.kind);
        if (!a.group.empty()) {
            out << ", " << a.group;
            if (a.radial()) {
                out << ", " << a.dimension;
            }
        }
        out << "\n";
    }
    out << "\n[phase]\n" << m.hamiltonian.render(RenderStyle::source) << "\n";
    out << "\n[observable]\n";
    for (const auto &o : m.observables) {
        if (!o.observable.scalar || o.observable.terms.size() != 1) {
            throw Error("observable " + o.name + " has no file representation");
        }
        out << o.name << " = " << o.observable.terms.front().first.render(RenderStyle::source) << "\n";
    }
    const bool any_expected =
        std::any_of(m.observables.begin(), m.observables.end(), [](const NamedObservable &o) { return o.expected.has_value(); });
    if (any_expected) {
        out << "\n[expect]\n";
        for (const auto &o : m.observables) {
            if (o.expected) {
                out << o.name << " = " << o.expected->render(RenderStyle::source) << "\n";
            }
        }
    }
    return out.str();
}

} // namespace zreg
