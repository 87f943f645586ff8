#include "twh/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "twh/error.hpp"

namespace twh {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

cplx parse_pair(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw InputError(key + ": expected [re, im]");
    const cplx z(v[0].get<double>(), v[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError(key + ": non-finite value");
    return z;
}

std::vector<Root> parse_roots(const json& v, const std::string& key) {
    if (!v.is_array()) throw InputError(key + ": expected a list of [re, im] pairs");
    std::vector<Root> out;
    for (const auto& e : v) out.push_back(Root{parse_pair(e, key)});
    return out;
}

json parse_value(const std::string& key, const std::string& raw) {
    if (raw == "auto" || raw == "C1" || raw == "C2") return raw;
    try {
        return json::parse(raw);
    } catch (const json::parse_error&) {
        // bare words such as preset names
        if (!raw.empty() && raw.find_first_of("[]{},\"") == std::string::npos) return raw;
        throw InputError("malformed value for " + key + ": " + raw);
    }
}

}  // namespace

SingularSymbol parse_symbol_spec(const std::string& text) {
    SingularSymbol s;
    std::vector<Root> zeros, poles;
    bool have_roots = false, auto_scale = true;
    cplx scale = 1.0;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const json v = parse_value(key, trim(line.substr(eq + 1)));

        if (key == "preset") {
            if (!v.is_string()) throw InputError("preset: expected a name");
            s = preset_symbol(v.get<std::string>());
            zeros = s.tau.zeros();
            poles = s.tau.poles();
            scale = s.tau.scale();
            auto_scale = false;
            have_roots = true;
        } else if (key == "p") {
            if (!v.is_number()) throw InputError("p: expected a number");
            s.p = v.get<double>();
        } else if (key == "zeros") {
            zeros = parse_roots(v, key);
            have_roots = true;
        } else if (key == "poles") {
            poles = parse_roots(v, key);
            have_roots = true;
        } else if (key == "scale") {
            auto_scale = v.is_string() && v.get<std::string>() == "auto";
            if (!auto_scale) scale = parse_pair(v, key);
        } else if (key == "contour") {
            const std::string c = v.is_string() ? v.get<std::string>() : "";
            if (c != "C1" && c != "C2") throw InputError("contour: expected C1 or C2");
            s.contour = c == "C1" ? Contour::C1 : Contour::C2;
        } else if (key == "regular") {
            if (!v.is_boolean()) throw InputError("regular: expected true or false");
            s.regular = v.get<bool>();
        } else {
            throw InputError("unknown key: " + key);
        }
    }
    if (!have_roots) throw InputError("symbol spec needs poles or a preset");

    try {
        s.tau = RationalFunction(zeros, poles, scale);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    if (s.regular) s.p = 0.0;
    if (auto_scale) s = normalized(s);
    const auto d = validate_symbol(s);
    if (!d.passed) throw InputError(d.failure);
    return s;
}

SingularSymbol load_symbol(const std::string& name_or_path) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return preset_symbol(name_or_path);
    std::ifstream f(name_or_path);
    if (!f) throw InputError("cannot read symbol spec: " + name_or_path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_symbol_spec(buf.str());
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Root& r) {
    json j = to_json(r.z);
    if (r.on_axis() && r.side != Side::none) return json{{"z", j}, {"side", r.side == Side::above ? "+0i" : "-0i"}};
    return j;
}

json to_json(const RationalFunction& r) {
    json zs = json::array(), ps = json::array();
    for (const auto& z : r.zeros()) zs.push_back(to_json(z));
    for (const auto& w : r.poles()) ps.push_back(to_json(w));
    return json{{"zeros", zs}, {"poles", ps}, {"scale", to_json(r.scale())}};
}

json to_json(const SingularSymbol& s) {
    return json{{"p", s.p},
                {"regular", s.regular},
                {"contour", s.contour == Contour::C1 ? "C1" : "C2"},
                {"tau", to_json(s.tau)},
                {"original_scale", to_json(s.original_scale)}};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace twh
