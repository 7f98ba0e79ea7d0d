#include "dnls/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "dnls/stationary.hpp"

namespace dnls {

using nlohmann::json;

namespace {

std::string join(const std::set<std::string>& keys) {
    std::string out;
    for (const auto& k : keys) out += (out.empty() ? "" : ", ") + k;
    return out;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError("'" + path + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            const std::string where = path.empty() ? key : path + "." + key;
            throw ConfigError("unknown key '" + where + "' (valid keys: " + join(allowed) + ")");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("'" + path + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("'" + path + key + "' must be finite");
    return d;
}

double get_positive(const json& obj, const std::string& key, const std::string& path, double fallback) {
    const double d = get_number(obj, key, path, fallback);
    if (!(d > 0.0)) throw ConfigError("'" + path + key + "' must be positive");
    return d;
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError("'" + path + key + "' must be a string");
    return v.get<std::string>();
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& path,
                      std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ConfigError("'" + path + key + "' must be a positive integer");
    return v.get<std::size_t>();
}

cplx get_complex(const json& obj, const std::string& key, const std::string& path, cplx fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("'" + path + key + "' must be a number or [re, im]");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// "family(a, b, c)" shorthand for the initial condition.
json parse_ic_shorthand(const std::string& s) {
    const auto open = s.find('(');
    const auto close = s.rfind(')');
    std::string family = s.substr(0, open);
    std::vector<double> args;
    if (open != std::string::npos) {
        if (close == std::string::npos || close < open)
            throw ConfigError("malformed initial condition '" + s + "'");
        std::stringstream ss(s.substr(open + 1, close - open - 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                args.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("non-numeric argument '" + item + "' in initial condition '" + s + "'");
            }
        }
    }
    static const std::vector<std::pair<std::string, std::vector<std::string>>> names = {
        {"constant", {"value"}},
        {"plane_wave", {"amplitude", "wavenumber"}},
        {"gaussian_bump", {"amplitude", "width", "center", "q0"}},
        {"kink", {"B", "theta0"}},
    };
    for (const auto& [name, params] : names) {
        if (name != family) continue;
        if (args.size() > params.size())
            throw ConfigError("too many arguments for initial condition '" + family + "'");
        json ic = {{"type", family}};
        for (std::size_t i = 0; i < args.size(); ++i) ic[params[i]] = args[i];
        return ic;
    }
    throw ConfigError("unknown initial condition family '" + family +
                      "' (expected constant, plane_wave, gaussian_bump, kink)");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed number '" + s + "' in " + path.string());
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

RunConfig config_from_json(const json& doc) {
    check_keys(doc, "", {"grid", "background", "ic", "scheme", "dt", "T", "stride", "tol",
                         "blowup_threshold", "seed", "output_dir"});
    RunConfig cfg;

    if (!doc.contains("grid")) throw ConfigError("missing required key 'grid'");
    const json& grid = doc.at("grid");
    check_keys(grid, "grid", {"L", "N"});
    cfg.grid.L = get_positive(grid, "L", "grid.", cfg.grid.L);
    cfg.grid.N = get_count(grid, "N", "grid.", cfg.grid.N);
    if ((cfg.grid.N & (cfg.grid.N - 1)) != 0)
        throw ConfigError("'grid.N' must be a power of two, got " + std::to_string(cfg.grid.N));

    if (!doc.contains("ic")) throw ConfigError("missing required key 'ic'");
    json ic = doc.at("ic");
    if (ic.is_string()) ic = parse_ic_shorthand(ic.get<std::string>());
    check_keys(ic, "ic", {"type", "value", "amplitude", "wavenumber", "q0", "width", "center", "B",
                          "theta0"});
    InitialCondition& c = cfg.ic;
    c.family = get_string(ic, "type", "ic.", "");
    if (c.family == "constant") {
        c.value = get_number(ic, "value", "ic.", c.value);
    } else if (c.family == "plane_wave") {
        c.amplitude = get_number(ic, "amplitude", "ic.", 0.5);
        c.wavenumber = get_number(ic, "wavenumber", "ic.", c.wavenumber);
    } else if (c.family == "gaussian_bump") {
        c.amplitude = get_number(ic, "amplitude", "ic.", 0.1);
        c.width = get_positive(ic, "width", "ic.", c.width);
        c.center = get_number(ic, "center", "ic.", c.center);
        c.q0 = get_number(ic, "q0", "ic.", c.q0);
    } else if (c.family == "kink") {
        c.B = get_positive(ic, "B", "ic.", c.B);
        c.theta0 = get_number(ic, "theta0", "ic.", c.theta0);
    } else {
        throw ConfigError("'ic.type' must be one of constant, plane_wave, gaussian_bump, kink");
    }

    if (doc.contains("background")) {
        const json& bg = doc.at("background");
        check_keys(bg, "background", {"type", "q0", "left", "right", "width", "B", "theta0"});
        BackgroundConfig& b = cfg.background;
        b.type = get_string(bg, "type", "background.", "");
        if (b.type == "constant") {
            b.q0 = get_number(bg, "q0", "background.", 0.0);
        } else if (b.type == "kink_limits") {
            b.left = get_complex(bg, "left", "background.", {-1.0, 0.0});
            b.right = get_complex(bg, "right", "background.", {1.0, 0.0});
            b.width = get_positive(bg, "width", "background.", 1.0);
        } else if (b.type == "kink") {
            b.B = get_positive(bg, "B", "background.", 1.0);
            b.theta0 = get_number(bg, "theta0", "background.", 0.0);
        } else {
            throw ConfigError("'background.type' must be one of constant, kink_limits, kink");
        }
    }

    if (doc.contains("scheme")) {
        if (!doc.at("scheme").is_string()) throw ConfigError("'scheme' must be a string");
        cfg.scheme = scheme_from_string(doc.at("scheme").get<std::string>());
    }
    cfg.dt = get_positive(doc, "dt", "", cfg.dt);
    if (!doc.contains("T")) throw ConfigError("missing required key 'T'");
    cfg.T = get_number(doc, "T", "", cfg.T);
    if (std::abs(cfg.T) / cfg.dt > 1e8) throw ConfigError("|T|/dt exceeds 1e8 steps");
    cfg.stride = get_count(doc, "stride", "", cfg.stride);
    cfg.tol = get_positive(doc, "tol", "", cfg.tol);
    cfg.blowup_threshold = get_positive(doc, "blowup_threshold", "", cfg.blowup_threshold);
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    cfg.output_dir = get_string(doc, "output_dir", "", cfg.output_dir);
    return cfg;
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override '" + std::string(assignment) + "' is not KEY=VALUE");
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        json& next = (*node)[parts[i]];
        if (next.is_string() && parts[i] == "ic") next = parse_ic_shorthand(next.get<std::string>());
        if (next.is_null()) next = json::object();
        if (!next.is_object())
            throw ConfigError("override path '" + key + "' crosses a non-object at '" + parts[i] + "'");
        node = &next;
    }
    (*node)[parts.back()] = value;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << is.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": not valid JSON: " + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return config_from_json(doc);
}

json to_json(const RunConfig& cfg) {
    json ic = {{"type", cfg.ic.family}};
    if (cfg.ic.family == "constant") {
        ic["value"] = cfg.ic.value;
    } else if (cfg.ic.family == "plane_wave") {
        ic["amplitude"] = cfg.ic.amplitude;
        ic["wavenumber"] = cfg.ic.wavenumber;
    } else if (cfg.ic.family == "gaussian_bump") {
        ic["amplitude"] = cfg.ic.amplitude;
        ic["width"] = cfg.ic.width;
        ic["center"] = cfg.ic.center;
        ic["q0"] = cfg.ic.q0;
    } else {
        ic["B"] = cfg.ic.B;
        ic["theta0"] = cfg.ic.theta0;
    }
    json doc = {
        {"grid", {{"L", cfg.grid.L}, {"N", cfg.grid.N}}},
        {"ic", ic},
        {"scheme", std::string(to_string(cfg.scheme))},
        {"dt", cfg.dt},
        {"T", cfg.T},
        {"stride", cfg.stride},
        {"tol", cfg.tol},
        {"blowup_threshold", cfg.blowup_threshold},
        {"seed", cfg.seed},
        {"output_dir", cfg.output_dir},
    };
    const BackgroundConfig& b = cfg.background;
    if (b.type == "constant") doc["background"] = {{"type", "constant"}, {"q0", b.q0}};
    if (b.type == "kink_limits")
        doc["background"] = {{"type", "kink_limits"}, {"left", complex_json(b.left)},
                             {"right", complex_json(b.right)}, {"width", b.width}};
    if (b.type == "kink")
        doc["background"] = {{"type", "kink"}, {"B", b.B}, {"theta0", b.theta0}};
    return doc;
}

Grid build_grid(const RunConfig& cfg) { return make_grid(cfg.grid.L, cfg.grid.N); }

FieldState build_initial_state(const RunConfig& cfg, const Grid& g) {
    const InitialCondition& ic = cfg.ic;
    const BackgroundConfig& bc = cfg.background;

    std::optional<BackgroundProfile> bg;
    if (bc.type == "constant") bg = BackgroundProfile::constant(bc.q0, g);
    if (bc.type == "kink_limits") bg = BackgroundProfile::kink_limits(bc.left, bc.right, bc.width, g);
    if (bc.type == "kink") bg = kink_background(KinkParams(bc.B, bc.theta0), g);

    // Target total field u0(x), with a default background per family.
    std::function<cplx(std::size_t)> u0;
    if (ic.family == "constant") {
        if (!bg) bg = BackgroundProfile::constant(ic.value, g);
        u0 = [&](std::size_t) { return cplx(ic.value, 0.0); };
    } else if (ic.family == "plane_wave") {
        if (!bg) bg = BackgroundProfile::constant(0.0, g);
        u0 = [&](std::size_t j) { return std::polar(ic.amplitude, ic.wavenumber * g.x(j)); };
    } else if (ic.family == "gaussian_bump") {
        if (!bg) bg = BackgroundProfile::constant(ic.q0, g);
        const cplx level = bg->is_constant() ? bg->constant_value() : cplx(ic.q0, 0.0);
        // Over a non-constant background the bump is added to the background itself.
        const bool over_bg = !bg->is_constant();
        u0 = [&, level, over_bg](std::size_t j) {
            const double s = (g.x(j) - ic.center) / ic.width;
            const cplx base = over_bg ? bg->values()[j] : level;
            return base + ic.amplitude * std::exp(-s * s);
        };
    } else {
        auto kink = kink_background(KinkParams(ic.B, ic.theta0), g);
        if (!bg) bg = kink;
        const ComplexField vals = kink.values();
        u0 = [vals](std::size_t j) { return vals[j]; };
    }

    ComplexField pert(g.size());
    const auto& b = bg->values();
    for (std::size_t j = 0; j < g.size(); ++j) pert[j] = u0(j) - b[j];
    return make_state(std::move(*bg), std::move(pert), 0.0);
}

void write_snapshot(const FieldState& s, const Grid& g, const std::filesystem::path& path) {
    const ComplexField u = total_field(s);
    std::string out = "x,re_u,im_u,re_pert,im_pert\n";
    for (std::size_t j = 0; j < g.size(); ++j) {
        out += format_number(g.x(j)) + ',' + format_number(u[j].real()) + ',' +
               format_number(u[j].imag()) + ',' + format_number(s.perturbation[j].real()) + ',' +
               format_number(s.perturbation[j].imag()) + '\n';
    }
    write_text(path, out);
}

SnapshotTable read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    if (line != "x,re_u,im_u,re_pert,im_pert")
        throw std::runtime_error("unexpected snapshot header in " + path.string());
    SnapshotTable t;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 5) throw std::runtime_error("malformed snapshot row in " + path.string());
        t.x.push_back(parse_double(cols[0], path));
        t.u.emplace_back(parse_double(cols[1], path), parse_double(cols[2], path));
        t.perturbation.emplace_back(parse_double(cols[3], path), parse_double(cols[4], path));
    }
    return t;
}

void write_series(const SeriesTable& table, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + table.columns[i];
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("series row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
        out += '\n';
    }
    write_text(path, out);
}

SeriesTable read_series(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    SeriesTable t;
    std::string line;
    std::getline(is, line);
    t.columns = split_csv(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& c : split_csv(line)) row.push_back(parse_double(c, path));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_sidecar(const RunConfig& cfg, const Grid& g, const std::filesystem::path& path,
                   const json& extra) {
    json doc = {
        {"config", to_json(cfg)},
        {"code_version", std::string(kCodeVersion)},
        {"grid", {{"L", g.half_length()}, {"N", g.size()}, {"dx", g.dx()}}},
    };
    if (!extra.empty()) doc["extra"] = extra;
    write_text(path, doc.dump(2) + '\n');
}

}  // namespace dnls
