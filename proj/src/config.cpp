#include "sllbar/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sllbar {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"grid", {"dim", "lengths", "modes", "pad_factor"}},
        {"params", {"beta1", "beta2", "beta3", "beta4", "beta5"}},
        {"truncation", {"mode", "radius"}},
        {"noise", {"family", "modes", "sigmas", "directions", "entries", "c_h_bound", "tail_estimate"}},
        {"solver",
         {"dt", "t_end", "scheme", "blowup_K", "record_every", "seed", "noise_substeps", "snapshots"}},
        {"initial", {"kind", "constant", "modes", "file"}},
        {"experiment",
         {"paths", "observables", "burn_in", "windows", "tightness_R", "moment_powers",
          "transition_times", "dt_halvings", "refinement_modes", "identity_samples"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

class Raw {
public:
    Raw(const std::string& text, const std::string& origin) : origin_(origin) {
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(lineno, "malformed section header");
                section = trim(std::string_view(t).substr(1, t.size() - 2));
                if (!allowed_keys().count(section)) fail(lineno, "unknown section [" + section + "]");
                if (!seen_sections_.insert(section).second)
                    fail(lineno, "duplicate section [" + section + "]");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
            if (section.empty()) fail(lineno, "key outside of a [section]");
            const std::string key = trim(std::string_view(t).substr(0, eq));
            const std::string value = trim(std::string_view(t).substr(eq + 1));
            if (key.empty()) fail(lineno, "empty key");
            if (!allowed_keys().at(section).count(key))
                fail(lineno, "unknown key '" + key + "' in [" + section + "]");
            auto& sec = entries_[section];
            if (sec.count(key)) fail(lineno, "duplicate key '" + section + "." + key + "'");
            sec[key] = Entry{value, lineno};
        }
    }

    const Entry* find(const std::string& section, const std::string& key) const {
        auto s = entries_.find(section);
        if (s == entries_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + msg);
    }

private:
    std::string origin_;
    std::set<std::string> seen_sections_;
    std::map<std::string, std::map<std::string, Entry>> entries_;
};

struct Reader {
    const Raw& raw;
    std::string section;

    const Entry* get(const std::string& key) const { return raw.find(section, key); }

    const Entry& need(const std::string& key) const {
        const Entry* e = get(key);
        if (!e) throw ConfigError(section + "." + key + ": required key is missing");
        return *e;
    }

    [[noreturn]] void bad(const Entry& e, const std::string& key, const std::string& why) const {
        raw.fail(e.line, section + "." + key + ": " + why);
    }

    double to_double(const Entry& e, const std::string& key, const std::string& s) const {
        const std::string t = trim(s);
        if (t == "pi") return M_PI;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
            bad(e, key, "expected a number, got '" + t + "'");
        return v;
    }

    long long to_int(const Entry& e, const std::string& key, const std::string& s) const {
        const std::string t = trim(s);
        long long v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
            bad(e, key, "expected an integer, got '" + t + "'");
        return v;
    }

    double number(const std::string& key, double fallback) const {
        const Entry* e = get(key);
        return e ? to_double(*e, key, e->value) : fallback;
    }
    double number(const std::string& key) const {
        const Entry& e = need(key);
        return to_double(e, key, e.value);
    }
    long long integer(const std::string& key, long long fallback) const {
        const Entry* e = get(key);
        return e ? to_int(*e, key, e->value) : fallback;
    }
    long long integer(const std::string& key) const {
        const Entry& e = need(key);
        return to_int(e, key, e.value);
    }
    std::string word(const std::string& key, const std::string& fallback) const {
        const Entry* e = get(key);
        return e ? e->value : fallback;
    }
    bool boolean(const std::string& key, bool fallback) const {
        const Entry* e = get(key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
        if (e->value == "false" || e->value == "no" || e->value == "0") return false;
        bad(*e, key, "expected true or false");
    }
    std::vector<double> numbers(const Entry& e, const std::string& key, const std::string& s) const {
        std::vector<double> out;
        for (const auto& item : split(s, ',')) out.push_back(to_double(e, key, item));
        return out;
    }
    Vec3 vec3(const Entry& e, const std::string& key, const std::string& s) const {
        const auto v = numbers(e, key, s);
        if (v.size() != 3) bad(e, key, "expected three components, got '" + s + "'");
        return {v[0], v[1], v[2]};
    }
    MultiIndex mode(const Entry& e, const std::string& key, const std::string& s, int dim) const {
        const auto parts = split(s, ':');
        if (static_cast<int>(parts.size()) != dim)
            bad(e, key, "mode '" + s + "' needs " + std::to_string(dim) + " index(es) separated by ':'");
        MultiIndex k{0, 0, 0};
        for (int i = 0; i < dim; ++i) {
            const long long v = to_int(e, key, parts[i]);
            if (v < 0) bad(e, key, "negative mode index");
            k[i] = static_cast<int>(v);
        }
        return k;
    }
};

GridSpec read_grid(const Raw& raw) {
    Reader r{raw, "grid"};
    GridSpec g;
    g.dim = static_cast<int>(r.integer("dim"));
    if (g.dim < 1 || g.dim > 3) r.bad(r.need("dim"), "dim", "must be 1, 2 or 3");
    const Entry& le = r.need("lengths");
    const auto lengths = r.numbers(le, "lengths", le.value);
    const Entry& me = r.need("modes");
    std::vector<long long> modes;
    for (const auto& s : split(me.value, ',')) modes.push_back(r.to_int(me, "modes", s));
    auto broadcast = [&](auto& v, const Entry& e, const std::string& key) {
        if (v.size() == 1) v.resize(g.dim, v[0]);
        if (static_cast<int>(v.size()) != g.dim)
            r.bad(e, key, "expected one value per axis (dim = " + std::to_string(g.dim) + ")");
    };
    auto lv = lengths;
    broadcast(lv, le, "lengths");
    broadcast(modes, me, "modes");
    for (int i = 0; i < g.dim; ++i) {
        if (!(lv[i] > 0.0)) r.bad(le, "lengths", "must be positive");
        if (modes[i] < 1) r.bad(me, "modes", "must be >= 1");
        g.lengths[i] = lv[i];
        g.modes[i] = static_cast<int>(modes[i]);
    }
    g.pad_factor = r.number("pad_factor", 2.0);
    if (!(g.pad_factor >= 1.0)) r.bad(*r.get("pad_factor"), "pad_factor", "must be >= 1");
    return g;
}

ModelParams read_params(const Raw& raw) {
    Reader r{raw, "params"};
    ModelParams p;
    p.beta1 = r.number("beta1");
    p.beta2 = r.number("beta2");
    p.beta3 = r.number("beta3");
    p.beta4 = r.number("beta4");
    p.beta5 = r.number("beta5");
    return p;
}

TruncationConfig read_truncation(const Raw& raw) {
    Reader r{raw, "truncation"};
    TruncationConfig t;
    const std::string mode = r.word("mode", "off");
    if (mode == "on") {
        t.mode = TruncationMode::on;
        if (!r.get("radius"))
            throw ConfigError("truncation.radius: required when truncation.mode = on");
        t.radius = r.number("radius");
    } else if (mode == "off") {
        t.mode = TruncationMode::off;
        t.radius = r.number("radius", 0.0);
    } else {
        r.bad(*r.get("mode"), "mode", "expected on or off");
    }
    return t;
}

NoiseDescriptor read_noise(const Raw& raw, int dim) {
    Reader r{raw, "noise"};
    NoiseDescriptor d;
    const std::string family = r.word("family", "none");
    if (family == "none") {
        d.family = NoiseFamily::none;
    } else if (family == "eigenmodes") {
        d.family = NoiseFamily::eigenmodes;
        const Entry& me = r.need("modes");
        const Entry& se = r.need("sigmas");
        const auto sig = r.numbers(se, "sigmas", se.value);
        const auto modes = split(me.value, ';');
        if (sig.size() != modes.size())
            r.bad(se, "sigmas", "needs one value per entry of noise.modes");
        std::vector<Vec3> dirs;
        if (const Entry* de = r.get("directions")) {
            for (const auto& s : split(de->value, ';')) dirs.push_back(r.vec3(*de, "directions", s));
            if (dirs.size() == 1) dirs.resize(modes.size(), dirs[0]);
            if (dirs.size() != modes.size())
                r.bad(*de, "directions", "needs one vector or one per entry of noise.modes");
        } else {
            dirs.assign(modes.size(), Vec3{0.0, 0.0, 1.0});
        }
        for (std::size_t j = 0; j < modes.size(); ++j)
            d.modes.push_back({r.mode(me, "modes", modes[j], dim), sig[j], dirs[j]});
    } else if (family == "explicit") {
        d.family = NoiseFamily::explicit_coefficients;
        const Entry& ee = r.need("entries");
        for (const auto& item : split(ee.value, ';')) {
            const auto arrow = item.find("->");
            const auto at = item.find('@');
            if (arrow == std::string::npos || at == std::string::npos || at > arrow)
                r.bad(ee, "entries", "expected 'j@mode -> cx,cy,cz', got '" + item + "'");
            NoiseCoefficient c;
            c.j = static_cast<int>(r.to_int(ee, "entries", item.substr(0, at)));
            c.mode = r.mode(ee, "entries", trim(item.substr(at + 1, arrow - at - 1)), dim);
            c.value = r.vec3(ee, "entries", item.substr(arrow + 2));
            d.coefficients.push_back(c);
        }
    } else {
        r.bad(*r.get("family"), "family", "expected none, eigenmodes or explicit");
    }
    if (r.get("c_h_bound")) d.c_h_bound = r.number("c_h_bound");
    if (r.get("tail_estimate")) d.tail_estimate = r.number("tail_estimate");
    return d;
}

SolverConfig read_solver(const Raw& raw) {
    Reader r{raw, "solver"};
    SolverConfig s;
    s.dt = r.number("dt");
    s.t_end = r.number("t_end");
    const std::string scheme = r.word("scheme", "imex_em_ito");
    if (scheme == "imex_em_ito")
        s.scheme = Scheme::imex_em_ito;
    else if (scheme == "heun_strat")
        s.scheme = Scheme::heun_strat;
    else
        r.bad(*r.get("scheme"), "scheme", "expected imex_em_ito or heun_strat");
    s.blowup_K = r.number("blowup_K", 1e6);
    s.record_every = static_cast<int>(r.integer("record_every", 1));
    const long long seed = r.integer("seed", 0);
    if (seed < 0) r.bad(*r.get("seed"), "seed", "must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
    const long long sub = r.integer("noise_substeps", 1);
    if (sub < 1) r.bad(*r.get("noise_substeps"), "noise_substeps", "must be >= 1");
    s.noise_substeps = static_cast<std::uint64_t>(sub);
    s.keep_snapshots = r.boolean("snapshots", false);
    return s;
}

InitialData read_initial(const Raw& raw, int dim) {
    Reader r{raw, "initial"};
    InitialData d;
    const std::string kind = r.word("kind", "constant");
    if (kind == "constant")
        d.kind = InitialKind::constant;
    else if (kind == "modes")
        d.kind = InitialKind::modes;
    else if (kind == "snapshot")
        d.kind = InitialKind::snapshot;
    else
        r.bad(*r.get("kind"), "kind", "expected constant, modes or snapshot");
    if (const Entry* e = r.get("constant")) d.constant = r.vec3(*e, "constant", e->value);
    if (const Entry* e = r.get("modes")) {
        for (const auto& item : split(e->value, ';')) {
            const auto arrow = item.find("->");
            if (arrow == std::string::npos)
                r.bad(*e, "modes", "expected 'mode -> ax,ay,az', got '" + item + "'");
            d.modes.push_back({r.mode(*e, "modes", trim(item.substr(0, arrow)), dim),
                               r.vec3(*e, "modes", item.substr(arrow + 2))});
        }
    }
    d.file = r.word("file", "");
    if (d.kind == InitialKind::snapshot && d.file.empty())
        throw ConfigError("initial.file: required when initial.kind = snapshot");
    return d;
}

Observable parse_observable(const Reader& r, const Entry& e, const std::string& s, int dim) {
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        r.bad(e, "observables", "expected name(args), got '" + s + "'");
    const std::string name = trim(s.substr(0, open));
    const auto args = split(s.substr(open + 1, s.size() - open - 2), ',');
    Observable o;
    if (name == "tanh_mode") {
        if (args.size() != 3) r.bad(e, "observables", "tanh_mode(mode, component, scale)");
        o.kind = Observable::Kind::tanh_mode;
        o.mode = r.mode(e, "observables", args[0], dim);
        o.component = static_cast<int>(r.to_int(e, "observables", args[1]));
        o.scale = r.to_double(e, "observables", args[2]);
    } else if (name == "exp_neg_l2") {
        if (args.size() != 1) r.bad(e, "observables", "exp_neg_l2(scale)");
        o.kind = Observable::Kind::exp_neg_l2;
        o.scale = r.to_double(e, "observables", args[0]);
    } else if (name == "clip_norm") {
        if (args.size() != 2) r.bad(e, "observables", "clip_norm(space, cap)");
        o.kind = Observable::Kind::clip_norm;
        try {
            o.space = norm_kind_from_string(args[0]);
        } catch (const ConfigError& err) {
            r.bad(e, "observables", err.what());
        }
        o.cap = r.to_double(e, "observables", args[1]);
    } else {
        r.bad(e, "observables", "unknown observable '" + name + "'");
    }
    try {
        o.validate();
    } catch (const ConfigError& err) {
        r.bad(e, "observables", err.what());
    }
    return o;
}

ExperimentConfig read_experiment(const Raw& raw, int dim, double t_end) {
    Reader r{raw, "experiment"};
    ExperimentConfig x;
    x.paths = static_cast<int>(r.integer("paths", 1));
    if (const Entry* e = r.get("observables")) {
        for (const auto& s : split(e->value, ';')) x.observables.push_back(parse_observable(r, *e, s, dim));
    } else {
        Observable a;
        a.kind = Observable::Kind::exp_neg_l2;
        a.scale = 1.0;
        Observable b;
        b.kind = Observable::Kind::clip_norm;
        b.space = NormKind::h1;
        b.cap = 10.0;
        x.observables = {a, b};
    }
    x.burn_in = r.number("burn_in", t_end / 4.0);
    if (const Entry* e = r.get("windows")) {
        for (const auto& s : split(e->value, ';')) {
            const auto parts = split(s, ':');
            if (parts.size() != 2) r.bad(*e, "windows", "expected 'begin:end', got '" + s + "'");
            x.windows.push_back({r.to_double(*e, "windows", parts[0]), r.to_double(*e, "windows", parts[1])});
        }
    } else {
        x.windows = {{t_end / 4.0, t_end / 2.0}, {t_end / 2.0, t_end}};
    }
    auto list = [&](const std::string& key, std::vector<double> fallback) {
        const Entry* e = r.get(key);
        return e ? r.numbers(*e, key, e->value) : fallback;
    };
    x.tightness_R = list("tightness_R", {0.5, 1.0, 2.0, 4.0, 8.0});
    x.moment_powers = list("moment_powers", {1.0, 2.0});
    x.transition_times = list("transition_times", {t_end});
    x.dt_halvings = static_cast<int>(r.integer("dt_halvings", 3));
    if (const Entry* e = r.get("refinement_modes"))
        for (const auto& s : split(e->value, ','))
            x.refinement_modes.push_back(static_cast<int>(r.to_int(*e, "refinement_modes", s)));
    x.identity_samples = static_cast<int>(r.integer("identity_samples", 20));
    return x;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
json mode_json(const MultiIndex& k) { return json::array({k[0], k[1], k[2]}); }
MultiIndex mode_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()}; }

std::string scheme_name(Scheme s) { return s == Scheme::imex_em_ito ? "imex_em_ito" : "heun_strat"; }

const char* observable_kind_name(Observable::Kind k) {
    switch (k) {
        case Observable::Kind::tanh_mode: return "tanh_mode";
        case Observable::Kind::exp_neg_l2: return "exp_neg_l2";
        case Observable::Kind::clip_norm: return "clip_norm";
    }
    return "?";
}

}  // namespace

Grid GridSpec::make() const {
    return Grid::make(dim, std::span<const double>(lengths.data(), dim),
                      std::span<const int>(modes.data(), dim), pad_factor);
}

void RunConfig::validate() const {
    const Grid g = grid.make();
    params.validate();
    solver.validate();
    const int J = noise.count();
    if (noise.family == NoiseFamily::eigenmodes)
        for (const auto& m : noise.modes)
            if (!(std::fabs(m.sigma) >= 0.0)) throw ConfigError("noise.sigmas: must be finite");
    build_noise_modes(noise, g);
    (void)J;
    if (experiment.paths < 1) throw ConfigError("experiment.paths: must be >= 1");
    for (const auto& o : experiment.observables) o.validate();
    for (const auto& o : experiment.observables)
        if (o.kind == Observable::Kind::tanh_mode && !g.contains(o.mode))
            throw ConfigError("experiment.observables: tanh_mode mode outside the grid");
    if (experiment.burn_in < 0.0) throw ConfigError("experiment.burn_in: must be >= 0");
    for (const auto& w : experiment.windows)
        if (!(w.begin < w.end) || w.end > solver.t_end * (1.0 + 1e-12) || w.begin < 0.0)
            throw ConfigError("experiment.windows: each window must satisfy 0 <= begin < end <= t_end");
    for (double R : experiment.tightness_R)
        if (!(R >= 0.0)) throw ConfigError("experiment.tightness_R: values must be >= 0");
    for (double p : experiment.moment_powers)
        if (!(p >= 1.0)) throw ConfigError("experiment.moment_powers: values must be >= 1");
    for (double t : experiment.transition_times)
        if (!(t >= 0.0 && t <= solver.t_end * (1.0 + 1e-12)))
            throw ConfigError("experiment.transition_times: values must lie in [0, t_end]");
    if (experiment.dt_halvings < 1) throw ConfigError("experiment.dt_halvings: must be >= 1");
    for (std::size_t i = 1; i < experiment.refinement_modes.size(); ++i)
        if (experiment.refinement_modes[i] <= experiment.refinement_modes[i - 1])
            throw ConfigError("experiment.refinement_modes: must be strictly increasing");
    if (experiment.identity_samples < 1) throw ConfigError("experiment.identity_samples: must be >= 1");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    const Raw raw(text, origin);
    RunConfig cfg;
    cfg.grid = read_grid(raw);
    cfg.params = read_params(raw);
    cfg.solver = read_solver(raw);
    cfg.solver.truncation = read_truncation(raw);
    cfg.noise = read_noise(raw, cfg.grid.dim);
    cfg.initial = read_initial(raw, cfg.grid.dim);
    cfg.experiment = read_experiment(raw, cfg.grid.dim, cfg.solver.t_end);
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

json to_json(const RunConfig& c) {
    json j;
    j["grid"] = {{"dim", c.grid.dim},
                 {"lengths", json::array({c.grid.lengths[0], c.grid.lengths[1], c.grid.lengths[2]})},
                 {"modes", json::array({c.grid.modes[0], c.grid.modes[1], c.grid.modes[2]})},
                 {"pad_factor", c.grid.pad_factor}};
    j["params"] = {{"beta1", c.params.beta1}, {"beta2", c.params.beta2}, {"beta3", c.params.beta3},
                   {"beta4", c.params.beta4}, {"beta5", c.params.beta5}};
    j["truncation"] = {{"mode", c.solver.truncation.mode == TruncationMode::on ? "on" : "off"},
                       {"radius", c.solver.truncation.radius}};

    json noise;
    switch (c.noise.family) {
        case NoiseFamily::none: noise["family"] = "none"; break;
        case NoiseFamily::eigenmodes: noise["family"] = "eigenmodes"; break;
        case NoiseFamily::explicit_coefficients: noise["family"] = "explicit"; break;
    }
    noise["modes"] = json::array();
    for (const auto& m : c.noise.modes)
        noise["modes"].push_back({{"mode", mode_json(m.mode)}, {"sigma", m.sigma}, {"direction", vec_json(m.direction)}});
    noise["entries"] = json::array();
    for (const auto& e : c.noise.coefficients)
        noise["entries"].push_back({{"j", e.j}, {"mode", mode_json(e.mode)}, {"value", vec_json(e.value)}});
    noise["c_h_bound"] = c.noise.c_h_bound ? json(*c.noise.c_h_bound) : json(nullptr);
    noise["tail_estimate"] = c.noise.tail_estimate ? json(*c.noise.tail_estimate) : json(nullptr);
    j["noise"] = noise;

    j["solver"] = {{"dt", c.solver.dt},
                   {"t_end", c.solver.t_end},
                   {"scheme", scheme_name(c.solver.scheme)},
                   {"blowup_K", c.solver.blowup_K},
                   {"record_every", c.solver.record_every},
                   {"seed", c.solver.seed},
                   {"noise_substeps", c.solver.noise_substeps},
                   {"snapshots", c.solver.keep_snapshots}};

    json init;
    switch (c.initial.kind) {
        case InitialKind::constant: init["kind"] = "constant"; break;
        case InitialKind::modes: init["kind"] = "modes"; break;
        case InitialKind::snapshot: init["kind"] = "snapshot"; break;
    }
    init["constant"] = vec_json(c.initial.constant);
    init["modes"] = json::array();
    for (const auto& m : c.initial.modes)
        init["modes"].push_back({{"mode", mode_json(m.mode)}, {"value", vec_json(m.value)}});
    init["file"] = c.initial.file;
    j["initial"] = init;

    json x;
    const auto& e = c.experiment;
    x["paths"] = e.paths;
    x["observables"] = json::array();
    for (const auto& o : e.observables)
        x["observables"].push_back({{"kind", observable_kind_name(o.kind)},
                                    {"mode", mode_json(o.mode)},
                                    {"component", o.component},
                                    {"scale", o.scale},
                                    {"space", to_string(o.space)},
                                    {"cap", o.cap}});
    x["burn_in"] = e.burn_in;
    x["windows"] = json::array();
    for (const auto& w : e.windows) x["windows"].push_back(json::array({w.begin, w.end}));
    x["tightness_R"] = e.tightness_R;
    x["moment_powers"] = e.moment_powers;
    x["transition_times"] = e.transition_times;
    x["dt_halvings"] = e.dt_halvings;
    x["refinement_modes"] = e.refinement_modes;
    x["identity_samples"] = e.identity_samples;
    j["experiment"] = x;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    const auto& g = j.at("grid");
    c.grid.dim = g.at("dim").get<int>();
    for (int i = 0; i < 3; ++i) {
        c.grid.lengths[i] = g.at("lengths").at(i).get<double>();
        c.grid.modes[i] = g.at("modes").at(i).get<int>();
    }
    c.grid.pad_factor = g.at("pad_factor").get<double>();

    const auto& p = j.at("params");
    c.params = {p.at("beta1").get<double>(), p.at("beta2").get<double>(), p.at("beta3").get<double>(),
                p.at("beta4").get<double>(), p.at("beta5").get<double>()};

    const auto& t = j.at("truncation");
    c.solver.truncation.mode = t.at("mode") == "on" ? TruncationMode::on : TruncationMode::off;
    c.solver.truncation.radius = t.at("radius").get<double>();

    const auto& n = j.at("noise");
    const std::string fam = n.at("family");
    c.noise.family = fam == "eigenmodes" ? NoiseFamily::eigenmodes
                     : fam == "explicit" ? NoiseFamily::explicit_coefficients
                                         : NoiseFamily::none;
    for (const auto& m : n.at("modes"))
        c.noise.modes.push_back({mode_from(m.at("mode")), m.at("sigma").get<double>(), vec_from(m.at("direction"))});
    for (const auto& e : n.at("entries"))
        c.noise.coefficients.push_back({e.at("j").get<int>(), mode_from(e.at("mode")), vec_from(e.at("value"))});
    if (!n.at("c_h_bound").is_null()) c.noise.c_h_bound = n.at("c_h_bound").get<double>();
    if (!n.at("tail_estimate").is_null()) c.noise.tail_estimate = n.at("tail_estimate").get<double>();

    const auto& s = j.at("solver");
    c.solver.dt = s.at("dt").get<double>();
    c.solver.t_end = s.at("t_end").get<double>();
    c.solver.scheme = s.at("scheme") == "heun_strat" ? Scheme::heun_strat : Scheme::imex_em_ito;
    c.solver.blowup_K = s.at("blowup_K").get<double>();
    c.solver.record_every = s.at("record_every").get<int>();
    c.solver.seed = s.at("seed").get<std::uint64_t>();
    c.solver.noise_substeps = s.at("noise_substeps").get<std::uint64_t>();
    c.solver.keep_snapshots = s.at("snapshots").get<bool>();

    const auto& in = j.at("initial");
    const std::string kind = in.at("kind");
    c.initial.kind = kind == "modes" ? InitialKind::modes
                     : kind == "snapshot" ? InitialKind::snapshot
                                          : InitialKind::constant;
    c.initial.constant = vec_from(in.at("constant"));
    for (const auto& m : in.at("modes")) c.initial.modes.push_back({mode_from(m.at("mode")), vec_from(m.at("value"))});
    c.initial.file = in.at("file").get<std::string>();

    const auto& x = j.at("experiment");
    auto& e = c.experiment;
    e.paths = x.at("paths").get<int>();
    for (const auto& o : x.at("observables")) {
        Observable ob;
        const std::string k = o.at("kind");
        ob.kind = k == "tanh_mode" ? Observable::Kind::tanh_mode
                  : k == "clip_norm" ? Observable::Kind::clip_norm
                                     : Observable::Kind::exp_neg_l2;
        ob.mode = mode_from(o.at("mode"));
        ob.component = o.at("component").get<int>();
        ob.scale = o.at("scale").get<double>();
        ob.space = norm_kind_from_string(o.at("space").get<std::string>());
        ob.cap = o.at("cap").get<double>();
        e.observables.push_back(ob);
    }
    e.burn_in = x.at("burn_in").get<double>();
    for (const auto& w : x.at("windows")) e.windows.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
    e.tightness_R = x.at("tightness_R").get<std::vector<double>>();
    e.moment_powers = x.at("moment_powers").get<std::vector<double>>();
    e.transition_times = x.at("transition_times").get<std::vector<double>>();
    e.dt_halvings = x.at("dt_halvings").get<int>();
    e.refinement_modes = x.at("refinement_modes").get<std::vector<int>>();
    e.identity_samples = x.at("identity_samples").get<int>();
    return c;
}

}  // namespace sllbar
