#include "toa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw config_error(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& source, int line, const std::string& key,
                    const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        fail(source, line, "key '" + key + "': cannot parse '" + text + "' as a number");
    }
}

int parse_int(const std::string& source, int line, const std::string& key,
              const std::string& text) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        fail(source, line, "key '" + key + "': cannot parse '" + text + "' as an integer");
    }
}

std::vector<double> parse_list(const std::string& source, int line, const std::string& key,
                               const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(source, line, "key '" + key + "': empty list element");
        out.push_back(parse_double(source, line, key, item));
    }
    if (out.empty()) fail(source, line, "key '" + key + "': empty list");
    return out;
}

// Keys recognized for every scenario.
const std::set<std::string> kGlobalKeys = {
    "scenario", "hbar",     "mass",    "direction", "detector_x", "output",
    "p_tol",    "norm_tol", "edge_tol", "tail_tol",
};

const std::set<std::string>& scenario_keys(ScenarioKind kind) {
    static const std::set<std::string> window = {"tau_min", "tau_max", "tau_count"};
    static const std::set<std::string> negative_flux = {"tau_min", "tau_max", "tau_count",
                                                        "margin"};
    static const std::set<std::string> semiclassical = {"tau", "hbar_scales"};
    static const std::set<std::string> wigner = {"tau_values"};
    static const std::set<std::string> barrier = {
        "tau_min", "tau_max", "tau_count", "barrier_model", "barrier_strength",
        "barrier_height", "barrier_width"};
    switch (kind) {
        case ScenarioKind::density:
        case ScenarioKind::currents:
        case ScenarioKind::means:
            return window;
        case ScenarioKind::negative_flux:
            return negative_flux;
        case ScenarioKind::semiclassical:
            return semiclassical;
        case ScenarioKind::wigner_check:
            return wigner;
        case ScenarioKind::barrier:
            return barrier;
    }
    return window;
}

}  // namespace

const char* scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::density: return "density";
        case ScenarioKind::currents: return "currents";
        case ScenarioKind::means: return "means";
        case ScenarioKind::negative_flux: return "negative_flux";
        case ScenarioKind::semiclassical: return "semiclassical";
        case ScenarioKind::barrier: return "barrier";
        case ScenarioKind::wigner_check: return "wigner_check";
    }
    return "density";
}

ScenarioKind parse_scenario(const std::string& name) {
    for (ScenarioKind k :
         {ScenarioKind::density, ScenarioKind::currents, ScenarioKind::means,
          ScenarioKind::negative_flux, ScenarioKind::semiclassical, ScenarioKind::barrier,
          ScenarioKind::wigner_check}) {
        if (name == scenario_name(k)) return k;
    }
    throw config_error("unknown scenario kind '" + name + "'");
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
    std::map<std::string, Entry> globals;
    struct RawComponent {
        std::map<std::string, Entry> keys;
        int line = 0;
    };
    std::vector<RawComponent> components;

    std::stringstream stream(text);
    std::string raw;
    int line = 0;
    bool in_component = false;
    while (std::getline(stream, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s == "[component]") {
            components.push_back({{}, line});
            in_component = true;
            continue;
        }
        if (s.front() == '[') fail(source, line, "unknown section '" + s + "'");

        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(source, line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) fail(source, line, "empty key or value");

        if (in_component) {
            static const std::set<std::string> component_keys = {"weight", "center", "spread",
                                                                 "origin"};
            if (!component_keys.count(key)) {
                fail(source, line, "unknown component key '" + key + "'");
            }
            if (components.back().keys.count(key)) {
                fail(source, line, "duplicate component key '" + key + "'");
            }
            components.back().keys[key] = {value, line, false};
        } else {
            if (globals.count(key)) fail(source, line, "duplicate key '" + key + "'");
            globals[key] = {value, line, false};
        }
    }

    auto take = [&](const std::string& key) -> Entry* {
        auto it = globals.find(key);
        if (it == globals.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    auto require = [&](const std::string& key) -> Entry& {
        Entry* e = take(key);
        if (!e) throw config_error(source + ": missing required key '" + key + "'");
        return *e;
    };

    ScenarioConfig cfg;
    {
        const Entry& e = require("scenario");
        try {
            cfg.scenario = parse_scenario(e.value);
        } catch (const config_error&) {
            fail(source, e.line, "unknown scenario kind '" + e.value + "'");
        }
    }

    const std::set<std::string>& extras = scenario_keys(cfg.scenario);
    for (const auto& [key, entry] : globals) {
        if (!kGlobalKeys.count(key) && !extras.count(key)) {
            fail(source, entry.line,
                 "key '" + key + "' is not valid for scenario '" +
                     scenario_name(cfg.scenario) + "'");
        }
    }

    if (Entry* e = take("hbar")) {
        cfg.constants.hbar = parse_double(source, e->line, "hbar", e->value);
        if (!(cfg.constants.hbar > 0.0)) fail(source, e->line, "hbar must be > 0");
    }
    if (Entry* e = take("mass")) {
        cfg.constants.mass = parse_double(source, e->line, "mass", e->value);
        if (!(cfg.constants.mass > 0.0)) fail(source, e->line, "mass must be > 0");
    }
    if (Entry* e = take("direction")) {
        if (e->value == "+1" || e->value == "1") {
            cfg.packet.direction = Direction::plus;
        } else if (e->value == "-1") {
            cfg.packet.direction = Direction::minus;
        } else {
            fail(source, e->line, "direction must be +1 or -1, got '" + e->value + "'");
        }
    }
    if (Entry* e = take("detector_x")) {
        cfg.detector_x = parse_double(source, e->line, "detector_x", e->value);
    }
    if (Entry* e = take("output")) cfg.output = e->value;
    if (Entry* e = take("p_tol")) {
        cfg.p_tol = parse_double(source, e->line, "p_tol", e->value);
        if (!(cfg.p_tol > 0.0)) fail(source, e->line, "p_tol must be > 0");
    }
    if (Entry* e = take("norm_tol")) {
        cfg.norm_tol = parse_double(source, e->line, "norm_tol", e->value);
        if (!(cfg.norm_tol > 0.0)) fail(source, e->line, "norm_tol must be > 0");
    }
    if (Entry* e = take("edge_tol")) {
        cfg.edge_tol = parse_double(source, e->line, "edge_tol", e->value);
        if (!(cfg.edge_tol > 0.0)) fail(source, e->line, "edge_tol must be > 0");
    }
    if (Entry* e = take("tail_tol")) {
        cfg.tail_tol = parse_double(source, e->line, "tail_tol", e->value);
        if (!(cfg.tail_tol > 0.0)) fail(source, e->line, "tail_tol must be > 0");
    }

    const bool needs_window = extras.count("tau_min") > 0;
    if (needs_window) {
        {
            const Entry& e = require("tau_min");
            cfg.tau_min = parse_double(source, e.line, "tau_min", e.value);
        }
        {
            const Entry& e = require("tau_max");
            cfg.tau_max = parse_double(source, e.line, "tau_max", e.value);
            if (!(cfg.tau_max > cfg.tau_min)) fail(source, e.line, "tau_max must exceed tau_min");
        }
        {
            const Entry& e = require("tau_count");
            cfg.tau_count = parse_int(source, e.line, "tau_count", e.value);
            if (cfg.tau_count < 2) fail(source, e.line, "tau_count must be >= 2");
        }
    }

    switch (cfg.scenario) {
        case ScenarioKind::negative_flux:
            if (Entry* e = take("margin")) {
                cfg.margin = parse_double(source, e->line, "margin", e->value);
                if (!(cfg.margin > 1.0)) fail(source, e->line, "margin must be > 1");
            }
            break;
        case ScenarioKind::semiclassical: {
            const Entry& e = require("tau");
            cfg.tau = parse_double(source, e.line, "tau", e.value);
            const Entry& s = require("hbar_scales");
            cfg.hbar_scales = parse_list(source, s.line, "hbar_scales", s.value);
            for (std::size_t i = 0; i < cfg.hbar_scales.size(); ++i) {
                if (!(cfg.hbar_scales[i] > 0.0)) {
                    fail(source, s.line, "hbar_scales must be positive");
                }
                if (i > 0 && !(cfg.hbar_scales[i] < cfg.hbar_scales[i - 1])) {
                    fail(source, s.line, "hbar_scales must be strictly decreasing");
                }
            }
            break;
        }
        case ScenarioKind::wigner_check: {
            const Entry& e = require("tau_values");
            cfg.tau_values = parse_list(source, e.line, "tau_values", e.value);
            break;
        }
        case ScenarioKind::barrier: {
            const Entry& e = require("barrier_model");
            if (e.value == "delta") {
                cfg.barrier_model = BarrierModelKind::delta;
                const Entry& s = require("barrier_strength");
                cfg.barrier_strength = parse_double(source, s.line, "barrier_strength", s.value);
                if (!(cfg.barrier_strength >= 0.0)) {
                    fail(source, s.line, "barrier_strength must be >= 0");
                }
            } else if (e.value == "rectangular") {
                cfg.barrier_model = BarrierModelKind::rectangular;
                const Entry& h = require("barrier_height");
                cfg.barrier_height = parse_double(source, h.line, "barrier_height", h.value);
                if (!(cfg.barrier_height > 0.0)) fail(source, h.line, "barrier_height must be > 0");
                const Entry& w = require("barrier_width");
                cfg.barrier_width = parse_double(source, w.line, "barrier_width", w.value);
                if (!(cfg.barrier_width > 0.0)) fail(source, w.line, "barrier_width must be > 0");
            } else {
                fail(source, e.line, "barrier_model must be 'delta' or 'rectangular'");
            }
            break;
        }
        default:
            break;
    }

    for (const auto& [key, entry] : globals) {
        if (!entry.used) {
            fail(source, entry.line,
                 "key '" + key + "' is not valid for scenario '" +
                     scenario_name(cfg.scenario) + "'");
        }
    }

    if (components.empty()) {
        throw config_error(source + ": at least one [component] section is required");
    }
    for (const RawComponent& rc : components) {
        GaussianComponent g;
        auto comp_take = [&](const char* key, double fallback, bool required) {
            auto it = rc.keys.find(key);
            if (it == rc.keys.end()) {
                if (required) {
                    fail(source, rc.line,
                         std::string("component missing required key '") + key + "'");
                }
                return fallback;
            }
            return parse_double(source, it->second.line, key, it->second.value);
        };
        g.weight = comp_take("weight", 1.0, false);
        g.center = comp_take("center", 0.0, true);
        g.spread = comp_take("spread", 0.0, true);
        g.origin = comp_take("origin", 0.0, false);
        if (!(g.center > 0.0)) {
            fail(source, rc.line, "component field 'center' must be > 0");
        }
        if (!(g.spread > 0.0)) {
            fail(source, rc.line, "component field 'spread' must be > 0");
        }
        cfg.packet.components.push_back(g);
    }

    try {
        validate_spec(cfg.packet, cfg.tail_tol);
    } catch (const error& e) {
        throw config_error(source + ": " + e.what());
    }

    if (cfg.scenario == ScenarioKind::negative_flux) {
        if (cfg.packet.components.size() != 2) {
            throw config_error(source + ": negative_flux needs exactly two components");
        }
        const GaussianComponent& c1 = cfg.packet.components[0];
        const GaussianComponent& c2 = cfg.packet.components[1];
        if (c1.spread != c2.spread || c1.origin != c2.origin) {
            throw config_error(source +
                               ": negative_flux components must share spread and origin");
        }
        if (!(c2.center > c1.center)) {
            throw config_error(source + ": negative_flux components need center2 > center1");
        }
    }

    if (cfg.output.empty()) cfg.output = std::string(scenario_name(cfg.scenario)) + ".csv";
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string demo_config(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::density:
            return "# Arrival density of a directed Gaussian packet at the detector.\n"
                   "scenario = density\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "tau_min = -60\ntau_max = 80\ntau_count = 2801\n"
                   "[component]\nweight = 1\ncenter = 1\nspread = 0.05\norigin = -10\n";
        case ScenarioKind::currents:
            return "# Ordinary and positive-definite current expectations over time.\n"
                   "scenario = currents\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "tau_min = -60\ntau_max = 80\ntau_count = 2801\n"
                   "[component]\nweight = 1\ncenter = 1\nspread = 0.05\norigin = -10\n";
        case ScenarioKind::means:
            return "# Mean arrival time by four routes; the window must capture the packet.\n"
                   "scenario = means\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "tau_min = -60\ntau_max = 80\ntau_count = 2801\n"
                   "[component]\nweight = 1\ncenter = 1\nspread = 0.05\norigin = -10\n";
        case ScenarioKind::negative_flux:
            return "# Two-packet superposition whose ordinary current dips negative.\n"
                   "scenario = negative_flux\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "margin = 3\n"
                   "tau_min = 0\ntau_max = 0.25387\ntau_count = 1025\n"
                   "[component]\nweight = 0.9486832980505138\ncenter = 1\nspread = 0.1\n"
                   "origin = 0\n"
                   "[component]\nweight = 0.31622776601683794\ncenter = 10\nspread = 0.1\n"
                   "origin = 0\n";
        case ScenarioKind::semiclassical:
            return "# Exact arrival density against its stationary-phase limit under\n"
                   "# hbar scaling.\n"
                   "scenario = semiclassical\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "tau = 10\nhbar_scales = 1, 0.5, 0.25, 0.125\n"
                   "[component]\nweight = 1\ncenter = 2\nspread = 0.25\norigin = -20\n";
        case ScenarioKind::barrier:
            return "# Transmission through a delta barrier and the downstream arrival\n"
                   "# density; keep origin far from the barrier at x = 0.\n"
                   "scenario = barrier\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "barrier_model = delta\nbarrier_strength = 1\n"
                   "tau_min = -60\ntau_max = 80\ntau_count = 2801\n"
                   "[component]\nweight = 1\ncenter = 1\nspread = 0.05\norigin = -10\n";
        case ScenarioKind::wigner_check:
            return "# Current via the Wigner flux moment against the direct route.\n"
                   "scenario = wigner_check\n"
                   "hbar = 1\nmass = 1\ndirection = +1\ndetector_x = 0\n"
                   "tau_values = 8, 10, 12\n"
                   "[component]\nweight = 1\ncenter = 1\nspread = 0.05\norigin = -10\n";
    }
    throw config_error("unknown scenario kind");
}

}  // namespace toa
