#include "imexrelax/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace imexrelax {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_number(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || trim(s.substr(pos)).size() != 0) throw ConfigError("key '" + key + "': not a number: '" + s + "'");
    return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig kv;
    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find_first_of("#;"); h != std::string::npos) raw.erase(h);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        kv.values_[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string KeyValueConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

double KeyValueConfig::number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_number(key, it->second);
}

std::vector<double> KeyValueConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    std::string s = get(key, "");
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(to_number(key, tok));
    return out;
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : to_number("model." + key, it->second);
}

std::string ExperimentConfig::param_str(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Index ExperimentConfig::ratio() const {
    if (sizes.size() < 2) return 1;
    return sizes[1] / sizes[0];
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
    ExperimentConfig c;
    c.study = kv.get("study", kv.get("model.study", "convergence"));
    if (c.study != "convergence" && c.study != "steady" && c.study != "klf")
        throw ConfigError("unknown study '" + c.study + "'");
    c.model = kv.require("model.id");
    const auto ids = model_ids();
    if (std::find(ids.begin(), ids.end(), c.model) == ids.end()) throw ConfigError("unknown model '" + c.model + "'");
    for (const auto& [k, v] : kv.values())
        if (k.rfind("model.", 0) == 0) c.params[k.substr(6)] = v;
    c.eps = kv.numbers("model.eps");
    if (c.eps.empty()) c.eps = {1.0};
    for (double e : c.eps)
        if (!(e > 0.0)) throw ConfigError("eps values must be positive");

    c.scheme = kv.get("scheme.name", c.scheme);
    c.registry = kv.get("scheme.registry", default_registry_path());

    for (double n : kv.numbers("grid.sizes")) {
        if (n < 1 || n != std::floor(n)) throw ConfigError("grid sizes must be positive integers");
        c.sizes.push_back(static_cast<Index>(n));
    }
    if (c.sizes.empty()) throw ConfigError("missing key 'grid.sizes'");
    for (std::size_t i = 1; i < c.sizes.size(); ++i) {
        if (c.sizes[i] <= c.sizes[i - 1]) throw ConfigError("grid sizes must be strictly increasing");
        if (c.sizes[i] % c.sizes[i - 1] != 0 || c.sizes[i] / c.sizes[i - 1] != c.sizes[1] / c.sizes[0])
            throw ConfigError("grid sizes must share one integer refinement ratio");
    }

    const std::string mode = kv.get("time.dt_mode", "fixed");
    if (mode == "fixed") c.dt_mode = StepControl::FixedDt;
    else if (mode == "hyperbolic") c.dt_mode = StepControl::HyperbolicCFL;
    else if (mode == "parabolic") c.dt_mode = StepControl::ParabolicCFL;
    else throw ConfigError("unknown dt_mode '" + mode + "'");
    c.dt_value = kv.number("time.dt", kv.number("time.cfl", c.dt_value));
    c.t_end = kv.number("time.t_end", c.t_end);
    c.tau_end = kv.number("time.tau_end", 0.0);
    if (!(c.dt_value > 0.0) || !(c.end_time(c.eps.front()) > 0.0))
        throw ConfigError("time step and end time must be positive");
    c.sample_times = kv.numbers("time.samples");

    const std::string norm = kv.get("output.norm", "L1");
    if (norm == "L1") c.norm = Norm::L1;
    else if (norm == "Linf") c.norm = Norm::Linf;
    else throw ConfigError("unknown norm '" + norm + "'");
    c.output = kv.get("output.path", "");
    c.reference = kv.get("output.reference", "self");
    if (c.reference != "self" && c.reference != "exact") throw ConfigError("reference must be self or exact");
    const std::string timing = kv.get("output.timing", "on");
    c.timing = timing == "on" || timing == "true" || timing == "1";
    c.seed = static_cast<unsigned>(kv.number("output.seed", 0));
    return c;
}

}  // namespace imexrelax
