#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wfmpc/common.hpp"
#include "wfmpc/layout.hpp"

namespace wfmpc {

// Flat `key = value` experiment configuration. Lines starting with '#'
// are comments; keys are case-sensitive. Every key that was read is
// tracked so unknown (misspelled) keys can be reported.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return from_string(ss.str(), path);
    }

    static Config from_string(const std::string& text, const std::string& origin = "<string>") {
        Config c;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + trimmed + "'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            c.values_[key] = value;
        }
        return c;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        used_.insert(key);
        return it->second;
    }

    std::string require_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing required config key: " + key);
        used_.insert(key);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return parse_double(key, require_string(key));
    }

    int get_int(const std::string& key, int fallback) const {
        if (!has(key)) return fallback;
        const std::string s = require_string(key);
        try {
            std::size_t pos = 0;
            const long v = std::stol(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return static_cast<int>(v);
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not an integer: " + s);
        }
    }

    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const std::string s = require_string(key);
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not a seed: " + s);
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string s = require_string(key);
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw ConfigError("config key '" + key + "' is not a boolean: " + s);
    }

    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const {
        if (!has(key)) return fallback;
        const std::string s = require_string(key);
        std::vector<int> out;
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                out.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ConfigError("config key '" + key + "' has a non-integer entry: " + tok);
            }
        }
        return out;
    }

    // Keys that were present but never consumed by any getter.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double parse_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' is not a number: " + s);
        }
    }
};

// Builds the farm layout from config keys. Turbine positions use
// turbine_<k>_x / turbine_<k>_y with k starting at 1; shared rotor
// parameters apply to every machine.
inline FarmLayout layout_from_config(const Config& c) {
    FarmLayout l;
    l.nx = c.get_int("grid_nx", l.nx);
    l.ny = c.get_int("grid_ny", l.ny);
    l.lx = c.get_double("domain_lx", l.lx);
    l.ly = c.get_double("domain_ly", l.ly);
    l.dt = c.get_double("dt", l.dt);
    l.rho = c.get_double("rho", l.rho);
    l.nu_eff = c.get_double("nu_eff", l.nu_eff);
    l.freestream = c.get_double("freestream", l.freestream);
    l.cp_loss = c.get_double("cp_loss", l.cp_loss);

    TurbineSpec proto;
    proto.rotor_diameter = c.get_double("rotor_diameter", proto.rotor_diameter);
    proto.ct_min = c.get_double("ct_min", proto.ct_min);
    proto.ct_max = c.get_double("ct_max", proto.ct_max);
    proto.yaw_limit_deg = c.get_double("yaw_limit", proto.yaw_limit_deg);
    proto.ct_ramp = c.get_double("ct_ramp", proto.ct_ramp);
    proto.yaw_ramp_deg = c.get_double("yaw_ramp", proto.yaw_ramp_deg);

    const int count = c.get_int("turbine_count", 0);
    if (count <= 0) throw ConfigError("config must set turbine_count >= 1");
    for (int k = 1; k <= count; ++k) {
        TurbineSpec t = proto;
        const std::string prefix = "turbine_" + std::to_string(k) + "_";
        t.x = c.get_double(prefix + "x", -1.0);
        t.y = c.get_double(prefix + "y", -1.0);
        if (t.x < 0 || t.y < 0)
            throw ConfigError("config missing position for turbine " + std::to_string(k));
        l.turbines.push_back(t);
    }
    l.validate();
    return l;
}

}  // namespace wfmpc
