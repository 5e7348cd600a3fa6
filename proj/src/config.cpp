#include "hadlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "hadlab/errors.hpp"

namespace hadlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::vector<std::string>>& key_table() {
    static const std::vector<std::string> profile_keys = {
        "profile", "p", "growth_p", "growth_q", "growth_delta", "growth_c",
        "a_expr",  "a_prime_expr", "sup_a"};
    static const std::vector<std::string> warping_keys = {
        "warping", "k", "q", "f_expr", "f_prime_expr", "f_double_prime_expr", "r_max"};
    auto join = [](std::initializer_list<std::vector<std::string>> parts) {
        std::vector<std::string> out = {"output_dir", "seed"};
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        return out;
    };
    static const std::map<std::string, std::vector<std::string>> table = {
        {"check-profile", join({profile_keys, {"s_max", "n_samples"}})},
        {"check-manifold",
         join({warping_keys,
               {"n_grid", "div_p", "div_s", "div_r_cut", "div_n", "area_expr"}})},
        {"barrier", join({profile_keys,
                          {"k", "n", "height_c", "abs_tol", "rel_tol", "tail_cut",
                           "s_max", "n_samples"}})},
        {"sr-curve", join({{"r_intersect", "k", "t_max", "t_min", "tol", "max_dt"}})},
        {"certify-convexity",
         join({warping_keys,
               {"r_intersect", "t_span", "n_t_grid", "n_theta_grid", "tol", "n_dim"}})},
        {"borbely", join({{"k", "eps", "alpha", "r0", "r_stop", "max_steps"}})},
        {"solve", join({warping_keys, profile_keys,
                        {"radius", "r_in", "r_out", "n_r", "n_t", "phi_expr", "u_in",
                         "u_out", "max_newton", "tol_newton"}})},
        {"cascade", join({warping_keys, profile_keys,
                          {"radii", "n_r_base", "n_t", "phi_expr", "tol_cascade",
                           "max_newton", "tol_newton"}})},
        {"report", join({warping_keys, profile_keys,
                         {"n", "height_c", "r_intersect", "alpha", "eps"}})},
    };
    return table;
}

} // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds = [] {
        std::vector<std::string> out;
        for (const auto& [cmd, _] : key_table()) out.push_back(cmd);
        return out;
    }();
    return cmds;
}

const std::vector<std::string>& command_keys(const std::string& command) {
    auto it = key_table().find(command);
    if (it == key_table().end()) throw config_error("unknown command: " + command);
    return it->second;
}

RunConfig parse_config(const std::string& text, bool env_override) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("unterminated section header", lineno);
            if (!cfg.command.empty())
                throw config_error("config must contain exactly one command section", lineno);
            cfg.command = trim(line.substr(1, line.size() - 2));
            const auto& cmds = known_commands();
            if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end())
                throw config_error("unknown command section '" + cfg.command + "'", lineno);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected 'key = value'", lineno);
        if (cfg.command.empty())
            throw config_error("key outside a command section", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("empty key or value", lineno);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        const auto& keys = command_keys(cfg.command);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw config_error("unknown key '" + key + "' for command " + cfg.command,
                               lineno);
        if (cfg.values.count(key)) throw config_error("duplicate key '" + key + "'", lineno);
        cfg.values[key] = value;
        cfg.lines[key] = lineno;
    }
    if (cfg.command.empty()) throw config_error("config contains no command section");

    if (env_override) {
        for (const std::string& key : command_keys(cfg.command)) {
            std::string env_name = "HADLAB_";
            for (char c : key) env_name += char(std::toupper(static_cast<unsigned char>(c)));
            if (const char* v = std::getenv(env_name.c_str())) {
                cfg.values[key] = v;
                cfg.lines[key] = 0;
            }
        }
    }

    if (cfg.has("output_dir")) cfg.output_dir = cfg.get_string("output_dir");
    if (cfg.has("seed")) cfg.seed = cfg.get_int("seed");
    return cfg;
}

namespace {

[[noreturn]] void bad_value(const RunConfig& cfg, const std::string& key,
                            const std::string& why) {
    auto it = cfg.lines.find(key);
    throw config_error("key '" + key + "': " + why, it == cfg.lines.end() ? 0 : it->second);
}

double to_real(const RunConfig& cfg, const std::string& key, const std::string& raw) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end != raw.c_str() + raw.size()) bad_value(cfg, key, "not a number: " + raw);
    return v;
}

} // namespace

double RunConfig::get_real(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw config_error("missing required key '" + key + "'");
    return to_real(*this, key, it->second);
}
double RunConfig::get_real(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
}
long RunConfig::get_int(const std::string& key) const {
    const double v = get_real(key);
    const long l = long(v);
    if (double(l) != v) bad_value(*this, key, "expected an integer");
    return l;
}
long RunConfig::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}
std::string RunConfig::get_string(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw config_error("missing required key '" + key + "'");
    return it->second;
}
std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}
std::vector<double> RunConfig::get_list(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t comma = raw.find(',', pos);
        if (comma == std::string::npos) comma = raw.size();
        const std::string piece = trim(raw.substr(pos, comma - pos));
        if (!piece.empty()) out.push_back(to_real(*this, key, piece));
        pos = comma + 1;
    }
    if (out.empty()) bad_value(*this, key, "expected a comma-separated number list");
    return out;
}

double RunConfig::require_real(const std::string& key, double lo, double hi) const {
    const double v = get_real(key);
    if (!(v >= lo) || !(v <= hi))
        bad_value(*this, key,
                  "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
    return v;
}
double RunConfig::real_in(const std::string& key, double fallback, double lo,
                          double hi) const {
    if (!has(key)) return fallback;
    return require_real(key, lo, hi);
}
long RunConfig::int_in(const std::string& key, long fallback, long lo, long hi) const {
    if (!has(key)) return fallback;
    const long v = get_int(key);
    if (v < lo || v > hi)
        bad_value(*this, key, "value " + std::to_string(v) + " outside range");
    return v;
}

} // namespace hadlab
