#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hadlab {

/// Flat config document: `key = value` lines grouped under one `[command]`
/// section. `#` starts a comment. Values are numbers, booleans, strings, or
/// comma-separated number lists. Environment variables HADLAB_<KEY> (key
/// upper-cased) override file values for keys the command knows about.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values; ///< raw strings, post-override
    std::map<std::string, int> lines;          ///< source line per key
    std::string output_dir = ".";
    long seed = 0;
    bool quiet = false;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    double get_real(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    /// Range-checked accessors; throw config_error naming the key and line.
    double require_real(const std::string& key, double lo, double hi) const;
    double real_in(const std::string& key, double fallback, double lo, double hi) const;
    long int_in(const std::string& key, long fallback, long lo, long hi) const;
};

/// Parses and validates a config document. Unknown commands, unknown keys,
/// missing required keys, and malformed lines throw config_error with the
/// offending line number. `env_override` enables the HADLAB_ prefix pass.
RunConfig parse_config(const std::string& text, bool env_override = true);

/// Known commands, in dispatch order.
const std::vector<std::string>& known_commands();

/// Keys (required + optional) a command accepts; used for validation and for
/// the env-override pass.
const std::vector<std::string>& command_keys(const std::string& command);

} // namespace hadlab
