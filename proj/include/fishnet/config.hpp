#pragma once

// Run configuration: a small TOML subset plus the experiment schema.
//
// Supported syntax: [table] headers (one level), key = value pairs, '#'
// comments, basic strings, integers, floats, booleans and single-line arrays
// of those scalars. Every key must live inside a table.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fishnet/dist.hpp"
#include "fishnet/mesh.hpp"
#include "fishnet/models.hpp"

namespace fishnet {

/// Bad or missing configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
    std::variant<bool, std::int64_t, double, std::string, TomlArray> v;

    bool is_number() const;
    double as_number() const;
};

using TomlTable = std::map<std::string, TomlValue>;

struct TomlDocument {
    std::map<std::string, TomlTable> tables;

    bool has(const std::string& table) const { return tables.count(table) != 0; }
    const TomlValue* find(const std::string& table, const std::string& key) const;
};

TomlDocument parse_toml(const std::string& text);
TomlDocument load_toml(const std::string& path);

/// Normalized text: tables and keys sorted, canonical number spelling.
std::string to_toml(const TomlDocument& doc);
std::string format_value(const TomlValue& v);

/// Parses "table.key=value" with the value in TOML syntax; a bare word that
/// is not a TOML literal is taken as a string.
void apply_override(TomlDocument& doc, const std::string& assignment);

/// Rejects unknown tables, unknown keys and wrongly typed values.
void validate(const TomlDocument& doc);

// ---------------------------------------------------------------------------
// Typed views

class Config {
  public:
    Config() = default;
    explicit Config(TomlDocument doc);

    const TomlDocument& document() const { return doc_; }

    bool has(const std::string& table) const { return doc_.has(table); }
    bool has(const std::string& table, const std::string& key) const
    {
        return doc_.find(table, key) != nullptr;
    }

    void require(const std::string& table) const;
    double number(const std::string& table, const std::string& key) const;
    double number(const std::string& table, const std::string& key, double fallback) const;
    std::int64_t integer(const std::string& table, const std::string& key) const;
    std::int64_t integer(const std::string& table, const std::string& key,
                         std::int64_t fallback) const;
    bool boolean(const std::string& table, const std::string& key, bool fallback) const;
    std::string string(const std::string& table, const std::string& key,
                       const std::string& fallback) const;
    /// Scalar or array, flattened into a list of numbers.
    std::vector<double> numbers(const std::string& table, const std::string& key) const;
    std::vector<std::string> strings(const std::string& table, const std::string& key) const;

  private:
    const TomlValue& at(const std::string& table, const std::string& key) const;
    TomlDocument doc_;
};

FishnetGeometry geometry_from(const Config& cfg);
Distribution distribution_from(const Config& cfg);

}  // namespace fishnet
