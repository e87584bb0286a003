#include "fishnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fishnet {

bool TomlValue::is_number() const
{
    return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

double TomlValue::as_number() const
{
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<double>(*i);
    }
    return std::get<double>(v);
}

const TomlValue* TomlDocument::find(const std::string& table, const std::string& key) const
{
    const auto t = tables.find(table);
    if (t == tables.end()) {
        return nullptr;
    }
    const auto k = t->second.find(key);
    return k == t->second.end() ? nullptr : &k->second;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool bare_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Cursor {
  public:
    Cursor(const std::string& s, int line) : s_(s), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("config line " + std::to_string(line_) + ": " + what);
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) {
            ++pos_;
        }
    }
    bool done()
    {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void expect(char c)
    {
        skip_ws();
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string key()
    {
        skip_ws();
        const auto start = pos_;
        while (pos_ < s_.size() && bare_char(s_[pos_])) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a bare key");
        }
        return s_.substr(start, pos_ - start);
    }

    TomlValue value(bool allow_array = true)
    {
        skip_ws();
        const char c = peek();
        if (c == '"') {
            return {string()};
        }
        if (c == '[') {
            if (!allow_array) {
                fail("nested arrays are not supported");
            }
            ++pos_;
            TomlArray items;
            skip_ws();
            if (peek() == ']') {
                ++pos_;
                return {items};
            }
            for (;;) {
                items.push_back(value(false));
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    skip_ws();
                    if (peek() == ']') {
                        ++pos_;
                        break;
                    }
                    continue;
                }
                if (peek() == ']') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ']' in array");
            }
            return {items};
        }
        const auto start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
               s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#') {
            ++pos_;
        }
        const std::string word = s_.substr(start, pos_ - start);
        if (word == "true") {
            return {true};
        }
        if (word == "false") {
            return {false};
        }
        std::string digits;
        for (char ch : word) {
            if (ch != '_') {
                digits += ch;
            }
        }
        if (!digits.empty() && digits.front() == '+') {
            digits.erase(0, 1);
        }
        if (digits.empty()) {
            fail("missing value");
        }
        const char* b = digits.data();
        const char* e = b + digits.size();
        std::int64_t i = 0;
        if (auto r = std::from_chars(b, e, i); r.ec == std::errc() && r.ptr == e) {
            return {i};
        }
        double d = 0.0;
        if (auto r = std::from_chars(b, e, d); r.ec == std::errc() && r.ptr == e &&
                                               std::isfinite(d)) {
            return {d};
        }
        fail("cannot read value '" + word + "'");
    }

  private:
    std::string string()
    {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) {
                    break;
                }
                const char e = s_[pos_++];
                switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out += c;
        }
        if (pos_ >= s_.size()) {
            fail("unterminated string");
        }
        ++pos_;
        return out;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_;
};

}  // namespace

TomlDocument parse_toml(const std::string& text)
{
    TomlDocument doc;
    std::istringstream in(text);
    std::string line;
    std::string current;
    std::set<std::string> seen_tables;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        Cursor cur(line, number);
        if (cur.done()) {
            continue;
        }
        if (cur.peek() == '[') {
            cur.expect('[');
            current = cur.key();
            cur.expect(']');
            if (!cur.done()) {
                cur.fail("trailing characters after table header");
            }
            if (!seen_tables.insert(current).second) {
                cur.fail("table [" + current + "] defined twice");
            }
            doc.tables[current];
            continue;
        }
        const std::string key = cur.key();
        cur.expect('=');
        TomlValue v = cur.value();
        if (!cur.done()) {
            cur.fail("trailing characters after value");
        }
        if (current.empty()) {
            cur.fail("key '" + key + "' must be inside a [table]");
        }
        auto& table = doc.tables[current];
        if (!table.emplace(key, std::move(v)).second) {
            cur.fail("key '" + key + "' repeated in [" + current + "]");
        }
    }
    return doc;
}

TomlDocument load_toml(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_toml(text.str());
}

std::string format_value(const TomlValue& v)
{
    struct Visitor {
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const
        {
            char buf[64];
            auto r = std::to_chars(buf, buf + sizeof buf, d);
            std::string s(buf, r.ptr);
            if (s.find_first_of(".eEn") == std::string::npos) {
                s += ".0";
            }
            return s;
        }
        std::string operator()(const std::string& s) const
        {
            std::string out = "\"";
            for (char c : s) {
                switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
                }
            }
            return out + "\"";
        }
        std::string operator()(const TomlArray& a) const
        {
            std::string out = "[";
            for (std::size_t k = 0; k < a.size(); ++k) {
                out += (k ? ", " : "") + format_value(a[k]);
            }
            return out + "]";
        }
    };
    return std::visit(Visitor{}, v.v);
}

std::string to_toml(const TomlDocument& doc)
{
    std::string out;
    bool first = true;
    for (const auto& [name, table] : doc.tables) {
        if (!first) {
            out += "\n";
        }
        first = false;
        out += "[" + name + "]\n";
        for (const auto& [key, value] : table) {
            out += key + " = " + format_value(value) + "\n";
        }
    }
    return out;
}

void apply_override(TomlDocument& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ConfigError("override '" + assignment + "' is not of the form table.key=value");
    }
    const std::string table = assignment.substr(0, dot);
    const std::string key = assignment.substr(dot + 1, eq - dot - 1);
    const std::string text = assignment.substr(eq + 1);
    TomlValue v;
    try {
        const auto parsed = parse_toml("[x]\nv = " + text + "\n");
        v = parsed.tables.at("x").at("v");
    }
    catch (const ConfigError&) {
        v = TomlValue{text};
    }
    doc.tables[table][key] = std::move(v);
}

// ---------------------------------------------------------------------------
// Schema

namespace {

enum class Kind { integer, number, boolean, string, numbers, integers, strings };

const std::map<std::string, std::map<std::string, Kind>>& schema()
{
    static const std::map<std::string, std::map<std::string, Kind>> s = {
        {"geometry",
         {{"rows", Kind::integer},
          {"cols", Kind::integer},
          {"link_length", Kind::number},
          {"link_area", Kind::number},
          {"modulus", Kind::number}}},
        {"distribution",
         {{"family", Kind::string},
          {"mean", Kind::number},
          {"sd", Kind::number},
          {"tail_exponent", Kind::number},
          {"graft_prob", Kind::number},
          {"graft_stress", Kind::number},
          {"weibull_shape", Kind::number},
          {"weibull_scale", Kind::number},
          {"multiplier", Kind::number},
          {"core_scale", Kind::number},
          {"erf_scale", Kind::number}}},
        {"sampling",
         {{"count", Kind::integer},
          {"seed", Kind::integer},
          {"threads", Kind::integer},
          {"record_curves", Kind::boolean},
          {"bins", Kind::integer}}},
        {"models",
         {{"N", Kind::integer},
          {"eta_a", Kind::numbers},
          {"nu1", Kind::integers},
          {"eta_b", Kind::number},
          {"nu2", Kind::integer},
          {"eta2", Kind::number},
          {"calibrate", Kind::boolean},
          {"calibration_rows", Kind::integer},
          {"calibration_cols", Kind::integer},
          {"threshold", Kind::number},
          {"sigma_min", Kind::number},
          {"sigma_max", Kind::number},
          {"points", Kind::integer}}},
        {"damage", {{"pattern", Kind::string}, {"links", Kind::integers}}},
        {"sweep", {{"N", Kind::integer}, {"ratios", Kind::strings}, {"points", Kind::integer}}},
        {"outputs", {{"directory", Kind::string}, {"svg", Kind::boolean}}},
    };
    return s;
}

bool is_int(const TomlValue& v) { return std::holds_alternative<std::int64_t>(v.v); }

bool matches(const TomlValue& v, Kind k)
{
    const auto* arr = std::get_if<TomlArray>(&v.v);
    auto all = [&](auto pred) {
        if (!arr) {
            return pred(v);
        }
        for (const auto& x : *arr) {
            if (!pred(x)) {
                return false;
            }
        }
        return true;
    };
    switch (k) {
    case Kind::integer: return is_int(v);
    case Kind::number: return v.is_number();
    case Kind::boolean: return std::holds_alternative<bool>(v.v);
    case Kind::string: return std::holds_alternative<std::string>(v.v);
    case Kind::numbers: return all([](const TomlValue& x) { return x.is_number(); });
    case Kind::integers: return all(is_int);
    case Kind::strings:
        return all([](const TomlValue& x) { return std::holds_alternative<std::string>(x.v); });
    }
    return false;
}

const char* kind_name(Kind k)
{
    switch (k) {
    case Kind::integer: return "an integer";
    case Kind::number: return "a number";
    case Kind::boolean: return "a boolean";
    case Kind::string: return "a string";
    case Kind::numbers: return "a number or array of numbers";
    case Kind::integers: return "an integer or array of integers";
    case Kind::strings: return "a string or array of strings";
    }
    return "?";
}

}  // namespace

void validate(const TomlDocument& doc)
{
    for (const auto& [name, table] : doc.tables) {
        const auto t = schema().find(name);
        if (t == schema().end()) {
            throw ConfigError("unknown table [" + name + "]");
        }
        for (const auto& [key, value] : table) {
            const auto k = t->second.find(key);
            if (k == t->second.end()) {
                throw ConfigError("unknown key '" + key + "' in [" + name + "]");
            }
            if (!matches(value, k->second)) {
                throw ConfigError("key " + name + "." + key + " must be " +
                                  kind_name(k->second));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Config

Config::Config(TomlDocument doc) : doc_(std::move(doc)) { validate(doc_); }

void Config::require(const std::string& table) const
{
    if (!doc_.has(table)) {
        throw ConfigError("missing table [" + table + "]");
    }
}

const TomlValue& Config::at(const std::string& table, const std::string& key) const
{
    if (!doc_.has(table)) {
        throw ConfigError("missing table [" + table + "] (needed for key '" + key + "')");
    }
    const auto* v = doc_.find(table, key);
    if (!v) {
        throw ConfigError("missing key " + table + "." + key);
    }
    return *v;
}

double Config::number(const std::string& table, const std::string& key) const
{
    const auto& v = at(table, key);
    if (!v.is_number()) {
        throw ConfigError("key " + table + "." + key + " must be a number");
    }
    return v.as_number();
}

double Config::number(const std::string& table, const std::string& key, double fallback) const
{
    return has(table, key) ? number(table, key) : fallback;
}

std::int64_t Config::integer(const std::string& table, const std::string& key) const
{
    const auto& v = at(table, key);
    if (!is_int(v)) {
        throw ConfigError("key " + table + "." + key + " must be an integer");
    }
    return std::get<std::int64_t>(v.v);
}

std::int64_t Config::integer(const std::string& table, const std::string& key,
                             std::int64_t fallback) const
{
    return has(table, key) ? integer(table, key) : fallback;
}

bool Config::boolean(const std::string& table, const std::string& key, bool fallback) const
{
    if (!has(table, key)) {
        return fallback;
    }
    const auto& v = at(table, key);
    if (const auto* b = std::get_if<bool>(&v.v)) {
        return *b;
    }
    throw ConfigError("key " + table + "." + key + " must be a boolean");
}

std::string Config::string(const std::string& table, const std::string& key,
                           const std::string& fallback) const
{
    if (!has(table, key)) {
        return fallback;
    }
    const auto& v = at(table, key);
    if (const auto* s = std::get_if<std::string>(&v.v)) {
        return *s;
    }
    throw ConfigError("key " + table + "." + key + " must be a string");
}

std::vector<double> Config::numbers(const std::string& table, const std::string& key) const
{
    const auto& v = at(table, key);
    std::vector<double> out;
    if (const auto* arr = std::get_if<TomlArray>(&v.v)) {
        for (const auto& x : *arr) {
            if (!x.is_number()) {
                throw ConfigError("key " + table + "." + key + " must hold numbers");
            }
            out.push_back(x.as_number());
        }
    }
    else if (v.is_number()) {
        out.push_back(v.as_number());
    }
    else {
        throw ConfigError("key " + table + "." + key + " must hold numbers");
    }
    return out;
}

std::vector<std::string> Config::strings(const std::string& table, const std::string& key) const
{
    const auto& v = at(table, key);
    std::vector<std::string> out;
    if (const auto* arr = std::get_if<TomlArray>(&v.v)) {
        for (const auto& x : *arr) {
            const auto* s = std::get_if<std::string>(&x.v);
            if (!s) {
                throw ConfigError("key " + table + "." + key + " must hold strings");
            }
            out.push_back(*s);
        }
    }
    else if (const auto* s = std::get_if<std::string>(&v.v)) {
        out.push_back(*s);
    }
    else {
        throw ConfigError("key " + table + "." + key + " must hold strings");
    }
    return out;
}

FishnetGeometry geometry_from(const Config& cfg)
{
    cfg.require("geometry");
    FishnetGeometry g;
    g.rows = static_cast<int>(cfg.integer("geometry", "rows"));
    g.cols = static_cast<int>(cfg.integer("geometry", "cols"));
    g.link_length = cfg.number("geometry", "link_length", 1.0);
    g.link_area = cfg.number("geometry", "link_area", 1.0);
    g.modulus = cfg.number("geometry", "modulus", 1.0);
    if (g.rows < 1 || g.cols < 1) {
        throw ConfigError("geometry.rows and geometry.cols must be at least 1");
    }
    if (!(g.link_length > 0 && g.link_area > 0 && g.modulus > 0)) {
        throw ConfigError("geometry lengths, area and modulus must be positive");
    }
    return g;
}

Distribution distribution_from(const Config& cfg)
{
    cfg.require("distribution");
    const std::string family = cfg.string("distribution", "family", "");
    if (family.empty()) {
        throw ConfigError("missing key distribution.family");
    }

    std::set<std::string> allowed;
    auto num = [&](const char* key, double fallback) {
        allowed.insert(key);
        return cfg.number("distribution", key, fallback);
    };
    auto check_keys = [&] {
        for (const auto& [key, value] : cfg.document().tables.at("distribution")) {
            if (key != "family" && !allowed.count(key)) {
                throw ConfigError("key distribution." + key + " does not apply to family " +
                                  family);
            }
        }
    };

    try {
        if (family == "grafted_gaussian_power") {
            GraftedGaussianPower::Params p;
            p.mean = num("mean", p.mean);
            p.sd = num("sd", p.sd);
            p.tail_exponent = num("tail_exponent", p.tail_exponent);
            p.graft_stress = num("graft_stress", p.graft_stress);
            p.graft_prob = num("graft_prob", p.graft_prob);
            p.core_scale = num("core_scale", p.core_scale);
            p.erf_scale = num("erf_scale", p.erf_scale);
            check_keys();
            return GraftedGaussianPower(p);
        }
        if (family == "grafted_weibull_gaussian") {
            GraftedWeibullGaussian::Params p;
            p.mean = num("mean", p.mean);
            p.sd = num("sd", p.sd);
            p.weibull_shape = num("weibull_shape", p.weibull_shape);
            p.weibull_scale = num("weibull_scale", p.weibull_scale);
            p.graft_stress = num("graft_stress", p.graft_stress);
            p.graft_prob = num("graft_prob", p.graft_prob);
            p.core_scale = num("core_scale", p.core_scale);
            p.erf_scale = num("erf_scale", p.erf_scale);
            const double given = num("multiplier", 0.0);
            check_keys();
            GraftedWeibullGaussian d(p);
            // The multiplier is fixed by continuity; a supplied one is a cross-check.
            if (given != 0.0 && std::abs(given / d.multiplier() - 1.0) > 1e-3) {
                throw ConfigError("distribution.multiplier = " + std::to_string(given) +
                                  " disagrees with the continuity value " +
                                  std::to_string(d.multiplier()));
            }
            return d;
        }
        if (family == "weibull") {
            Weibull w;
            w.shape = num("weibull_shape", w.shape);
            w.scale = num("weibull_scale", w.scale);
            check_keys();
            if (!(w.shape > 0 && w.scale > 0)) {
                throw ConfigError("weibull_shape and weibull_scale must be positive");
            }
            return w;
        }
        if (family == "gaussian") {
            Gaussian g;
            g.mean = num("mean", g.mean);
            g.sd = num("sd", g.sd);
            check_keys();
            if (!(g.sd > 0)) {
                throw ConfigError("distribution.sd must be positive");
            }
            return g;
        }
    }
    catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown distribution.family '" + family +
                      "' (expected grafted_gaussian_power, grafted_weibull_gaussian, "
                      "weibull or gaussian)");
}

}  // namespace fishnet
