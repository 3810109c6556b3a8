#include "ionxxz/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ionxxz/common.hpp"

namespace ionxxz {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

struct Unit {
    const char* name;
    double factor;
};

// Conversions into the base units used throughout: angular frequency in
// rad/s, mass in kg, length in m, wavevectors in 1/m.
constexpr Unit units[] = {
    {"rad_s", 1.0},  {"hz", two_pi}, {"kg", 1.0}, {"amu", 1.66053906660e-27},
    {"m", 1.0},      {"nm", 1e-9},   {"um", 1e-6}, {"inv_m", 1.0},
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& what) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "line %d: ", line);
    throw error("config", buf + what);
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
            return false;
    return true;
}

// Full-token double parse; returns false when trailing characters remain.
bool parse_double(const std::string& token, double* out) {
    if (token.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) return false;
    *out = v;
    return true;
}

std::string render(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace

Config Config::parse(const std::string& source, const std::vector<std::string>& allowed) {
    Config cfg;
    std::istringstream in(source);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash_pos = raw.find('#');
        if (hash_pos != std::string::npos) raw.erase(hash_pos);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;

        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!valid_key(key)) fail(line, "bad key '" + key + "'");
        if (value.empty()) fail(line, "empty value for '" + key + "'");
        if (cfg.find(key)) fail(line, "duplicate key '" + key + "'");
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(line, "unknown key '" + key + "'");

        // Split into at most two tokens: number [unit] or a bare word.
        std::istringstream vs(value);
        std::string first, second, extra;
        vs >> first >> second >> extra;
        if (!extra.empty()) fail(line, "too many tokens in value '" + value + "'");

        ConfigEntry entry;
        entry.key = key;
        entry.line = line;

        double scale = 1.0;
        std::string body = first;
        if (body.rfind("2pi*", 0) == 0) {
            scale = two_pi;
            body = body.substr(4);
        }
        double num = 0.0;
        if (parse_double(body, &num)) {
            if (!second.empty()) {
                bool known = false;
                for (const Unit& u : units)
                    if (second == u.name) {
                        scale *= u.factor;
                        known = true;
                        break;
                    }
                if (!known) fail(line, "unknown unit '" + second + "'");
            }
            entry.numeric = true;
            entry.number = scale * num;
            entry.text = render(entry.number);
        } else {
            if (scale != 1.0 || !second.empty())
                fail(line, "cannot parse value '" + value + "'");
            entry.text = first;
        }
        cfg.entries_.push_back(entry);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path, const std::vector<std::string>& allowed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("config", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str(), allowed);
    } catch (const error& e) {
        throw error("config", path + ": " + e.what());
    }
}

const ConfigEntry* Config::find(const std::string& key) const {
    for (const ConfigEntry& e : entries_)
        if (e.key == key) return &e;
    return nullptr;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

double Config::number(const std::string& key) const {
    const ConfigEntry* e = find(key);
    if (!e) throw error("config", "missing key '" + key + "'");
    if (!e->numeric) throw error("config", "key '" + key + "' is not numeric");
    return e->number;
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long Config::integer(const std::string& key) const {
    const double v = number(key);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v)))
        throw error("config", "key '" + key + "' must be an integer");
    return static_cast<long>(r);
}

long Config::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::string Config::text(const std::string& key) const {
    const ConfigEntry* e = find(key);
    if (!e) throw error("config", "missing key '" + key + "'");
    return e->text;
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    const ConfigEntry* e = find(key);
    return e ? e->text : fallback;
}

void Config::set_number(const std::string& key, double value) {
    ConfigEntry* e = const_cast<ConfigEntry*>(find(key));
    if (!e) {
        entries_.push_back({});
        e = &entries_.back();
        e->key = key;
    }
    e->numeric = true;
    e->number = value;
    e->text = render(value);
}

void Config::set_text(const std::string& key, const std::string& value) {
    ConfigEntry* e = const_cast<ConfigEntry*>(find(key));
    if (!e) {
        entries_.push_back({});
        e = &entries_.back();
        e->key = key;
    }
    e->numeric = false;
    e->number = 0.0;
    e->text = value;
}

std::string Config::serialize() const {
    std::vector<const ConfigEntry*> sorted;
    sorted.reserve(entries_.size());
    for (const ConfigEntry& e : entries_) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(),
              [](const ConfigEntry* a, const ConfigEntry* b) { return a->key < b->key; });
    std::string out;
    for (const ConfigEntry* e : sorted) {
        out += e->key;
        out += " = ";
        out += e->text;
        out += '\n';
    }
    return out;
}

uint64_t Config::hash() const { return fnv1a64(serialize()); }

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}
