#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ionxxz {

struct ConfigEntry {
    std::string key;
    std::string text;    // canonical value rendering
    double number = 0.0; // converted to base units (rad/s, kg, m, 1/m)
    bool numeric = false;
    int line = 0;
};

// Line-oriented `key = value` configuration. '#' starts a comment, keys are
// [a-z0-9_.]+ and may appear once. Numeric values take an optional `2pi*`
// prefix and an optional unit suffix (rad_s, hz, kg, amu, m, nm, um, inv_m);
// everything converts to rad/s, kg, m, 1/m on parse. Unknown keys are
// rejected when an allow-list is given, with the offending line number.
class Config {
  public:
    static Config parse(const std::string& source,
                        const std::vector<std::string>& allowed = {});
    static Config parse_file(const std::string& path,
                             const std::vector<std::string>& allowed = {});

    bool has(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;

    void set_number(const std::string& key, double value);
    void set_text(const std::string& key, const std::string& value);

    // Canonical form: keys sorted, numbers re-rendered after unit conversion.
    // Two configs serialize identically iff they mean the same thing.
    std::string serialize() const;
    uint64_t hash() const; // FNV-1a 64 over serialize()

    const std::vector<ConfigEntry>& entries() const { return entries_; }

  private:
    const ConfigEntry* find(const std::string& key) const;
    std::vector<ConfigEntry> entries_;
};

uint64_t fnv1a64(const std::string& bytes);

}
