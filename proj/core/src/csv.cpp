#include "ionxxz/csv.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "ionxxz/common.hpp"
#include "ionxxz/version.hpp"

namespace ionxxz {

void CsvTable::column(const std::string& name, const std::string& unit) {
    columns.push_back({name, unit});
}

void CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw error("csv", "row width does not match the declared columns");
    rows.push_back(std::move(cells));
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string format_integer(long value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%ld", value);
    return buf;
}

std::string render_csv(const CsvTable& table, bool with_timestamp) {
    std::ostringstream out;
    out << "# schema: " << table.schema << '\n';
    out << "# columns:";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? ", " : " ") << table.columns[i].name << " [" << table.columns[i].unit << "]";
    out << '\n';
    char hashbuf[24];
    std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                  static_cast<unsigned long long>(table.config_hash));
    out << "# config_hash: " << hashbuf << '\n';
    out << "# code_version: " << version_string << '\n';
    if (with_timestamp) {
        const std::time_t now = std::time(nullptr);
        std::tm utc{};
        gmtime_r(&now, &utc);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
        out << "# generated: " << stamp << '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i].name;
    out << '\n';
    for (const std::vector<std::string>& cells : table.rows) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
    return out.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("io", "cannot write '" + path + "'");
    out << render_csv(table);
    if (!out) throw error("io", "short write to '" + path + "'");
}

std::vector<std::string> csv_body_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') lines.push_back(line);
    return lines;
}

}
