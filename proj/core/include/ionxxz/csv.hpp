#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ionxxz {

struct CsvColumn {
    std::string name;
    std::string unit; // "1" for dimensionless
};

// Tabular output with a commented provenance header. Only the '#' lines may
// vary between runs (they carry the generation timestamp); the column header
// and every data row are rendered byte-identically for identical inputs.
struct CsvTable {
    std::string schema;
    std::vector<CsvColumn> columns;
    std::vector<std::vector<std::string>> rows;
    uint64_t config_hash = 0;

    void column(const std::string& name, const std::string& unit);
    void row(std::vector<std::string> cells);
};

std::string format_number(double value); // shortest round-trip-safe rendering
std::string format_integer(long value);

std::string render_csv(const CsvTable& table, bool with_timestamp = true);
void write_csv(const std::string& path, const CsvTable& table);

// Data portion of a rendered CSV: everything except '#' comment lines.
std::vector<std::string> csv_body_lines(const std::string& content);

}
