#pragma once

#include <string>
#include <vector>

#include "ionxxz/config.hpp"

namespace ionxxz {

struct DataProduct {
    std::string kind;
    std::vector<std::string> files; // paths written, CSV first
    std::string summary;            // one line for the terminal
};

// Figure-backing product kinds, in catalog order.
const std::vector<std::string>& product_kinds();

// Computes one product and writes its CSV/SVG files. Output directory
// resolution: explicit argument, then the config key `outdir`, then the
// IONXXZ_OUTDIR environment variable, then "out". Unrecognized kinds fail
// with the catalog in the message.
DataProduct make_product(const std::string& kind, const Config& cfg, std::string outdir = "");

}
