#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ionxxz {

// All library failures throw this; category names the module or contract that
// was violated so the CLI can emit machine-readable diagnostics.
class error : public std::runtime_error {
public:
    error(std::string category, const std::string& message)
        : std::runtime_error(category + ": " + message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

}
