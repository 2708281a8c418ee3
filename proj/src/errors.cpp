#include "nvcool/errors.hpp"

namespace nvcool {

namespace {

std::string join(const std::vector<ConfigIssue>& issues) {
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) out += '\n';
        if (i.line > 0) out += "line " + std::to_string(i.line) + ": ";
        out += i.message;
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues) : Error(join(issues)), issues_(std::move(issues)) {}

}  // namespace nvcool
