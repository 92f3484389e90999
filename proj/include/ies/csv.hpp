#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace ies::csv {

/// Header-first CSV table. Lines starting with '#' are metadata and are
/// collected separately; blank lines are skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> metadata;

    /// Index of a named column; throws ConfigError naming the file when absent.
    std::size_t column(const std::string& name) const;
    std::string source;
};

Table read(const std::filesystem::path& path);
Table parse(const std::string& text, const std::string& source = "<memory>");

double to_double(const std::string& cell, const std::string& context);
long long to_integer(const std::string& cell, const std::string& context);

/// Shortest round-trip representation of a double.
std::string format_double(double value);

/// Writes "# key=value" lines followed by nothing else; callers add the header.
void write_metadata(std::ostream& out, const std::vector<std::string>& metadata);

}  // namespace ies::csv
