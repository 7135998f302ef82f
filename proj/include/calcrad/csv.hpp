#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace calcrad::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC 4180-style reader: comma separated, optional double quotes, CRLF tolerant, blank lines skipped.
[[nodiscard]] Table parse(std::string_view text);
[[nodiscard]] Table read_file(const std::filesystem::path& path);

[[nodiscard]] std::string quote(std::string_view field);

/// Shortest decimal that round-trips to the same double.
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] double parse_double(std::string_view text, bool* ok = nullptr);

}  // namespace calcrad::csv
