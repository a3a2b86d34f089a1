#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qvdp::cli {

/// Shortest-safe decimal form with 17 significant digits; round-trips exactly.
[[nodiscard]] std::string format_number(double v);

/// Appends one CSV row of already formatted fields, LF terminated.
void append_row(std::string& out, const std::vector<std::string>& fields);

/// "dir/name.ext" -> "dir/name"
[[nodiscard]] std::string path_stem(std::string_view path);

}  // namespace qvdp::cli
