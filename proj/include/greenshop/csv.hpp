#pragma once

#include <string>
#include <vector>

namespace greenshop {

/// Splits one CSV line on commas outside double quotes and trims blanks.
std::vector<std::string> split_csv_line(const std::string &line);

/// Field text safe for split_csv_line: quotes become apostrophes, line
/// breaks become spaces, and fields holding commas are wrapped in quotes.
std::string csv_field(const std::string &text);

} // namespace greenshop
