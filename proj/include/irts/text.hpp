#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace irts {

/// Shortest decimal text that parses back to exactly `x`. NaN renders as "NaN".
std::string format_number(double x);

/// Parses the whole of `text` as a float (leading/trailing blanks allowed).
/// Accepts "nan"/"inf" spellings; returns nullopt on any other trailing input.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace irts
