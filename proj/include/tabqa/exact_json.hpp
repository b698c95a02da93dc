#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tabqa/decimal.hpp"

namespace tabqa::json_exact {

/// JSON handling that never routes non-integer numbers through `double`.
///
/// `parse` keeps integers as native JSON integers and turns every other
/// numeric literal into a marker object `{"$decimal": "<literal>"}`. `dump`
/// writes marker objects back out as bare numerals in minimal form, so
/// parse/dump preserves every value exactly (`2.50` comes back as `2.5`).

inline constexpr const char* kDecimalKey = "$decimal";

/// Throws nlohmann::json::parse_error on malformed input.
nlohmann::json parse(std::string_view text);

/// Compact output, same layout as `nlohmann::json::dump()`.
std::string dump(const nlohmann::json& value);

nlohmann::json from_decimal(const Decimal& value);

/// Accepts native integers, marker objects and (lossy) native floats.
/// Returns nullopt for anything else.
std::optional<Decimal> to_decimal(const nlohmann::json& value);

bool is_number(const nlohmann::json& value);

}  // namespace tabqa::json_exact
