#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tabqa/decimal.hpp"

namespace tabqa {

/// The five answer types; declaration order matches TypedAnswer's variant.
enum class AnswerType { Boolean, Number, Category, ListCategory, ListNumber };

inline constexpr AnswerType kAllAnswerTypes[] = {
    AnswerType::Boolean, AnswerType::Number, AnswerType::Category,
    AnswerType::ListCategory, AnswerType::ListNumber};

/// Canonical tags: "boolean", "number", "category", "list[category]",
/// "list[number]".
std::string_view to_string(AnswerType type) noexcept;
std::optional<AnswerType> answer_type_from_string(std::string_view tag);

bool is_list(AnswerType type) noexcept;

/// A typed answer value. The held alternative always agrees with `type()`
/// because the type is derived from the variant index.
class TypedAnswer {
 public:
  using Value = std::variant<bool, Decimal, std::string, std::vector<std::string>,
                             std::vector<Decimal>>;

  static TypedAnswer boolean(bool v) { return TypedAnswer(Value(std::in_place_index<0>, v)); }
  static TypedAnswer number(Decimal v) { return TypedAnswer(Value(std::in_place_index<1>, std::move(v))); }
  static TypedAnswer category(std::string v) { return TypedAnswer(Value(std::in_place_index<2>, std::move(v))); }
  static TypedAnswer list_category(std::vector<std::string> v) { return TypedAnswer(Value(std::in_place_index<3>, std::move(v))); }
  static TypedAnswer list_number(std::vector<Decimal> v) { return TypedAnswer(Value(std::in_place_index<4>, std::move(v))); }

  AnswerType type() const noexcept { return static_cast<AnswerType>(value_.index()); }
  const Value& value() const noexcept { return value_; }

  bool as_boolean() const { return std::get<0>(value_); }
  const Decimal& as_number() const { return std::get<1>(value_); }
  const std::string& as_category() const { return std::get<2>(value_); }
  const std::vector<std::string>& as_list_category() const { return std::get<3>(value_); }
  const std::vector<Decimal>& as_list_number() const { return std::get<4>(value_); }

  friend bool operator==(const TypedAnswer&, const TypedAnswer&) = default;

 private:
  explicit TypedAnswer(Value v) : value_(std::move(v)) {}
  Value value_;
};

/// Canonical JSON, e.g. `{"type":"list[number]","value":[2000,2100,2200]}`.
std::string serialize_answer(const TypedAnswer& answer);
/// Throws Error(MalformedAnswer).
TypedAnswer parse_answer(std::string_view text);

/// Exact-JSON tree forms of the same schema (see json_exact).
nlohmann::json answer_to_json(const TypedAnswer& answer);
TypedAnswer answer_from_json(const nlohmann::json& value);

/// Python-`str()` style rendering used inside prompts:
/// `True`, `35.2`, `Manager`, `['HR', 'IT']`, `[1, 2.5]`.
std::string display_text(const TypedAnswer& answer);

}  // namespace tabqa
