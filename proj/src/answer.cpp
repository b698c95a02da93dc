#include "tabqa/answer.hpp"

#include "tabqa/error.hpp"
#include "tabqa/exact_json.hpp"

namespace tabqa {

using nlohmann::json;

std::string_view to_string(AnswerType type) noexcept {
  switch (type) {
    case AnswerType::Boolean: return "boolean";
    case AnswerType::Number: return "number";
    case AnswerType::Category: return "category";
    case AnswerType::ListCategory: return "list[category]";
    case AnswerType::ListNumber: return "list[number]";
  }
  return "unknown";
}

std::optional<AnswerType> answer_type_from_string(std::string_view tag) {
  for (AnswerType t : kAllAnswerTypes) {
    if (to_string(t) == tag) return t;
  }
  return std::nullopt;
}

bool is_list(AnswerType type) noexcept {
  return type == AnswerType::ListCategory || type == AnswerType::ListNumber;
}

json answer_to_json(const TypedAnswer& answer) {
  json out;
  out["type"] = std::string(to_string(answer.type()));
  switch (answer.type()) {
    case AnswerType::Boolean: out["value"] = answer.as_boolean(); break;
    case AnswerType::Number: out["value"] = json_exact::from_decimal(answer.as_number()); break;
    case AnswerType::Category: out["value"] = answer.as_category(); break;
    case AnswerType::ListCategory: out["value"] = answer.as_list_category(); break;
    case AnswerType::ListNumber: {
      json values = json::array();
      for (const auto& d : answer.as_list_number()) values.push_back(json_exact::from_decimal(d));
      out["value"] = std::move(values);
      break;
    }
  }
  return out;
}

TypedAnswer answer_from_json(const json& value) {
  auto fail = [](const std::string& why) -> TypedAnswer {
    throw Error(ErrorKind::MalformedAnswer, why);
  };
  if (!value.is_object()) return fail("answer must be a JSON object");
  if (!value.contains("type") || !value["type"].is_string()) return fail("missing string field 'type'");
  if (!value.contains("value")) return fail("missing field 'value'");
  auto type = answer_type_from_string(value["type"].get<std::string>());
  if (!type) return fail("unknown answer type '" + value["type"].get<std::string>() + "'");
  const json& v = value["value"];
  switch (*type) {
    case AnswerType::Boolean:
      if (!v.is_boolean()) return fail("boolean answer requires a JSON boolean value");
      return TypedAnswer::boolean(v.get<bool>());
    case AnswerType::Number: {
      auto d = json_exact::to_decimal(v);
      if (!d) return fail("number answer requires a finite JSON number value");
      return TypedAnswer::number(*d);
    }
    case AnswerType::Category:
      if (!v.is_string()) return fail("category answer requires a JSON string value");
      return TypedAnswer::category(v.get<std::string>());
    case AnswerType::ListCategory: {
      if (!v.is_array()) return fail("list[category] answer requires an array");
      std::vector<std::string> items;
      for (const auto& e : v) {
        if (!e.is_string()) return fail("list[category] elements must be strings");
        items.push_back(e.get<std::string>());
      }
      return TypedAnswer::list_category(std::move(items));
    }
    case AnswerType::ListNumber: {
      if (!v.is_array()) return fail("list[number] answer requires an array");
      std::vector<Decimal> items;
      for (const auto& e : v) {
        auto d = json_exact::to_decimal(e);
        if (!d) return fail("list[number] elements must be finite numbers");
        items.push_back(*d);
      }
      return TypedAnswer::list_number(std::move(items));
    }
  }
  return fail("unreachable");
}

std::string serialize_answer(const TypedAnswer& answer) {
  return json_exact::dump(answer_to_json(answer));
}

TypedAnswer parse_answer(std::string_view text) {
  json doc;
  try {
    doc = json_exact::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedAnswer, std::string("invalid JSON: ") + e.what());
  }
  return answer_from_json(doc);
}

std::string display_text(const TypedAnswer& answer) {
  auto quote = [](const std::string& s) {
    return s.find('\'') == std::string::npos ? "'" + s + "'" : "\"" + s + "\"";
  };
  switch (answer.type()) {
    case AnswerType::Boolean: return answer.as_boolean() ? "True" : "False";
    case AnswerType::Number: return answer.as_number().to_string();
    case AnswerType::Category: return answer.as_category();
    case AnswerType::ListCategory: {
      std::string out = "[";
      for (std::size_t i = 0; i < answer.as_list_category().size(); ++i) {
        if (i) out += ", ";
        out += quote(answer.as_list_category()[i]);
      }
      return out + "]";
    }
    case AnswerType::ListNumber: {
      std::string out = "[";
      for (std::size_t i = 0; i < answer.as_list_number().size(); ++i) {
        if (i) out += ", ";
        out += answer.as_list_number()[i].to_string();
      }
      return out + "]";
    }
  }
  return {};
}

}  // namespace tabqa
