#include "tabqa/exact_json.hpp"

#include <cmath>
#include <optional>

namespace tabqa::json_exact {

namespace {

using nlohmann::json;

// Forwards everything to the stock DOM builder except floating literals.
class DecimalPreservingSax {
 public:
  explicit DecimalPreservingSax(json& root) : dom_(root, true) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(json::number_float_t, const json::string_t& raw) {
    json::string_t key = kDecimalKey;
    json::string_t literal = raw;
    return dom_.start_object(1) && dom_.key(key) && dom_.string(literal) &&
           dom_.end_object();
  }
  bool string(json::string_t& v) { return dom_.string(v); }
  bool binary(json::binary_t& v) { return dom_.binary(v); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(json::string_t& k) { return dom_.key(k); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& token,
                   const nlohmann::detail::exception& ex) {
    return dom_.parse_error(pos, token, ex);
  }

 private:
  nlohmann::detail::json_sax_dom_parser<json> dom_;
};

bool is_marker(const json& value) {
  return value.is_object() && value.size() == 1 && value.contains(kDecimalKey) &&
         value.at(kDecimalKey).is_string();
}

void dump_into(const json& value, std::string& out) {
  switch (value.type()) {
    case json::value_t::object: {
      if (is_marker(value)) {
        auto d = Decimal::try_parse(value.at(kDecimalKey).get_ref<const std::string&>());
        out += d ? d->to_string() : "null";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : value.items()) {
        if (!first) out += ',';
        first = false;
        out += json(k).dump();
        out += ':';
        dump_into(v, out);
      }
      out += '}';
      return;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : value) {
        if (!first) out += ',';
        first = false;
        dump_into(v, out);
      }
      out += ']';
      return;
    }
    default:
      out += value.dump();
  }
}

}  // namespace

json parse(std::string_view text) {
  json root;
  DecimalPreservingSax sax(root);
  json::sax_parse(text.begin(), text.end(), &sax);
  return root;
}

std::string dump(const json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

json from_decimal(const Decimal& value) {
  return json{{kDecimalKey, value.to_string()}};
}

std::optional<Decimal> to_decimal(const json& value) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) {
      return Decimal::try_parse(std::to_string(value.get<std::uint64_t>()));
    }
    return Decimal::from_int(value.get<std::int64_t>());
  }
  if (value.is_number_float()) {
    double v = value.get<double>();
    if (!std::isfinite(v)) return std::nullopt;
    return Decimal::from_double(v);
  }
  if (is_marker(value)) {
    return Decimal::try_parse(value.at(kDecimalKey).get_ref<const std::string&>());
  }
  return std::nullopt;
}

bool is_number(const json& value) { return value.is_number() || is_marker(value); }

}  // namespace tabqa::json_exact
