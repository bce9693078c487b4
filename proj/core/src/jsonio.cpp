#include "osa/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace osa {

namespace {

void appendEscaped(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void appendNumber(std::string& out, double d) {
  if (!std::isfinite(d)) {
    out += "null";
    return;
  }
  double r = std::nearbyint(d);
  if (r == d && std::fabs(d) < 9.007199254740992e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(r));
    out += buf;
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  out += buf;
}

void writeValue(std::string& out, const JsonValue& v, int depth) {
  auto indent = [&](int d) { out.append(static_cast<size_t>(d) * 2, ' '); };
  switch (v.kind) {
    case JsonValue::Kind::Null: out += "null"; break;
    case JsonValue::Kind::Bool: out += v.boolean ? "true" : "false"; break;
    case JsonValue::Kind::Number: appendNumber(out, v.number); break;
    case JsonValue::Kind::String: appendEscaped(out, v.string); break;
    case JsonValue::Kind::Array:
      if (v.array.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < v.array.size(); ++i) {
        indent(depth + 1);
        writeValue(out, v.array[i], depth + 1);
        if (i + 1 < v.array.size()) out += ',';
        out += '\n';
      }
      indent(depth);
      out += ']';
      break;
    case JsonValue::Kind::Object:
      if (v.object.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      {
        size_t i = 0;
        for (const auto& [key, val] : v.object) {
          indent(depth + 1);
          appendEscaped(out, key);
          out += ": ";
          writeValue(out, val, depth + 1);
          if (++i < v.object.size()) out += ',';
          out += '\n';
        }
      }
      indent(depth);
      out += '}';
      break;
  }
}

JsonValue fromNlohmann(const nlohmann::json& j) {
  JsonValue v;
  switch (j.type()) {
    case nlohmann::json::value_t::null: break;
    case nlohmann::json::value_t::boolean:
      v = JsonValue::of(j.get<bool>());
      break;
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
    case nlohmann::json::value_t::number_float:
      v = JsonValue::of(j.get<double>());
      break;
    case nlohmann::json::value_t::string:
      v = JsonValue::of(j.get<std::string>());
      break;
    case nlohmann::json::value_t::array:
      v = JsonValue::makeArray();
      for (const auto& item : j) v.array.push_back(fromNlohmann(item));
      break;
    case nlohmann::json::value_t::object:
      v = JsonValue::makeObject();
      for (auto it = j.begin(); it != j.end(); ++it)
        v.object[it.key()] = fromNlohmann(it.value());
      break;
    default:
      throw ValidationFailure("json: unsupported value type");
  }
  return v;
}

}  // namespace

std::string write_json(const JsonValue& v) {
  std::string out;
  writeValue(out, v, 0);
  out += '\n';
  return out;
}

JsonValue parse_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ValidationFailure("json: malformed document");
  return fromNlohmann(j);
}

}  // namespace osa
