#pragma once
#include <map>
#include <string>
#include <vector>

#include "osa/errors.hpp"

namespace osa {

// Minimal JSON document tree with deterministic emission: object keys are
// stored sorted (std::map), floats print with 17 significant digits, so a
// given tree always serializes to identical bytes.
struct JsonValue {
  enum class Kind { Null, Bool, Number, String, Array, Object };
  Kind kind = Kind::Null;

  bool boolean = false;
  double number = 0.0;
  std::string string;
  std::vector<JsonValue> array;
  std::map<std::string, JsonValue> object;

  JsonValue() = default;

  static JsonValue null() { return JsonValue(); }
  static JsonValue of(bool b) {
    JsonValue v;
    v.kind = Kind::Bool;
    v.boolean = b;
    return v;
  }
  static JsonValue of(double d) {
    JsonValue v;
    v.kind = Kind::Number;
    v.number = d;
    return v;
  }
  static JsonValue of(long n) { return of(static_cast<double>(n)); }
  static JsonValue of(int n) { return of(static_cast<double>(n)); }
  static JsonValue of(const std::string& s) {
    JsonValue v;
    v.kind = Kind::String;
    v.string = s;
    return v;
  }
  static JsonValue of(const char* s) { return of(std::string(s)); }
  static JsonValue makeArray() {
    JsonValue v;
    v.kind = Kind::Array;
    return v;
  }
  static JsonValue makeObject() {
    JsonValue v;
    v.kind = Kind::Object;
    return v;
  }

  bool isNull() const { return kind == Kind::Null; }
  bool has(const std::string& key) const {
    return kind == Kind::Object && object.count(key) > 0;
  }
  const JsonValue& at(const std::string& key) const {
    if (kind != Kind::Object) throw ValidationFailure("json: not an object");
    auto it = object.find(key);
    if (it == object.end()) throw ValidationFailure("json: missing key '" + key + "'");
    return it->second;
  }
  const std::string& asString() const {
    if (kind != Kind::String) throw ValidationFailure("json: not a string");
    return string;
  }
  double asNumber() const {
    if (kind != Kind::Number) throw ValidationFailure("json: not a number");
    return number;
  }
  bool asBool() const {
    if (kind != Kind::Bool) throw ValidationFailure("json: not a bool");
    return boolean;
  }
  const std::vector<JsonValue>& asArray() const {
    if (kind != Kind::Array) throw ValidationFailure("json: not an array");
    return array;
  }
};

// Serialize with 2-space indentation, sorted keys, and floats rendered with
// 17 significant digits (integers within double range print as integers).
// Non-finite numbers emit as null. Output ends with a newline.
std::string write_json(const JsonValue& v);

// Strict parse of one JSON document (throws ValidationFailure on any error).
JsonValue parse_json(const std::string& text);

}  // namespace osa
