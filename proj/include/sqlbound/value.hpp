#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sqlbound {

enum class AttrType { Int, Bool };

class Value {
public:
  enum class Kind { Null, Int, Bool };

  Value() = default;
  static Value null() { return Value(); }
  static Value integer(std::int64_t v) { return Value(Kind::Int, v); }
  static Value boolean(bool b) { return Value(Kind::Bool, b ? 1 : 0); }

  Kind kind() const { return kind_; }
  bool is_null() const { return kind_ == Kind::Null; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  // Bools read as 0/1.
  std::int64_t as_int() const { return payload_; }
  bool as_bool() const { return payload_ != 0; }

  // Value identity: all Nulls equal, Null never equals a non-null.
  friend bool operator==(const Value& a, const Value& b) {
    if (a.is_null() || b.is_null())
      return a.is_null() == b.is_null();
    return a.payload_ == b.payload_;
  }
  // Total order used for canonical sorting: Null first.
  friend bool operator<(const Value& a, const Value& b) {
    if (a.is_null() || b.is_null())
      return a.is_null() && !b.is_null();
    return a.payload_ < b.payload_;
  }

  std::string to_string() const;

private:
  Value(Kind k, std::int64_t p) : kind_(k), payload_(p) {}
  Kind kind_ = Kind::Null;
  std::int64_t payload_ = 0;
};

using Row = std::vector<Value>;

std::string row_to_string(const Row& row);

enum class TriBool { False, True, Null };

TriBool tri_and(TriBool a, TriBool b);
TriBool tri_or(TriBool a, TriBool b);
TriBool tri_not(TriBool a);
const char* to_string(TriBool t);

} // namespace sqlbound
