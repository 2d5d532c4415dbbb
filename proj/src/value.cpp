#include "sqlbound/value.hpp"

namespace sqlbound {

std::string Value::to_string() const {
  switch (kind_) {
  case Kind::Null: return "Null";
  case Kind::Bool: return payload_ ? "true" : "false";
  case Kind::Int: return std::to_string(payload_);
  }
  return "?";
}

std::string row_to_string(const Row& row) {
  std::string s = "(";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) s += ", ";
    s += row[i].to_string();
  }
  return s + ")";
}

TriBool tri_and(TriBool a, TriBool b) {
  if (a == TriBool::False || b == TriBool::False) return TriBool::False;
  if (a == TriBool::True && b == TriBool::True) return TriBool::True;
  return TriBool::Null;
}

TriBool tri_or(TriBool a, TriBool b) {
  if (a == TriBool::True || b == TriBool::True) return TriBool::True;
  if (a == TriBool::False && b == TriBool::False) return TriBool::False;
  return TriBool::Null;
}

TriBool tri_not(TriBool a) {
  switch (a) {
  case TriBool::True: return TriBool::False;
  case TriBool::False: return TriBool::True;
  default: return TriBool::Null;
  }
}

const char* to_string(TriBool t) {
  switch (t) {
  case TriBool::True: return "true";
  case TriBool::False: return "false";
  default: return "null";
  }
}

} // namespace sqlbound
