#include "sqlbound/schema.hpp"

#include <algorithm>
#include <cctype>

#include "sqlbound/errors.hpp"

namespace sqlbound {

namespace {

bool iequals(const std::string& a, const std::string& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string check_to_string(const CheckPred& p, const RelationSchema& r) {
  auto name = [&](int i) { return r.attrs.at(i).name; };
  return std::visit([&](const auto& n) -> std::string {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, CheckPred::AttrConst>) {
      return name(n.attr) + " " + to_string(n.op) + " " + n.value.to_string();
    } else if constexpr (std::is_same_v<T, CheckPred::AttrAttr>) {
      return name(n.lhs) + " " + to_string(n.op) + " " + name(n.rhs);
    } else if constexpr (std::is_same_v<T, CheckPred::InValues>) {
      std::string s = name(n.attr) + " in [";
      for (std::size_t i = 0; i < n.values.size(); ++i)
        s += (i ? "," : "") + n.values[i].to_string();
      return s + "]";
    } else if constexpr (std::is_same_v<T, CheckPred::And>) {
      return "(" + check_to_string(*n.lhs, r) + " and " + check_to_string(*n.rhs, r) + ")";
    } else if constexpr (std::is_same_v<T, CheckPred::Or>) {
      return "(" + check_to_string(*n.lhs, r) + " or " + check_to_string(*n.rhs, r) + ")";
    } else {
      return "not (" + check_to_string(*n.arg, r) + ")";
    }
  }, p.node);
}

} // namespace

int RelationSchema::index_of(const std::string& attr) const {
  for (std::size_t i = 0; i < attrs.size(); ++i)
    if (iequals(attrs[i].name, attr)) return static_cast<int>(i);
  return -1;
}

Schema::Schema(std::vector<RelationSchema> rels) : rels_(std::move(rels)) {
  for (std::size_t i = 0; i < rels_.size(); ++i) {
    if (rels_[i].attrs.empty())
      throw ResolveError("relation " + rels_[i].name + " has no attributes");
    for (std::size_t j = 0; j < i; ++j)
      if (iequals(rels_[i].name, rels_[j].name))
        throw ResolveError("duplicate relation " + rels_[i].name);
    for (std::size_t a = 0; a < rels_[i].attrs.size(); ++a)
      if (rels_[i].index_of(rels_[i].attrs[a].name) != static_cast<int>(a))
        throw ResolveError("duplicate attribute " + rels_[i].name + "." + rels_[i].attrs[a].name);
  }
}

const RelationSchema* Schema::find(const std::string& name) const {
  for (const auto& r : rels_)
    if (iequals(r.name, name)) return &r;
  return nullptr;
}

const RelationSchema& Schema::at(const std::string& name) const {
  if (auto* r = find(name)) return *r;
  throw ResolveError("unknown relation " + name);
}

int Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < rels_.size(); ++i)
    if (iequals(rels_[i].name, name)) return static_cast<int>(i);
  return -1;
}

const char* to_string(CmpOp op) {
  switch (op) {
  case CmpOp::Lt: return "<";
  case CmpOp::Le: return "<=";
  case CmpOp::Eq: return "=";
  case CmpOp::Ne: return "<>";
  case CmpOp::Gt: return ">";
  case CmpOp::Ge: return ">=";
  }
  return "?";
}

CmpOp flip(CmpOp op) {
  switch (op) {
  case CmpOp::Lt: return CmpOp::Gt;
  case CmpOp::Le: return CmpOp::Ge;
  case CmpOp::Gt: return CmpOp::Lt;
  case CmpOp::Ge: return CmpOp::Le;
  default: return op;
  }
}

CmpOp negate(CmpOp op) {
  switch (op) {
  case CmpOp::Lt: return CmpOp::Ge;
  case CmpOp::Le: return CmpOp::Gt;
  case CmpOp::Eq: return CmpOp::Ne;
  case CmpOp::Ne: return CmpOp::Eq;
  case CmpOp::Gt: return CmpOp::Le;
  case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

std::string to_string(const Constraint& c, const Schema& schema) {
  return std::visit([&](const auto& k) -> std::string {
    using T = std::decay_t<decltype(k)>;
    const auto& r = schema.at(k.rel);
    if constexpr (std::is_same_v<T, PrimaryKey>) {
      std::string s = "PK(" + r.name + ",[";
      for (std::size_t i = 0; i < k.attrs.size(); ++i)
        s += (i ? "," : "") + r.attrs[k.attrs[i]].name;
      return s + "])";
    } else if constexpr (std::is_same_v<T, ForeignKey>) {
      const auto& r2 = schema.at(k.ref_rel);
      return "FK(" + r.name + "," + r.attrs[k.attr].name + "," + r2.name + "," +
             r2.attrs[k.ref_attr].name + ")";
    } else if constexpr (std::is_same_v<T, NotNull>) {
      return "NotNull(" + r.name + "," + r.attrs[k.attr].name + ")";
    } else if constexpr (std::is_same_v<T, Check>) {
      return "Check(" + r.name + ", " + check_to_string(*k.pred, r) + ")";
    } else {
      return "Inc(" + r.name + "," + r.attrs[k.attr].name + "," + std::to_string(k.start) + ")";
    }
  }, c);
}

} // namespace sqlbound
