#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ppcf {

/// A PPCF type: `nat` or `σ -> τ`. Cheap to copy; arrows share structure.
class Type {
 public:
  Type() = default;  // nat

  static Type nat() { return Type(); }
  static Type arrow(Type dom, Type cod) {
    Type t;
    t.arrow_ = std::make_shared<const std::pair<Type, Type>>(std::move(dom), std::move(cod));
    return t;
  }
  /// `args[0] -> args[1] -> ... -> result`.
  static Type curried(const std::vector<Type>& args, Type result) {
    for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, std::move(result));
    return result;
  }

  bool is_nat() const { return !arrow_; }
  bool is_arrow() const { return static_cast<bool>(arrow_); }
  const Type& domain() const { return arrow_->first; }
  const Type& codomain() const { return arrow_->second; }

  friend bool operator==(const Type& a, const Type& b) {
    if (a.arrow_ == b.arrow_) return true;
    if (!a.arrow_ || !b.arrow_) return false;
    return a.domain() == b.domain() && a.codomain() == b.codomain();
  }

  std::size_t hash() const {
    if (is_nat()) return 0x9e37u;
    return domain().hash() * 131u + codomain().hash() * 7u + 1u;
  }

  std::string to_string() const {
    if (is_nat()) return "nat";
    std::string dom = domain().to_string();
    if (domain().is_arrow()) dom = "(" + dom + ")";
    return dom + " -> " + codomain().to_string();
  }

 private:
  std::shared_ptr<const std::pair<Type, Type>> arrow_;
};

/// nat -> ... -> nat with k arguments.
inline Type nat_power(std::size_t k) {
  return Type::curried(std::vector<Type>(k, Type::nat()), Type::nat());
}

}  // namespace ppcf
