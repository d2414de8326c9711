#pragma once

#include "ppcf/term.hpp"

#include <set>
#include <string>
#include <vector>

namespace ppcf {

namespace detail {

class Printer {
 public:
  explicit Printer(const Term& root) : avoid_(free_vars(root)) {}

  std::string print(const Term& t, int level) {
    switch (t.kind()) {
      case Kind::Num:
        return std::to_string(t.numeral());
      case Kind::Var:
        return t.name();
      case Kind::Bound:
        if (t.index() >= names_.size()) return "#" + std::to_string(t.index());
        return names_[names_.size() - 1 - t.index()];
      case Kind::Coin: {
        const Rational& p = t.probability();
        return "coin(" + (p.get_den() == 1 ? p.get_num().get_str() : format_rational(p)) + ")";
      }
      case Kind::Hole:
        return "[]";
      case Kind::Succ:
        return paren(level > 2, "succ " + print(t.body(), 2)) ;
      case Kind::App:
        return paren(level > 1, print(t.fun(), 1) + " " + print(t.arg(), 2));
      case Kind::Abs: {
        std::string x = bind(t.hint());
        std::string body = print(t.body(), 0);
        names_.pop_back();
        return paren(level > 0, "\\" + x + ":" + t.annotation().to_string() + ". " + body);
      }
      case Kind::Fix:
        return paren(level > 0, "fix " + print(t.body(), 0));
      case Kind::If: {
        std::string s = print(t.scrutinee(), 0);
        std::string p = print(t.zero_branch(), 0);
        std::string z = bind(t.hint());
        std::string r = print(t.succ_branch(), 0);
        names_.pop_back();
        return paren(level > 0, "if " + s + " then " + p + " else [" + z + "] " + r);
      }
    }
    return "?";
  }

 private:
  static std::string paren(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

  // Binder names never shadow: a hint is primed until it clashes with no free
  // variable and no binder in scope.
  std::string bind(const std::string& hint) {
    std::string name = hint.empty() ? "x" : hint;
    auto taken = [&](const std::string& n) {
      if (avoid_.count(n)) return true;
      for (const auto& s : names_)
        if (s == n) return true;
      return false;
    };
    while (taken(name)) name += "'";
    names_.push_back(name);
    return name;
  }

  std::set<std::string> avoid_;
  std::vector<std::string> names_;
};

}  // namespace detail

/// Concrete syntax accepted by `parse`; parse(pretty(M)) is alpha-equivalent to M.
inline std::string pretty(const Term& t) { return detail::Printer(t).print(t, 0); }

}  // namespace ppcf
