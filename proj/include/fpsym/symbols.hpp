// Symbol declarations and derivative multi-indices.
//
// A DerivIndex is an unordered multiset of differentiation directions,
// stored as a sorted list of variable names; mixed partials commute, so
// u_xt and u_tx denote the same jet coordinate.
#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpsym {

struct Error : std::runtime_error {
  enum class Kind { parse, undeclared, domain, eval, order, config };
  Kind kind;
  Error(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

class DerivIndex {
public:
  DerivIndex() = default;
  explicit DerivIndex(std::vector<std::string> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
  }

  int order() const { return static_cast<int>(vars_.size()); }
  bool empty() const { return vars_.empty(); }

  int count(const std::string& v) const {
    return static_cast<int>(std::count(vars_.begin(), vars_.end(), v));
  }
  bool contains(const std::string& v) const { return count(v) > 0; }

  DerivIndex plus(const std::string& v) const {
    DerivIndex d = *this;
    d.vars_.insert(std::upper_bound(d.vars_.begin(), d.vars_.end(), v), v);
    return d;
  }

  // Removes one occurrence of v; precondition contains(v).
  DerivIndex minus(const std::string& v) const {
    DerivIndex d = *this;
    auto it = std::find(d.vars_.begin(), d.vars_.end(), v);
    if (it == d.vars_.end())
      throw Error(Error::Kind::domain, "DerivIndex::minus: direction not present: " + v);
    d.vars_.erase(it);
    return d;
  }

  // True if every direction of `other` occurs here with at least the same multiplicity.
  bool covers(const DerivIndex& other) const {
    return std::includes(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end());
  }

  const std::vector<std::string>& vars() const { return vars_; }

  // Concatenated direction names, e.g. {t,x} -> "tx". Only meaningful for
  // single-letter variable names, which is all the grammar admits.
  std::string suffix() const {
    std::string s;
    for (const auto& v : vars_) s += v;
    return s;
  }

  auto operator<=>(const DerivIndex&) const = default;

private:
  std::vector<std::string> vars_; // sorted
};

// Declared symbols an expression may reference. The parameters a1 and a2
// are reserved and always present.
class SymbolContext {
public:
  SymbolContext() : parameters_{"a1", "a2"} {}

  SymbolContext& independent(std::initializer_list<std::string> names) {
    for (const auto& n : names) declare(independent_, n);
    return *this;
  }
  SymbolContext& dependent(std::initializer_list<std::string> names) {
    for (const auto& n : names) declare(dependent_, n);
    return *this;
  }
  SymbolContext& parameter(std::initializer_list<std::string> names) {
    for (const auto& n : names) declare(parameters_, n);
    return *this;
  }
  SymbolContext& function(const std::string& name, std::vector<std::string> args) {
    check_fresh(name);
    functions_[name] = std::move(args);
    return *this;
  }

  const std::vector<std::string>& independents() const { return independent_; }
  const std::vector<std::string>& dependents() const { return dependent_; }
  const std::vector<std::string>& parameters() const { return parameters_; }
  const std::map<std::string, std::vector<std::string>>& functions() const { return functions_; }

  bool is_independent(const std::string& n) const { return contains(independent_, n); }
  bool is_dependent(const std::string& n) const { return contains(dependent_, n); }
  bool is_parameter(const std::string& n) const { return contains(parameters_, n); }
  bool is_function(const std::string& n) const { return functions_.count(n) > 0; }

  const std::vector<std::string>& function_args(const std::string& n) const {
    auto it = functions_.find(n);
    if (it == functions_.end())
      throw Error(Error::Kind::undeclared, "undeclared function symbol: " + n);
    return it->second;
  }

private:
  static bool contains(const std::vector<std::string>& v, const std::string& n) {
    return std::find(v.begin(), v.end(), n) != v.end();
  }
  void check_fresh(const std::string& n) const {
    if (is_independent(n) || is_dependent(n) || is_parameter(n) || is_function(n))
      throw Error(Error::Kind::config, "symbol declared twice: " + n);
  }
  void declare(std::vector<std::string>& v, const std::string& n) {
    check_fresh(n);
    v.push_back(n);
  }

  std::vector<std::string> independent_;
  std::vector<std::string> dependent_;
  std::vector<std::string> parameters_;
  std::map<std::string, std::vector<std::string>> functions_;
};

} // namespace fpsym
