#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace il {

namespace detail {

template <typename Tag>
struct Ident {
  uint32_t index = 0;
  friend constexpr auto operator<=>(const Ident&, const Ident&) = default;
};

struct VarTag {};
struct LabelTag {};
struct ActionTag {};

}  // namespace detail

// Names of values, functions and system calls live in three separate interned
// alphabets. Within an alphabet, equal indices mean equal names, and the index
// gives a total order (the register-assignment heuristic relies on it for
// variables).
using Var = detail::Ident<detail::VarTag>;
using Label = detail::Ident<detail::LabelTag>;
using Action = detail::Ident<detail::ActionTag>;

// Interning. Safe for concurrent use; the tables are the only shared state in
// the library.
Var var(std::string_view name);
Label label(std::string_view name);
Action action(std::string_view name);

// Variable with the given index. Assigns a synthetic printable name if nothing
// was interned at that index yet; indices stay dense.
Var var_at(uint32_t index);

std::string name(Var v);
std::string name(Label f);
std::string name(Action a);

size_t var_count();

// Sorted set of variables; iteration order is index order.
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<Var> vs);
  explicit VarSet(std::span<const Var> vs);

  bool contains(Var v) const;
  void insert(Var v);
  void erase(Var v);

  VarSet unioned(const VarSet& other) const;
  VarSet intersect(const VarSet& other) const;
  VarSet minus(const VarSet& other) const;
  VarSet minus(Var v) const;
  VarSet minus(std::span<const Var> vs) const;

  bool subset_of(const VarSet& other) const;
  bool disjoint(const VarSet& other) const;
  bool disjoint(std::span<const Var> vs) const;

  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const VarSet&, const VarSet&) = default;

  std::string to_string() const;

 private:
  std::vector<Var> items_;  // sorted, unique
};

}  // namespace il
