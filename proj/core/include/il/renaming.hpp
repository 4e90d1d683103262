#pragma once

#include <map>

#include "il/symbols.hpp"

namespace il {

// Total map on variables with identity default and finite support.
class Renaming {
 public:
  Renaming() = default;

  Var operator()(Var x) const {
    auto it = map_.find(x);
    return it == map_.end() ? x : it->second;
  }

  VarSet operator()(const VarSet& xs) const {
    VarSet out;
    for (Var x : xs) out.insert((*this)(x));
    return out;
  }

  void set(Var from, Var to) {
    if (from == to)
      map_.erase(from);
    else
      map_[from] = to;
  }

  [[nodiscard]] Renaming with(Var from, Var to) const {
    Renaming out = *this;
    out.set(from, to);
    return out;
  }

  bool injective_on(const VarSet& xs) const {
    VarSet image = (*this)(xs);
    return image.size() == xs.size();
  }

  const std::map<Var, Var>& entries() const { return map_; }

  friend bool operator==(const Renaming&, const Renaming&) = default;

 private:
  std::map<Var, Var> map_;
};

// (second ∘ first): apply `first`, then `second`.
inline Renaming compose(const Renaming& second, const Renaming& first) {
  Renaming out;
  for (const auto& [from, to] : first.entries()) out.set(from, second(to));
  for (const auto& [from, to] : second.entries())
    if (!first.entries().contains(from)) out.set(from, to);
  return out;
}

}  // namespace il
