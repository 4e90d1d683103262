#pragma once

#include <optional>
#include <vector>

#include "il/symbols.hpp"

namespace il {

// Ordered list of named definitions, most recent last. Later entries shadow
// earlier ones. An entry carrying nullopt is a retained placeholder that
// behaves as undefined: lookup resolves a name to its most recent entry and
// reports undefined if that entry is a placeholder. Restriction relies on
// placeholders keeping their positions.
template <typename T>
class Ctx {
 public:
  struct Entry {
    Label name;
    std::optional<T> value;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  Ctx() = default;

  void push(Label f, std::optional<T> value) {
    entries_.push_back(Entry{f, std::move(value)});
  }

  [[nodiscard]] Ctx pushed(Label f, std::optional<T> value) const {
    Ctx out = *this;
    out.push(f, std::move(value));
    return out;
  }

  // Most recent entry with this name, placeholder or not.
  const Entry* find(Label f) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      if (it->name == f) return &*it;
    return nullptr;
  }

  std::optional<T> lookup(Label f) const {
    const Entry* e = find(f);
    if (e == nullptr) return std::nullopt;
    return e->value;
  }

  // Prefix of the context up to and including the most recent definition of
  // f. Undefined names (absent or placeholder) cannot be rewound to.
  std::optional<Ctx> rewind(Label f) const {
    for (size_t i = entries_.size(); i-- > 0;) {
      if (entries_[i].name == f) {
        if (!entries_[i].value.has_value()) return std::nullopt;
        Ctx out;
        out.entries_.assign(entries_.begin(), entries_.begin() + i + 1);
        return out;
      }
    }
    return std::nullopt;
  }

  Ctx prefix(size_t n) const {
    Ctx out;
    out.entries_.assign(entries_.begin(), entries_.begin() + n);
    return out;
  }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](size_t i) const { return entries_[i]; }
  const Entry& back() const { return entries_.back(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Ctx&, const Ctx&) = default;

 private:
  std::vector<Entry> entries_;
};

// Keeps entries whose set fits inside `keep`; everything else becomes a
// placeholder. Length and positions are preserved.
inline Ctx<VarSet> ctx_restrict(const Ctx<VarSet>& lam, const VarSet& keep) {
  Ctx<VarSet> out;
  for (const auto& e : lam) {
    if (e.value.has_value() && e.value->subset_of(keep))
      out.push(e.name, e.value);
    else
      out.push(e.name, std::nullopt);
  }
  return out;
}

// Restriction by the co-finite set of all variables except `killed`: entries
// mentioning `killed` become placeholders.
inline Ctx<VarSet> ctx_restrict_without(const Ctx<VarSet>& lam, Var killed) {
  Ctx<VarSet> out;
  for (const auto& e : lam) {
    if (e.value.has_value() && !e.value->contains(killed))
      out.push(e.name, e.value);
    else
      out.push(e.name, std::nullopt);
  }
  return out;
}

}  // namespace il
