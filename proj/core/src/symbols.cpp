#include "il/symbols.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace il {

namespace {

struct Table {
  mutable std::shared_mutex mutex;
  std::vector<std::string> names;
  std::unordered_map<std::string, uint32_t> indices;

  uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mutex);
      auto it = indices.find(std::string(name));
      if (it != indices.end()) return it->second;
    }
    std::unique_lock lock(mutex);
    auto [it, inserted] = indices.try_emplace(std::string(name),
                                              static_cast<uint32_t>(names.size()));
    if (inserted) names.push_back(std::string(name));
    return it->second;
  }

  // Extends the table so that `index` exists, auto-naming the missing slots.
  void ensure(uint32_t index) {
    std::unique_lock lock(mutex);
    while (names.size() <= index) {
      uint32_t i = static_cast<uint32_t>(names.size());
      std::string candidate = "r" + std::to_string(i);
      while (indices.contains(candidate)) candidate += "_";
      indices.emplace(candidate, i);
      names.push_back(candidate);
    }
  }

  std::string name_of(uint32_t index) const {
    std::shared_lock lock(mutex);
    if (index < names.size()) return names[index];
    return "#" + std::to_string(index);
  }

  size_t size() const {
    std::shared_lock lock(mutex);
    return names.size();
  }
};

Table& var_table() {
  static Table t;
  return t;
}
Table& label_table() {
  static Table t;
  return t;
}
Table& action_table() {
  static Table t;
  return t;
}

}  // namespace

Var var(std::string_view name) { return Var{var_table().intern(name)}; }
Label label(std::string_view name) { return Label{label_table().intern(name)}; }
Action action(std::string_view name) { return Action{action_table().intern(name)}; }

Var var_at(uint32_t index) {
  var_table().ensure(index);
  return Var{index};
}

std::string name(Var v) { return var_table().name_of(v.index); }
std::string name(Label f) { return label_table().name_of(f.index); }
std::string name(Action a) { return action_table().name_of(a.index); }

size_t var_count() { return var_table().size(); }

VarSet::VarSet(std::initializer_list<Var> vs) {
  for (Var v : vs) insert(v);
}

VarSet::VarSet(std::span<const Var> vs) {
  for (Var v : vs) insert(v);
}

bool VarSet::contains(Var v) const {
  return std::binary_search(items_.begin(), items_.end(), v);
}

void VarSet::insert(Var v) {
  auto it = std::lower_bound(items_.begin(), items_.end(), v);
  if (it == items_.end() || *it != v) items_.insert(it, v);
}

void VarSet::erase(Var v) {
  auto it = std::lower_bound(items_.begin(), items_.end(), v);
  if (it != items_.end() && *it == v) items_.erase(it);
}

VarSet VarSet::unioned(const VarSet& other) const {
  VarSet out;
  out.items_.reserve(items_.size() + other.items_.size());
  std::set_union(items_.begin(), items_.end(), other.items_.begin(),
                 other.items_.end(), std::back_inserter(out.items_));
  return out;
}

VarSet VarSet::intersect(const VarSet& other) const {
  VarSet out;
  std::set_intersection(items_.begin(), items_.end(), other.items_.begin(),
                        other.items_.end(), std::back_inserter(out.items_));
  return out;
}

VarSet VarSet::minus(const VarSet& other) const {
  VarSet out;
  std::set_difference(items_.begin(), items_.end(), other.items_.begin(),
                      other.items_.end(), std::back_inserter(out.items_));
  return out;
}

VarSet VarSet::minus(Var v) const {
  VarSet out = *this;
  out.erase(v);
  return out;
}

VarSet VarSet::minus(std::span<const Var> vs) const {
  return minus(VarSet(vs));
}

bool VarSet::subset_of(const VarSet& other) const {
  return std::includes(other.items_.begin(), other.items_.end(), items_.begin(),
                       items_.end());
}

bool VarSet::disjoint(const VarSet& other) const {
  return intersect(other).empty();
}

bool VarSet::disjoint(std::span<const Var> vs) const {
  for (Var v : vs)
    if (contains(v)) return false;
  return true;
}

std::string VarSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Var v : items_) {
    if (!first) out += ", ";
    out += name(v);
    first = false;
  }
  out += "}";
  return out;
}

}  // namespace il
