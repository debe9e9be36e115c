#include "osqse/layout.hpp"

#include <algorithm>
#include <unordered_set>

namespace osqse {

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> subsystems, std::size_t max_total_dim)
    : subsystems_(std::move(subsystems)), max_total_dim_(max_total_dim) {
  std::unordered_set<std::string> seen;
  total_dim_ = 1;
  for (const auto& s : subsystems_) {
    if (s.name.empty()) throw LayoutError("subsystem name must be nonempty");
    if (!seen.insert(s.name).second) throw LayoutError("duplicate subsystem name '" + s.name + "'");
    if (s.dim < 1) throw LayoutError("subsystem '" + s.name + "' has dimension 0");
    if (total_dim_ > max_total_dim_ / s.dim)
      throw LayoutError("total dimension exceeds configured maximum " + std::to_string(max_total_dim_));
    total_dim_ *= s.dim;
  }
}

std::vector<std::size_t> SubsystemLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.dim);
  return out;
}

std::vector<std::string> SubsystemLayout::names() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.name);
  return out;
}

std::optional<std::size_t> SubsystemLayout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (subsystems_[i].name == name) return i;
  return std::nullopt;
}

std::size_t SubsystemLayout::require(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) throw LayoutError("unknown subsystem '" + std::string(name) + "'");
  return *idx;
}

std::size_t SubsystemLayout::dim_of(const std::vector<std::string>& names) const {
  std::size_t d = 1;
  for (const auto& n : names) d *= subsystems_[require(n)].dim;
  return d;
}

std::vector<std::string> SubsystemLayout::with_role(Role role) const {
  std::vector<std::string> out;
  for (const auto& s : subsystems_)
    if (s.role == role) out.push_back(s.name);
  return out;
}

std::vector<std::string> SubsystemLayout::group(RoleGroup g) const {
  auto need = [&](Role r) {
    auto members = with_role(r);
    if (members.empty())
      throw MissingRoleError("state has no subsystem with role " + std::string(to_string(r)));
    return members;
  };
  std::vector<std::string> members;
  switch (g) {
    case RoleGroup::A1: return need(Role::A1);
    case RoleGroup::B1: return need(Role::B1);
    case RoleGroup::A2: return with_role(Role::A2);
    case RoleGroup::B2: return with_role(Role::B2);
    case RoleGroup::R: return with_role(Role::R);
    case RoleGroup::A:
      need(Role::A1);
      for (const auto& s : subsystems_)
        if (s.role == Role::A1 || s.role == Role::A2) members.push_back(s.name);
      return members;
    case RoleGroup::B:
      need(Role::B1);
      for (const auto& s : subsystems_)
        if (s.role == Role::B1 || s.role == Role::B2) members.push_back(s.name);
      return members;
  }
  return members;
}

std::vector<std::string> SubsystemLayout::in_layout_order(const std::vector<std::string>& names) const {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(require(n));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw LayoutError("subsystem listed twice");
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(subsystems_[i].name);
  return out;
}

std::vector<std::string> SubsystemLayout::complement(const std::vector<std::string>& names) const {
  std::vector<bool> taken(subsystems_.size(), false);
  for (const auto& n : names) taken[require(n)] = true;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (!taken[i]) out.push_back(subsystems_[i].name);
  return out;
}

SubsystemLayout SubsystemLayout::select(const std::vector<std::string>& names) const {
  std::vector<Subsystem> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(subsystems_[require(n)]);
  return SubsystemLayout(std::move(out), max_total_dim_);
}

SubsystemLayout SubsystemLayout::appended(const Subsystem& extra) const {
  auto subs = subsystems_;
  subs.push_back(extra);
  return SubsystemLayout(std::move(subs), max_total_dim_);
}

SubsystemLayout SubsystemLayout::without(const std::vector<std::string>& names) const {
  return select(complement(names));
}

SubsystemLayout SubsystemLayout::renamed(
    const std::vector<std::pair<std::string, std::string>>& renames) const {
  auto subs = subsystems_;
  for (const auto& [from, to] : renames) subs[require(from)].name = to;
  return SubsystemLayout(std::move(subs), max_total_dim_);
}

IndexSplit split_indices(const SubsystemLayout& layout, const std::vector<std::string>& row_names) {
  const std::size_t n = layout.size();
  std::vector<std::size_t> row_stride(n, 0), col_stride(n, 0);
  std::vector<bool> in_row(n, false);
  IndexSplit split;
  // Row strides follow the requested order; the last listed name is least significant.
  for (auto it = row_names.rbegin(); it != row_names.rend(); ++it) {
    auto k = layout.require(*it);
    if (in_row[k]) throw LayoutError("subsystem '" + *it + "' listed twice");
    in_row[k] = true;
    row_stride[k] = split.rows;
    split.rows *= layout[k].dim;
  }
  for (std::size_t k = n; k-- > 0;) {
    if (in_row[k]) continue;
    col_stride[k] = split.cols;
    split.cols *= layout[k].dim;
  }
  const std::size_t total = layout.total_dim();
  split.row.assign(total, 0);
  split.col.assign(total, 0);
  std::vector<std::size_t> digits(n, 0);
  std::size_t r = 0, c = 0;
  for (std::size_t i = 0; i < total; ++i) {
    split.row[i] = r;
    split.col[i] = c;
    // odometer increment, least significant subsystem last
    for (std::size_t k = n; k-- > 0;) {
      r += row_stride[k];
      c += col_stride[k];
      if (++digits[k] < layout[k].dim) break;
      r -= row_stride[k] * digits[k];
      c -= col_stride[k] * digits[k];
      digits[k] = 0;
    }
  }
  return split;
}

std::vector<std::size_t> decode_index(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> digits(dims.size(), 0);
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

std::size_t encode_index(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::A1: return "A1";
    case Role::A2: return "A2";
    case Role::B1: return "B1";
    case Role::B2: return "B2";
    case Role::R: return "R";
    case Role::Ancilla: return "ancilla";
  }
  return "?";
}

std::string_view to_string(Party party) {
  switch (party) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Nobody: return "nobody";
  }
  return "?";
}

std::string_view to_string(RoleGroup group) {
  switch (group) {
    case RoleGroup::A1: return "A1";
    case RoleGroup::A2: return "A2";
    case RoleGroup::B1: return "B1";
    case RoleGroup::B2: return "B2";
    case RoleGroup::A: return "A";
    case RoleGroup::B: return "B";
    case RoleGroup::R: return "R";
  }
  return "?";
}

std::string_view to_string(ExchangePair pair) {
  switch (pair) {
    case ExchangePair::A1B1: return "a1b1";
    case ExchangePair::AB: return "ab";
    case ExchangePair::Split12: return "split12";
  }
  return "?";
}

Role parse_role(std::string_view text) {
  if (text == "A1") return Role::A1;
  if (text == "A2") return Role::A2;
  if (text == "B1") return Role::B1;
  if (text == "B2") return Role::B2;
  if (text == "R") return Role::R;
  if (text == "ancilla") return Role::Ancilla;
  throw LayoutError("unknown role '" + std::string(text) + "'");
}

Party parse_party(std::string_view text) {
  if (text == "alice" || text == "Alice") return Party::Alice;
  if (text == "bob" || text == "Bob") return Party::Bob;
  throw LayoutError("unknown party '" + std::string(text) + "'");
}

ExchangePair parse_exchange_pair(std::string_view text) {
  if (text == "a1b1") return ExchangePair::A1B1;
  if (text == "ab") return ExchangePair::AB;
  if (text == "split12") return ExchangePair::Split12;
  throw std::invalid_argument("unknown exchange pair '" + std::string(text) + "'");
}

Party default_owner(Role role) {
  switch (role) {
    case Role::A1:
    case Role::A2: return Party::Alice;
    case Role::B1:
    case Role::B2: return Party::Bob;
    default: return Party::Nobody;
  }
}

std::pair<RoleGroup, RoleGroup> exchanged_groups(ExchangePair pair) {
  if (pair == ExchangePair::AB) return {RoleGroup::A, RoleGroup::B};
  return {RoleGroup::A1, RoleGroup::B1};
}

}  // namespace osqse
