#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osqse {

/// Role of a subsystem in an exchange task. A = A1A2 is Alice's, B = B1B2 is
/// Bob's, R is the purifying reference held by neither.
enum class Role { A1, A2, B1, B2, R, Ancilla };

enum class Party { Alice, Bob, Nobody };

/// Role groups that operations can address. A and B are composites.
enum class RoleGroup { A1, A2, B1, B2, A, B, R };

/// The three exchange variants: swap A1/B1 leaving A2B2 untouched, swap A/B
/// wholesale, or swap A1/B1 while A2B2 may assist.
enum class ExchangePair { A1B1, AB, Split12 };

class LayoutError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a role (A1, B1, ...) the layout lacks.
class MissingRoleError : public LayoutError {
public:
  using LayoutError::LayoutError;
};

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Subsystem {
  std::string name;
  std::size_t dim = 1;
  Role role = Role::Ancilla;

  bool operator==(const Subsystem&) const = default;
};

inline constexpr std::size_t kDefaultMaxTotalDim = std::size_t{1} << 14;

/// Ordered list of named subsystems. Basis index ordering is row-major with
/// the first subsystem most significant, so |00010> on (A1,B1,A2,B2,R) has
/// B2 = 1.
class SubsystemLayout {
public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Subsystem> subsystems,
                           std::size_t max_total_dim = kDefaultMaxTotalDim);

  std::size_t size() const { return subsystems_.size(); }
  bool empty() const { return subsystems_.empty(); }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  auto begin() const { return subsystems_.begin(); }
  auto end() const { return subsystems_.end(); }

  std::size_t total_dim() const { return total_dim_; }
  std::vector<std::size_t> dims() const;
  std::vector<std::string> names() const;

  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }
  /// Throws LayoutError for unknown names.
  std::size_t require(std::string_view name) const;
  const Subsystem& at(std::string_view name) const { return subsystems_[require(name)]; }

  /// Product of dims of the named subsystems.
  std::size_t dim_of(const std::vector<std::string>& names) const;

  /// Subsystems carrying `role`, in layout order.
  std::vector<std::string> with_role(Role role) const;

  /// Members of a role group in layout order. Missing A2/B2/R yield an empty
  /// list (dimension 1); a missing A1 or B1 raises MissingRoleError.
  std::vector<std::string> group(RoleGroup group) const;

  /// Names reordered to follow layout order. Throws on unknown or repeated
  /// names.
  std::vector<std::string> in_layout_order(const std::vector<std::string>& names) const;

  /// Names of all subsystems not in `names`, in layout order.
  std::vector<std::string> complement(const std::vector<std::string>& names) const;

  /// Layout restricted to `names`, in the order given.
  SubsystemLayout select(const std::vector<std::string>& names) const;

  SubsystemLayout appended(const Subsystem& extra) const;
  SubsystemLayout without(const std::vector<std::string>& names) const;
  SubsystemLayout renamed(const std::vector<std::pair<std::string, std::string>>& renames) const;

  bool operator==(const SubsystemLayout& other) const { return subsystems_ == other.subsystems_; }

private:
  std::vector<Subsystem> subsystems_;
  std::size_t total_dim_ = 1;
  std::size_t max_total_dim_ = kDefaultMaxTotalDim;
};

/// For every basis index of a layout, the (row, col) position it takes when
/// the state is viewed as a matrix with `row_names` (in the given order) as
/// the row index and the remaining subsystems (in layout order) as columns.
struct IndexSplit {
  std::vector<std::size_t> row;
  std::vector<std::size_t> col;
  std::size_t rows = 1;
  std::size_t cols = 1;
};

IndexSplit split_indices(const SubsystemLayout& layout, const std::vector<std::string>& row_names);

/// Mixed-radix digits of `index` for the given dims (most significant first).
std::vector<std::size_t> decode_index(std::size_t index, const std::vector<std::size_t>& dims);
std::size_t encode_index(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims);

std::string_view to_string(Role role);
std::string_view to_string(Party party);
std::string_view to_string(RoleGroup group);
std::string_view to_string(ExchangePair pair);
Role parse_role(std::string_view text);
Party parse_party(std::string_view text);
ExchangePair parse_exchange_pair(std::string_view text);

/// Alice owns A1/A2, Bob owns B1/B2; R and ancillas belong to nobody until a
/// protocol assigns them.
Party default_owner(Role role);

/// The (X, Y) role groups exchanged by `pair`; Split12 exchanges A1/B1.
std::pair<RoleGroup, RoleGroup> exchanged_groups(ExchangePair pair);

}  // namespace osqse
