#include "osqse/locc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace osqse {

bool majorizes(const Spectrum& p, const Spectrum& q, double tolerance) {
  const std::size_t n = std::max(p.size(), q.size());
  double sp = 0, sq = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sp += k < p.size() ? p[k] : 0.0;
    sq += k < q.size() ? q[k] : 0.0;
    if (sp < sq - tolerance) return false;
  }
  return true;
}

std::string_view to_string(RRouting routing) {
  return routing == RRouting::AllToAlice ? "all-R-to-Alice" : "all-R-to-Bob";
}

bool converse_majorization_check(const PureState& initial, RRouting routing, std::size_t K, std::size_t L) {
  if (K < 1 || L < 1) throw std::invalid_argument("resource ranks must be >= 1");
  const auto& layout = initial.layout();
  auto lhs = layout.group(RoleGroup::B1);
  auto a2 = layout.group(RoleGroup::A2);
  lhs.insert(lhs.end(), a2.begin(), a2.end());
  auto rhs = layout.group(RoleGroup::A);
  if (routing == RRouting::AllToAlice) {
    auto r = layout.group(RoleGroup::R);
    lhs.insert(lhs.end(), r.begin(), r.end());
    rhs.insert(rhs.end(), r.begin(), r.end());
  }
  auto after = tensor(reduced_spectrum(initial, lhs), Spectrum::uniform(L));
  auto before = tensor(reduced_spectrum(initial, rhs), Spectrum::uniform(K));
  return majorizes(after, before);
}

PureState maximally_entangled(const std::vector<Subsystem>& alice, const std::vector<Subsystem>& bob) {
  std::size_t ka = 1, kb = 1;
  for (const auto& s : alice) ka *= s.dim;
  for (const auto& s : bob) kb *= s.dim;
  if (ka != kb) throw DimensionMismatch("maximally entangled resource needs equal ranks on both sides");
  std::vector<Subsystem> subs = alice;
  subs.insert(subs.end(), bob.begin(), bob.end());
  SubsystemLayout layout(std::move(subs));
  CVector v = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  for (std::size_t i = 0; i < ka; ++i) v(static_cast<Eigen::Index>(i * ka + i)) = 1.0 / std::sqrt(double(ka));
  return PureState(std::move(layout), std::move(v));
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

struct RegisterInfo {
  std::size_t dim = 1;
  Party owner = Party::Nobody;
  bool original = false;
};

struct LabelInfo {
  Party owner = Party::Alice;
  std::size_t outcomes = 0;
};

std::size_t product_dim(const std::vector<Register>& regs) {
  std::size_t d = 1;
  for (const auto& r : regs) d *= r.dim;
  return d;
}

bool is_unitary(const CMatrix& m) { return m.rows() == m.cols() && is_isometry<double>(m, 1e-9); }

class Tracker {
public:
  Tracker(const ProtocolScript& script, const SubsystemLayout& initial) {
    for (const auto& s : initial) registers_[s.name] = {s.dim, default_owner(s.role), true};
    auto declare = [&](const Register& r, Party forced) {
      if (r.dim < 1) throw ScriptError("register '" + r.name + "' has dimension 0");
      if (r.owner != Party::Alice && r.owner != Party::Bob)
        throw ScriptError("register '" + r.name + "' must be owned by alice or bob");
      if (forced != Party::Nobody && r.owner != forced)
        throw ScriptError("resource register '" + r.name + "' declared on the wrong side");
      if (!registers_.emplace(r.name, RegisterInfo{r.dim, r.owner, false}).second)
        throw ScriptError("register '" + r.name + "' declared twice");
    };
    for (const auto& r : script.resource_in_alice) declare(r, Party::Alice);
    for (const auto& r : script.resource_in_bob) declare(r, Party::Bob);
    for (const auto& r : script.ancillas) declare(r, Party::Nobody);
  }

  void check_targets(Party owner, const std::vector<std::string>& targets, const char* what) const {
    if (owner != Party::Alice && owner != Party::Bob) throw ScriptError(std::string(what) + ": owner must be a party");
    if (targets.empty()) throw ScriptError(std::string(what) + ": no targets");
    std::set<std::string> seen;
    for (const auto& t : targets) {
      auto it = registers_.find(t);
      if (it == registers_.end()) throw ScriptError(std::string(what) + ": unknown register '" + t + "'");
      if (it->second.owner != owner)
        throw ScriptError(std::string(what) + ": register '" + t + "' is not owned by " +
                          std::string(to_string(owner)));
      if (!seen.insert(t).second) throw ScriptError(std::string(what) + ": register '" + t + "' listed twice");
    }
  }

  std::size_t dim(const std::vector<std::string>& targets) const {
    std::size_t d = 1;
    for (const auto& t : targets) d *= registers_.at(t).dim;
    return d;
  }

  std::map<std::string, RegisterInfo> registers_;
};

struct StepValidator {
  Tracker& regs;
  std::map<std::string, LabelInfo>& labels;
  std::map<Party, std::set<std::string>>& known;

  void operator()(const step::LocalIsometry& s) const {
    regs.check_targets(s.owner, s.targets, "local-isometry");
    const auto d = static_cast<Eigen::Index>(regs.dim(s.targets));
    if (s.matrix.rows() != d || s.matrix.cols() != d) throw ScriptError("local-isometry: matrix shape mismatch");
    if (!is_unitary(s.matrix)) throw ScriptError("local-isometry: matrix is not unitary");
  }
  void operator()(const step::ProjectiveMeasurement& s) const {
    regs.check_targets(s.owner, s.targets, "projective-measurement");
    const auto d = static_cast<Eigen::Index>(regs.dim(s.targets));
    if (s.basis.rows() != d || s.basis.cols() != d)
      throw ScriptError("projective-measurement: basis must have " + std::to_string(d) + " vectors of length " +
                        std::to_string(d));
    if (!is_unitary(s.basis)) throw ScriptError("projective-measurement: basis is not orthonormal");
    if (s.label.empty() || labels.count(s.label)) throw ScriptError("measurement label '" + s.label + "' reused");
    labels[s.label] = {s.owner, static_cast<std::size_t>(d)};
    known[s.owner].insert(s.label);
  }
  void operator()(const step::ClassicalSend& s) const {
    if (!labels.count(s.label)) throw ScriptError("classical-send: unknown label '" + s.label + "'");
    if (!known[s.from].count(s.label))
      throw ScriptError("classical-send: " + std::string(to_string(s.from)) + " does not know '" + s.label + "'");
    known[s.to].insert(s.label);
  }
  void operator()(const step::ConditionalLocal& s) const {
    regs.check_targets(s.owner, s.targets, "conditional-local");
    auto it = labels.find(s.label);
    if (it == labels.end()) throw ScriptError("conditional-local: unknown label '" + s.label + "'");
    if (!known[s.owner].count(s.label))
      throw ScriptError("conditional-local: outcome '" + s.label + "' has not been sent to " +
                        std::string(to_string(s.owner)));
    const auto d = static_cast<Eigen::Index>(regs.dim(s.targets));
    for (std::size_t m = 0; m < it->second.outcomes; ++m)
      if (!s.table.count(m))
        throw ScriptError("conditional-local: incomplete table for '" + s.label + "' (missing outcome " +
                          std::to_string(m) + ")");
    for (const auto& [m, op] : s.table) {
      if (m >= it->second.outcomes) throw ScriptError("conditional-local: outcome out of range");
      if (op.rows() != d || op.cols() != d || !is_unitary(op))
        throw ScriptError("conditional-local: entry for outcome " + std::to_string(m) + " is not a unitary on the targets");
    }
  }
  void operator()(const step::DiscardAncilla& s) const {
    regs.check_targets(s.owner, s.targets, "discard-ancilla");
    for (const auto& t : s.targets) regs.registers_.erase(t);
  }
};

}  // namespace

void validate(const ProtocolScript& script, const SubsystemLayout& initial) {
  if (script.resource_in_rank < 1 || script.resource_out_rank < 1) throw ScriptError("resource ranks must be >= 1");
  if (product_dim(script.resource_in_alice) != script.resource_in_rank ||
      product_dim(script.resource_in_bob) != script.resource_in_rank)
    throw ScriptError("input resource registers do not have rank K = " + std::to_string(script.resource_in_rank));
  Tracker regs(script, initial);
  std::map<std::string, LabelInfo> labels;
  std::map<Party, std::set<std::string>> known;
  for (const auto& s : script.steps) std::visit(StepValidator{regs, labels, known}, s);

  const auto& out = script.output;
  std::set<std::string> destinations;
  for (const auto& [from, to] : out.moves) {
    if (!initial.contains(from)) throw ScriptError("output move from unknown subsystem '" + from + "'");
    if (!regs.registers_.count(to)) throw ScriptError("output move to unavailable register '" + to + "'");
    if (!destinations.insert(to).second) throw ScriptError("two subsystems moved into register '" + to + "'");
  }
  auto check_out = [&](const std::vector<std::string>& names, Party side) {
    std::size_t d = 1;
    for (const auto& n : names) {
      auto it = regs.registers_.find(n);
      if (it == regs.registers_.end()) throw ScriptError("output resource register '" + n + "' is unavailable");
      if (it->second.owner != side) throw ScriptError("output resource register '" + n + "' on the wrong side");
      d *= it->second.dim;
    }
    if (d != script.resource_out_rank)
      throw ScriptError("output resource registers do not have rank L = " + std::to_string(script.resource_out_rank));
  };
  check_out(out.resource_out_alice, Party::Alice);
  check_out(out.resource_out_bob, Party::Bob);
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

struct RawBranch {
  std::vector<Outcome> record;
  double probability = 1;
  CVector amplitudes;
};

class Simulator {
public:
  Simulator(SubsystemLayout layout, CVector initial) : layout_(std::move(layout)) {
    branches_.push_back({{}, 1.0, std::move(initial)});
  }

  void operator()(const step::LocalIsometry& s) {
    for (auto& b : branches_) b.amplitudes = apply_to_vector<double>(layout_, b.amplitudes, s.matrix, s.targets).second;
  }

  void operator()(const step::ProjectiveMeasurement& s) {
    std::vector<RawBranch> next;
    for (const auto& b : branches_) {
      for (Eigen::Index m = 0; m < s.basis.cols(); ++m) {
        CMatrix projector = s.basis.col(m) * s.basis.col(m).adjoint();
        CVector v = apply_to_vector<double>(layout_, b.amplitudes, projector, s.targets).second;
        const double weight = v.squaredNorm();
        if (b.probability * weight < kDropProbability) continue;
        auto record = b.record;
        record.push_back({s.label, static_cast<std::size_t>(m)});
        next.push_back({std::move(record), b.probability * weight, v / std::sqrt(weight)});
      }
    }
    branches_ = std::move(next);
  }

  void operator()(const step::ClassicalSend&) {}

  void operator()(const step::ConditionalLocal& s) {
    for (auto& b : branches_) {
      auto it = std::find_if(b.record.begin(), b.record.end(), [&](const Outcome& o) { return o.label == s.label; });
      const CMatrix& op = s.table.at(it->value);
      b.amplitudes = apply_to_vector<double>(layout_, b.amplitudes, op, s.targets).second;
    }
  }

  void operator()(const step::DiscardAncilla& s) {
    for (auto& b : branches_) {
      CMatrix m = group_matrix<double>(layout_, b.amplitudes, s.targets);
      Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      double entangled = 0;
      for (Eigen::Index k = 1; k < sv.size(); ++k) entangled += sv(k) * sv(k);
      if (std::sqrt(entangled) > 1e-9)
        throw ScriptError("discard-ancilla: registers are entangled with the rest of the state");
      CVector rest = (svd.matrixU().col(0).adjoint() * m).transpose();
      b.amplitudes = rest / rest.norm();
    }
    layout_ = layout_.without(s.targets);
  }

  const SubsystemLayout& layout() const { return layout_; }
  std::vector<RawBranch>& branches() { return branches_; }

private:
  static constexpr double kDropProbability = 1e-14;
  SubsystemLayout layout_;
  std::vector<RawBranch> branches_;
};

std::vector<std::string> step_targets(const Step& s) {
  return std::visit(
      [](const auto& st) -> std::vector<std::string> {
        if constexpr (requires { st.targets; })
          return st.targets;
        else
          return {};
      },
      s);
}

}  // namespace

SimulationResult run_protocol(const PureState& initial, const ProtocolScript& script) {
  validate(script, initial.layout());

  auto to_subsystems = [](const std::vector<Register>& regs) {
    std::vector<Subsystem> out;
    for (const auto& r : regs) out.push_back({r.name, r.dim, Role::Ancilla});
    return out;
  };
  PureState full = initial;
  if (script.resource_in_rank > 1)
    full = tensor(full, maximally_entangled(to_subsystems(script.resource_in_alice),
                                            to_subsystems(script.resource_in_bob)));
  for (const auto& a : script.ancillas)
    full = tensor(full, PureState::basis(SubsystemLayout({{a.name, a.dim, Role::Ancilla}}), {0}));

  std::map<std::string, Party> owners;
  for (const auto& s : initial.layout()) owners[s.name] = default_owner(s.role);
  for (const auto* regs : {&script.resource_in_alice, &script.resource_in_bob, &script.ancillas})
    for (const auto& r : *regs) owners[r.name] = r.owner;

  SimulationResult result;
  Simulator sim(full.layout(), full.amplitudes());
  for (const auto& s : script.steps) {
    for (auto& t : step_targets(s)) result.touched.insert(std::move(t));
    std::visit(sim, s);
  }

  auto& raw = sim.branches();
  std::sort(raw.begin(), raw.end(), [](const RawBranch& a, const RawBranch& b) { return a.record < b.record; });
  for (auto& b : raw)
    result.branches.push_back({std::move(b.record), b.probability, PureState::normalized(sim.layout(), b.amplitudes)});
  for (const auto& s : sim.layout()) result.owners[s.name] = owners.at(s.name);
  result.resource_in_rank = script.resource_in_rank;
  result.resource_out_rank = script.resource_out_rank;
  result.net_cost = std::log2(double(script.resource_in_rank)) - std::log2(double(script.resource_out_rank));
  result.output = script.output;
  return result;
}

std::optional<PureState> exchange_target(const SimulationResult& result, const PureState& initial,
                                         ExchangePair pair) {
  if (result.branches.empty()) return std::nullopt;
  const auto& final_layout = result.branches.front().state.layout();
  const auto& layout = initial.layout();
  auto [gx, gy] = exchanged_groups(pair);
  auto xs = layout.group(gx);
  auto ys = layout.group(gy);
  auto owner_of = [&](const std::string& reg) {
    auto it = result.owners.find(reg);
    return it == result.owners.end() ? Party::Nobody : it->second;
  };

  PureState content;
  const auto& moves = result.output.moves;
  if (moves.empty()) {
    if (layout.dim_of(xs) != layout.dim_of(ys)) return std::nullopt;
    content = exchange_subsystems(initial, xs, ys);
  } else {
    std::vector<std::pair<std::string, std::string>> renames;
    for (const auto& s : layout) {
      auto it = moves.find(s.name);
      const std::string dest = it == moves.end() ? s.name : it->second;
      if (!final_layout.contains(dest) || final_layout.at(dest).dim != s.dim) return std::nullopt;
      const bool in_x = std::find(xs.begin(), xs.end(), s.name) != xs.end();
      const bool in_y = std::find(ys.begin(), ys.end(), s.name) != ys.end();
      Party want = default_owner(s.role);
      if (in_x) want = Party::Bob;
      if (in_y) want = Party::Alice;
      if (want == Party::Nobody ? dest != s.name : owner_of(dest) != want) return std::nullopt;
      renames.emplace_back(s.name, dest);
    }
    content = PureState(layout.renamed(renames), initial.amplitudes());
  }

  std::vector<Subsystem> alice, bob;
  for (const auto& n : result.output.resource_out_alice) {
    if (!final_layout.contains(n)) return std::nullopt;
    alice.push_back(final_layout.at(n));
  }
  for (const auto& n : result.output.resource_out_bob) {
    if (!final_layout.contains(n)) return std::nullopt;
    bob.push_back(final_layout.at(n));
  }
  PureState target = content;
  if (!alice.empty() || !bob.empty()) target = tensor(content, maximally_entangled(alice, bob));

  if (target.layout().size() != final_layout.size()) return std::nullopt;
  for (const auto& s : target.layout())
    if (!final_layout.contains(s.name) || final_layout.at(s.name).dim != s.dim) return std::nullopt;
  auto ordered = permute(target, final_layout.names());
  return PureState(final_layout, ordered.amplitudes());
}

double max_branch_deviation(const SimulationResult& result, const PureState& initial, ExchangePair pair) {
  auto target = exchange_target(result, initial, pair);
  if (!target) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (const auto& b : result.branches)
    worst = std::max(worst, phase_distance<double>(b.state.amplitudes(), target->amplitudes()));
  return worst;
}

bool verify_exchange(const SimulationResult& result, const PureState& initial, ExchangePair pair,
                     double tolerance) {
  if (pair == ExchangePair::A1B1) {
    for (auto g : {RoleGroup::A2, RoleGroup::B2})
      for (const auto& n : initial.layout().group(g))
        if (result.touched.count(n)) return false;
  }
  return max_branch_deviation(result, initial, pair) <= tolerance;
}

// ---------------------------------------------------------------------------
// Built-in protocols
// ---------------------------------------------------------------------------

namespace builtin {

namespace {

CMatrix pauli_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1;
  return m;
}

CMatrix pauli_z() {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = -1;
  return m;
}

// Control is the first target.
CMatrix cnot() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

CMatrix prepare_phi_plus() {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CMatrix id = CMatrix::Identity(2, 2);
  CMatrix hi = CMatrix::Zero(4, 4);
  hi.topLeftCorner(2, 2) = h(0, 0) * id;
  hi.topRightCorner(2, 2) = h(0, 1) * id;
  hi.bottomLeftCorner(2, 2) = h(1, 0) * id;
  hi.bottomRightCorner(2, 2) = h(1, 1) * id;
  return cnot() * hi;
}

step::ConditionalLocal correct(Party owner, const std::string& label, const std::string& target) {
  step::ConditionalLocal c{owner, label, {}, {target}};
  for (std::size_t m = 0; m < 4; ++m) c.table[m] = bell_correction(m);
  return c;
}

}  // namespace

CMatrix bell_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix b = CMatrix::Zero(4, 4);
  b(0, 0) = r, b(3, 0) = r;
  b(0, 1) = r, b(3, 1) = -r;
  b(1, 2) = r, b(2, 2) = r;
  b(1, 3) = r, b(2, 3) = -r;
  return b;
}

CMatrix bell_correction(std::size_t outcome) {
  if (outcome > 3) throw std::out_of_range("Bell outcome must be 0..3");
  CMatrix m = CMatrix::Identity(2, 2);
  if (outcome & 2) m = pauli_x() * m;
  if (outcome & 1) m = pauli_z() * m;
  return m;
}

ProtocolScript phi1_local_cnots() {
  ProtocolScript s;
  s.name = "phi1-local-cnots";
  s.steps.push_back(step::LocalIsometry{Party::Alice, cnot(), {"A2", "A1"}});
  s.steps.push_back(step::LocalIsometry{Party::Bob, cnot(), {"B2", "B1"}});
  return s;
}

ProtocolScript phi2_entanglement_swap() {
  ProtocolScript s;
  s.name = "phi2-entanglement-swap";
  s.resource_out_rank = 4;
  s.ancillas = {{"EA1", 2, Party::Alice}, {"EA2", 2, Party::Alice}, {"EB1", 2, Party::Bob}, {"EB2", 2, Party::Bob}};
  s.steps.push_back(step::LocalIsometry{Party::Alice, prepare_phi_plus(), {"EA1", "EA2"}});
  s.steps.push_back(step::LocalIsometry{Party::Bob, prepare_phi_plus(), {"EB1", "EB2"}});
  s.steps.push_back(step::ProjectiveMeasurement{Party::Alice, bell_basis(), {"A2", "EA2"}, "mA"});
  s.steps.push_back(step::ProjectiveMeasurement{Party::Bob, bell_basis(), {"B2", "EB2"}, "mB"});
  s.steps.push_back(correct(Party::Alice, "mA", "EA1"));
  s.steps.push_back(correct(Party::Alice, "mA", "EA2"));
  s.steps.push_back(correct(Party::Bob, "mB", "EB1"));
  s.steps.push_back(correct(Party::Bob, "mB", "EB2"));
  s.output.moves = {{"A1", "EB2"}, {"B1", "EA2"}};
  s.output.resource_out_alice = {"A1", "EA1"};
  s.output.resource_out_bob = {"EB1", "B1"};
  return s;
}

ProtocolScript double_teleport_swap() {
  ProtocolScript s;
  s.name = "double-teleport-swap";
  s.resource_in_rank = 4;
  s.resource_in_alice = {{"ea0", 2, Party::Alice}, {"ea1", 2, Party::Alice}};
  s.resource_in_bob = {{"eb0", 2, Party::Bob}, {"eb1", 2, Party::Bob}};
  s.steps.push_back(step::ProjectiveMeasurement{Party::Alice, bell_basis(), {"A1", "ea0"}, "ta"});
  s.steps.push_back(step::ClassicalSend{Party::Alice, Party::Bob, "ta"});
  s.steps.push_back(correct(Party::Bob, "ta", "eb0"));
  s.steps.push_back(step::ProjectiveMeasurement{Party::Bob, bell_basis(), {"B1", "eb1"}, "tb"});
  s.steps.push_back(step::ClassicalSend{Party::Bob, Party::Alice, "tb"});
  s.steps.push_back(correct(Party::Alice, "tb", "ea1"));
  s.steps.push_back(step::DiscardAncilla{Party::Alice, {"A1", "ea0"}});
  s.steps.push_back(step::DiscardAncilla{Party::Bob, {"B1", "eb1"}});
  s.output.moves = {{"A1", "eb0"}, {"B1", "ea1"}};
  return s;
}

std::vector<std::string> names() { return {"phi1-local-cnots", "phi2-entanglement-swap", "double-teleport-swap"}; }

ProtocolScript by_name(const std::string& name) {
  if (name == "phi1-local-cnots") return phi1_local_cnots();
  if (name == "phi2-entanglement-swap") return phi2_entanglement_swap();
  if (name == "double-teleport-swap") return double_teleport_swap();
  throw std::invalid_argument("unknown built-in protocol '" + name + "'");
}

}  // namespace builtin
}  // namespace osqse
