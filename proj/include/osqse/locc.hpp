#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "osqse/state.hpp"

namespace osqse {

/// True iff every partial sum of descending p dominates that of descending q
/// (shorter list padded with zeros), within `tolerance`.
bool majorizes(const Spectrum& p, const Spectrum& q, double tolerance = 1e-10);

enum class RRouting { AllToAlice, AllToBob };

std::string_view to_string(RRouting routing);

/// Necessary condition for any exact LOCC exchange of A1/B1 with resource
/// ranks K in and L out: spec(B1 A2 [R]) ⊗ uniform(L) must majorize
/// spec(A [R]) ⊗ uniform(K), R included when routed to Alice.
bool converse_majorization_check(const PureState& initial, RRouting routing, std::size_t K, std::size_t L);

/// Maximally entangled Σ_i |i>|i>/sqrt(K) across the composite of
/// `alice` registers and the composite of `bob` registers.
PureState maximally_entangled(const std::vector<Subsystem>& alice, const std::vector<Subsystem>& bob);

// ---------------------------------------------------------------------------
// Protocol scripts
// ---------------------------------------------------------------------------

class ScriptError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Register {
  std::string name;
  std::size_t dim = 2;
  Party owner = Party::Alice;
};

namespace step {

struct LocalIsometry {
  Party owner = Party::Alice;
  CMatrix matrix;
  std::vector<std::string> targets;
};

/// Complete orthonormal basis; column m of `basis` is outcome m.
struct ProjectiveMeasurement {
  Party owner = Party::Alice;
  CMatrix basis;
  std::vector<std::string> targets;
  std::string label;
};

struct ClassicalSend {
  Party from = Party::Alice;
  Party to = Party::Bob;
  std::string label;
};

/// Applies table[outcome] for the outcome recorded under `label`.
struct ConditionalLocal {
  Party owner = Party::Alice;
  std::string label;
  std::map<std::size_t, CMatrix> table;
  std::vector<std::string> targets;
};

/// Drops registers that are in a product state with everything else.
struct DiscardAncilla {
  Party owner = Party::Alice;
  std::vector<std::string> targets;
};

}  // namespace step

using Step = std::variant<step::LocalIsometry, step::ProjectiveMeasurement, step::ClassicalSend,
                          step::ConditionalLocal, step::DiscardAncilla>;

/// Where the exchanged content and the output resource end up.
/// `moves` maps an original subsystem to the register now holding its
/// content; when empty the pair is exchanged in place (X registers hold Y's
/// content and vice versa).
struct ProtocolOutput {
  std::map<std::string, std::string> moves;
  std::vector<std::string> resource_out_alice;
  std::vector<std::string> resource_out_bob;
};

struct ProtocolScript {
  std::string name;
  std::size_t resource_in_rank = 1;   // K
  std::size_t resource_out_rank = 1;  // L
  std::vector<Register> resource_in_alice;
  std::vector<Register> resource_in_bob;
  std::vector<Register> ancillas;  // start in |0>
  std::vector<Step> steps;
  ProtocolOutput output;
};

/// Structural checks against the initial layout: register declarations,
/// ownership, label visibility, basis completeness and table coverage.
/// Throws ScriptError.
void validate(const ProtocolScript& script, const SubsystemLayout& initial);

struct Outcome {
  std::string label;
  std::size_t value = 0;
  auto operator<=>(const Outcome&) const = default;
};

struct Branch {
  std::vector<Outcome> record;
  double probability = 1;
  PureState state;
};

struct SimulationResult {
  std::vector<Branch> branches;  // sorted by outcome record
  double net_cost = 0;           // log2 K - log2 L
  std::size_t resource_in_rank = 1;
  std::size_t resource_out_rank = 1;
  std::map<std::string, Party> owners;  // final registers
  std::set<std::string> touched;        // registers acted on by any step
  ProtocolOutput output;
};

/// Attaches the rank-K resource and ancillas, then runs every step, keeping
/// every measurement outcome with nonzero probability as its own branch.
/// Throws ScriptError for invalid scripts and for discarding a register that
/// is entangled with the rest.
SimulationResult run_protocol(const PureState& initial, const ProtocolScript& script);

/// The exchanged target on the final registers: content placed according to
/// `output`, tensored with the rank-L maximally entangled output resource.
/// Returns nullopt when the final registers or ownership cannot represent the
/// requested exchange.
std::optional<PureState> exchange_target(const SimulationResult& result, const PureState& initial,
                                         ExchangePair pair);

/// Largest phase-aligned distance between a branch state and the target;
/// +inf when no target exists.
double max_branch_deviation(const SimulationResult& result, const PureState& initial, ExchangePair pair);

/// True iff every branch equals the exchanged state ⊗ Φ_L within `tolerance`
/// (up to phase). For the a1b1 pair the protocol must also leave A2 and B2
/// untouched.
bool verify_exchange(const SimulationResult& result, const PureState& initial, ExchangePair pair,
                     double tolerance = 1e-9);

// ---------------------------------------------------------------------------
// Built-in protocols
// ---------------------------------------------------------------------------

namespace builtin {

/// CNOT(A2 → A1) by Alice and CNOT(B2 → B1) by Bob; no resource.
ProtocolScript phi1_local_cnots();
/// Each party prepares a local ebit and Bell-measures it against A2 (B2);
/// Pauli corrections leave two shared ebits. K = 1, L = 4.
ProtocolScript phi2_entanglement_swap();
/// Teleports A1 to Bob and B1 to Alice over two shared ebits. K = 4, L = 1.
ProtocolScript double_teleport_swap();

ProtocolScript by_name(const std::string& name);
std::vector<std::string> names();

/// Bell basis on two qubits; column 2x+z is (I ⊗ XˣZᶻ)|Φ+>.
CMatrix bell_basis();
/// Pauli correction ZᶻXˣ undoing outcome 2x+z.
CMatrix bell_correction(std::size_t outcome);

}  // namespace builtin
}  // namespace osqse
