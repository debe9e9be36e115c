#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "osqse/entropy.hpp"
#include "osqse/locc.hpp"
#include "osqse/reference_states.hpp"

using namespace osqse;

namespace {

CMatrix identity2() { return CMatrix::Identity(2, 2); }

double total_probability(const SimulationResult& r) {
  double s = 0;
  for (const auto& b : r.branches) s += b.probability;
  return s;
}

}  // namespace

TEST_SUITE("locc") {

TEST_CASE("majorization against subset sums") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 300; ++t) {
    auto p = oracle::random_probabilities(rng, 1 + rng() % 6);
    auto q = oracle::random_probabilities(rng, 1 + rng() % 6);
    CHECK(majorizes(Spectrum::from_values(p), Spectrum::from_values(q)) == oracle::majorizes(p, q, 1e-10));
  }
  CHECK(majorizes(Spectrum::uniform(1), Spectrum::uniform(4)));
  CHECK_FALSE(majorizes(Spectrum::uniform(4), Spectrum::uniform(1)));
}

TEST_CASE("bell basis and corrections") {
  CMatrix b = builtin::bell_basis();
  CHECK((b.adjoint() * b - CMatrix::Identity(4, 4)).norm() < 1e-14);
  for (std::size_t m = 0; m < 4; ++m) {
    CMatrix c = builtin::bell_correction(m);
    CHECK((c.adjoint() * c - identity2()).norm() < 1e-14);
  }
  CHECK_THROWS(builtin::bell_correction(4));
}

TEST_CASE("maximally entangled resource") {
  auto phi = maximally_entangled({{"a0", 2, Role::Ancilla}, {"a1", 2, Role::Ancilla}},
                                 {{"b0", 2, Role::Ancilla}, {"b1", 2, Role::Ancilla}});
  auto s = reduced_spectrum(phi, {"a0", "a1"});
  CHECK(same_spectrum(s, Spectrum::uniform(4), 1e-12));
  CHECK(same_spectrum(reduced_spectrum(phi, {"a0", "b0"}), Spectrum::uniform(1), 1e-12));
  CHECK_THROWS_AS(maximally_entangled({{"a", 2, Role::Ancilla}}, {{"b", 3, Role::Ancilla}}), DimensionMismatch);
}

TEST_CASE("phi1 local CNOTs") {
  auto phi1 = reference::phi1();
  auto r = run_protocol(phi1, builtin::phi1_local_cnots());
  CHECK(r.branches.size() == 1);
  CHECK(r.net_cost == 0.0);
  CHECK(verify_exchange(r, phi1, ExchangePair::AB));
  CHECK(verify_exchange(r, phi1, ExchangePair::Split12));
  // touches A2 and B2, so it is not an unassisted A1<->B1 exchange
  CHECK_FALSE(verify_exchange(r, phi1, ExchangePair::A1B1));
  CHECK(max_branch_deviation(r, phi1, ExchangePair::A1B1) < 1e-12);
}

TEST_CASE("phi2 entanglement swap") {
  auto phi2 = reference::phi2();
  auto r = run_protocol(phi2, builtin::phi2_entanglement_swap());
  CHECK(r.branches.size() == 16);
  CHECK(r.net_cost == -2.0);
  CHECK(total_probability(r) == doctest::Approx(1.0));
  for (const auto& b : r.branches) CHECK(b.probability == doctest::Approx(1.0 / 16));
  CHECK(std::is_sorted(r.branches.begin(), r.branches.end(),
                       [](const Branch& a, const Branch& b) { return a.record < b.record; }));
  CHECK(max_branch_deviation(r, phi2, ExchangePair::Split12) < 1e-10);
  CHECK(verify_exchange(r, phi2, ExchangePair::Split12));
  CHECK(converse_majorization_check(phi2, RRouting::AllToAlice, 1, 4));
  CHECK(converse_majorization_check(phi2, RRouting::AllToBob, 1, 4));
  // one more output ebit than the state can supply
  CHECK_FALSE(converse_majorization_check(phi2, RRouting::AllToBob, 1, 8));
}

TEST_CASE("double teleportation exchanges arbitrary states") {
  std::mt19937_64 rng(41);
  for (auto roles : {std::vector<std::string>{"A1", "B1"}, std::vector<std::string>{"A1", "B1", "A2", "B2", "R"}}) {
    auto l = qubit_layout(roles);
    for (int t = 0; t < 3; ++t) {
      auto psi = oracle::random_state(rng, l);
      auto r = run_protocol(psi, builtin::double_teleport_swap());
      CHECK(r.branches.size() == 16);
      CHECK(r.net_cost == 2.0);
      CHECK(total_probability(r) == doctest::Approx(1.0));
      CHECK(verify_exchange(r, psi, ExchangePair::A1B1));
      CHECK(verify_exchange(r, psi, ExchangePair::Split12));
      CHECK(converse_majorization_check(psi, RRouting::AllToAlice, 4, 1));
      CHECK(converse_majorization_check(psi, RRouting::AllToBob, 4, 1));
    }
  }
}

TEST_CASE("phi2 script does not exchange other states") {
  auto psi1 = reference::psi1();
  auto r = run_protocol(psi1, builtin::phi2_entanglement_swap());
  CHECK_FALSE(verify_exchange(r, psi1, ExchangePair::Split12));
}

TEST_CASE("script validation errors") {
  auto phi1 = reference::phi1();
  CMatrix b = builtin::bell_basis();

  ProtocolScript wrong_owner;
  wrong_owner.steps.push_back(step::LocalIsometry{Party::Alice, identity2(), {"B1"}});
  CHECK_THROWS_AS(run_protocol(phi1, wrong_owner), ScriptError);

  ProtocolScript unknown;
  unknown.steps.push_back(step::LocalIsometry{Party::Alice, identity2(), {"Q"}});
  CHECK_THROWS_AS(validate(unknown, phi1.layout()), ScriptError);

  ProtocolScript r_touch;
  r_touch.steps.push_back(step::LocalIsometry{Party::Alice, identity2(), {"R"}});
  CHECK_THROWS_AS(validate(r_touch, phi1.layout()), ScriptError);

  ProtocolScript not_sent;
  not_sent.steps.push_back(step::ProjectiveMeasurement{Party::Alice, identity2(), {"A1"}, "m"});
  not_sent.steps.push_back(step::ConditionalLocal{Party::Bob, "m", {{0, identity2()}, {1, identity2()}}, {"B1"}});
  CHECK_THROWS_WITH_AS(validate(not_sent, phi1.layout()), doctest::Contains("has not been sent"), ScriptError);

  ProtocolScript incomplete;
  incomplete.steps.push_back(step::ProjectiveMeasurement{Party::Alice, identity2(), {"A1"}, "m"});
  incomplete.steps.push_back(step::ConditionalLocal{Party::Alice, "m", {{0, identity2()}}, {"A2"}});
  CHECK_THROWS_WITH_AS(validate(incomplete, phi1.layout()), doctest::Contains("incomplete"), ScriptError);

  ProtocolScript bad_basis;
  bad_basis.steps.push_back(step::ProjectiveMeasurement{Party::Alice, CMatrix::Ones(2, 2), {"A1"}, "m"});
  CHECK_THROWS_AS(validate(bad_basis, phi1.layout()), ScriptError);

  ProtocolScript reused;
  reused.steps.push_back(step::ProjectiveMeasurement{Party::Alice, identity2(), {"A1"}, "m"});
  reused.steps.push_back(step::ProjectiveMeasurement{Party::Bob, identity2(), {"B1"}, "m"});
  CHECK_THROWS_AS(validate(reused, phi1.layout()), ScriptError);

  ProtocolScript rank;
  rank.resource_in_rank = 2;
  CHECK_THROWS_AS(validate(rank, phi1.layout()), ScriptError);

  ProtocolScript clash;
  clash.ancillas = {{"A1", 2, Party::Alice}};
  CHECK_THROWS_AS(validate(clash, phi1.layout()), ScriptError);

  ProtocolScript after_discard;
  after_discard.ancillas = {{"e", 2, Party::Alice}};
  after_discard.steps.push_back(step::DiscardAncilla{Party::Alice, {"e"}});
  after_discard.steps.push_back(step::LocalIsometry{Party::Alice, identity2(), {"e"}});
  CHECK_THROWS_AS(validate(after_discard, phi1.layout()), ScriptError);

  ProtocolScript bad_output;
  bad_output.output.resource_out_alice = {"B1"};
  bad_output.resource_out_rank = 2;
  CHECK_THROWS_AS(validate(bad_output, phi1.layout()), ScriptError);
  (void)b;
}

TEST_CASE("discarding an entangled register fails") {
  auto phi2 = reference::phi2();
  ProtocolScript s;
  s.steps.push_back(step::DiscardAncilla{Party::Alice, {"A1"}});
  CHECK_THROWS_WITH_AS(run_protocol(phi2, s), doctest::Contains("entangled"), ScriptError);

  // a fresh ancilla is in a product state and can be dropped again
  ProtocolScript ok;
  ok.ancillas = {{"e", 3, Party::Bob}};
  ok.steps.push_back(step::DiscardAncilla{Party::Bob, {"e"}});
  auto r = run_protocol(phi2, ok);
  CHECK(r.branches.front().state.layout() == phi2.layout());
}

TEST_CASE("measurement branches drop impossible outcomes") {
  auto l = qubit_layout({"A1", "B1"});
  auto psi = PureState::basis(l, {1, 0});
  ProtocolScript s;
  s.steps.push_back(step::ProjectiveMeasurement{Party::Alice, identity2(), {"A1"}, "z"});
  auto r = run_protocol(psi, s);
  REQUIRE(r.branches.size() == 1);
  CHECK(r.branches[0].record == std::vector<Outcome>{{"z", 1}});
  CHECK(r.touched == std::set<std::string>{"A1"});
}

TEST_CASE("exchange target needs consistent ownership") {
  auto l = qubit_layout({"A1", "B1"});
  auto psi = PureState::basis(l, {0, 1});
  ProtocolScript s;
  s.ancillas = {{"e", 2, Party::Alice}};
  s.output.moves = {{"A1", "e"}};  // A1 content must end up with Bob
  auto r = run_protocol(psi, s);
  CHECK_FALSE(exchange_target(r, psi, ExchangePair::A1B1).has_value());
  CHECK_FALSE(verify_exchange(r, psi, ExchangePair::A1B1));
}

TEST_CASE("built-in protocol lookup") {
  for (const auto& n : builtin::names()) CHECK(builtin::by_name(n).name == n);
  CHECK_THROWS(builtin::by_name("teleport"));
}

}  // TEST_SUITE
