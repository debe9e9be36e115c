#include "osqse/reference_states.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace osqse {

SubsystemLayout qubit_layout(const std::vector<std::string>& roles) {
  std::vector<Subsystem> subs;
  for (const auto& r : roles) subs.push_back({r, 2, parse_role(r)});
  return SubsystemLayout(std::move(subs));
}

namespace reference {
namespace {

PureState from_kets(const std::vector<std::string>& roles,
                    const std::vector<std::pair<std::string, double>>& terms) {
  auto layout = qubit_layout(roles);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  for (const auto& [ket, amp] : terms) v(std::stol(ket, nullptr, 2)) = amp;
  return PureState(std::move(layout), std::move(v));
}

const std::vector<std::string> kFive{"A1", "B1", "A2", "B2", "R"};
const std::vector<std::string> kFour{"A1", "B1", "A2", "B2"};

}  // namespace

PureState psi1() {
  return from_kets(kFive, {{"00000", 1.0 / 5.0},
                           {"00010", std::sqrt(3.0 / 50.0)},
                           {"01001", 3.0 / 5.0},
                           {"11100", std::sqrt(27.0 / 50.0)}});
}

PureState psi2() { return from_kets(kFour, {{"0000", 0.5}, {"0101", 0.5}, {"1010", 0.5}, {"1111", 0.5}}); }

PureState phi1() {
  const double h = 1.0 / std::sqrt(2.0);
  return from_kets(kFive, {{"00000", h}, {"01111", h}});
}

PureState phi2() {
  // |i>_A1 |j>_B1 |j>_A2 |i>_B2
  return from_kets(kFour, {{"0000", 0.5}, {"0110", 0.5}, {"1001", 0.5}, {"1111", 0.5}});
}

PureState by_name(const std::string& name) {
  if (name == "psi1") return psi1();
  if (name == "psi2") return psi2();
  if (name == "phi1") return phi1();
  if (name == "phi2") return phi2();
  throw std::invalid_argument("unknown reference state '" + name + "'");
}

std::vector<std::string> names() { return {"psi1", "psi2", "phi1", "phi2"}; }

}  // namespace reference
}  // namespace osqse
