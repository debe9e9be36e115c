#pragma once

#include <string>
#include <vector>

#include "osqse/state.hpp"

namespace osqse {

/// Qubit layout whose subsystem names double as roles (A1, B1, A2, B2, R).
SubsystemLayout qubit_layout(const std::vector<std::string>& roles);

/// Built-in example states on qubits, ordered A1 B1 A2 B2 [R].
namespace reference {

/// (1/5)|00000> + sqrt(3/50)|00010> + (3/5)|01001> + sqrt(27/50)|11100>.
PureState psi1();
/// (|0000> + |0101> + |1010> + |1111>)/2 = ebit(A1,A2) ⊗ ebit(B1,B2).
PureState psi2();
/// (|00000> + |01111>)/sqrt2; A2/B2 symmetric, A1/B1 not.
PureState phi1();
/// (1/2) Σ_ij |i>_A1 |j>_B1 |j>_A2 |i>_B2 = ebit(A1,B2) ⊗ ebit(B1,A2).
PureState phi2();

PureState by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace reference
}  // namespace osqse
