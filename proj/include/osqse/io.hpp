#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "osqse/entropy.hpp"
#include "osqse/locc.hpp"
#include "osqse/state.hpp"
#include "osqse/zero_cost.hpp"

namespace osqse::io {

using Json = nlohmann::ordered_json;

/// Malformed JSON or a document that does not match the expected schema.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parsed amplitudes must have norm 1 within this tolerance; they are then
/// renormalized exactly.
inline constexpr double kDocumentNormTolerance = 1e-6;

// State documents:
//   {"subsystems": [{"name": "A1", "dim": 2}, ...],
//    "roles": {"A1": "A1", ...},
//    "amplitudes": [{"ket": [0, 1, ...], "re": 0.5, "im": 0}, ...]}
PureState state_from_json(const Json& doc);
Json state_to_json(const PureState& state);
PureState read_state(const std::filesystem::path& path);

/// Complex matrix as a list of rows of {"re", "im"} objects.
CMatrix matrix_from_json(const Json& doc);
Json matrix_to_json(const CMatrix& m);

// Protocol documents mirror ProtocolScript. Steps carry a "type" of
// local-isometry, measure, send, conditional or discard.
ProtocolScript protocol_from_json(const Json& doc);
Json protocol_to_json(const ProtocolScript& script);
ProtocolScript read_protocol(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);

/// Shortest text that round-trips the double.
std::string format_number(double v);

/// `alpha,f,term_split_A,term_split_B` with `0` / `inf` for the end orders.
void write_curve_csv(std::ostream& out, const RenyiCurve& curve);

Json isometries_to_json(const IsometryPair& pair);

}  // namespace osqse::io
