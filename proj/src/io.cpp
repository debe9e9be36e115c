#include "osqse/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

namespace osqse::io {

namespace {

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const Json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t get_size(const Json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double get_number(const Json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

std::vector<std::string> string_list(const Json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be a list of names");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ParseError(std::string(what) + " must be a list of names");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<std::string> optional_list(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  return string_list(*it, key);
}

Party party(const Json& obj, const char* key) {
  try {
    return parse_party(get_string(obj, key));
  } catch (const LayoutError& e) {
    throw ParseError(e.what());
  }
}

std::vector<Register> registers(const Json& obj, const char* key, std::optional<Party> side) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_array()) throw ParseError(std::string(key) + " must be a list");
  std::vector<Register> out;
  for (const auto& r : *it) {
    Register reg;
    reg.name = get_string(r, "name");
    reg.dim = get_size(r, "dim");
    reg.owner = r.contains("owner") ? party(r, "owner") : side.value_or(Party::Alice);
    if (!r.contains("owner") && !side) throw ParseError("ancilla '" + reg.name + "' needs an owner");
    out.push_back(std::move(reg));
  }
  return out;
}

Json register_list(const std::vector<Register>& regs, bool with_owner) {
  Json out = Json::array();
  for (const auto& r : regs) {
    Json e = {{"name", r.name}, {"dim", r.dim}};
    if (with_owner) e["owner"] = std::string(to_string(r.owner));
    out.push_back(std::move(e));
  }
  return out;
}

struct StepWriter {
  Json operator()(const step::LocalIsometry& s) const {
    return {{"type", "local-isometry"},
            {"owner", std::string(to_string(s.owner))},
            {"targets", s.targets},
            {"matrix", matrix_to_json(s.matrix)}};
  }
  Json operator()(const step::ProjectiveMeasurement& s) const {
    return {{"type", "measure"},
            {"owner", std::string(to_string(s.owner))},
            {"targets", s.targets},
            {"label", s.label},
            {"basis", matrix_to_json(s.basis)}};
  }
  Json operator()(const step::ClassicalSend& s) const {
    return {{"type", "send"},
            {"from", std::string(to_string(s.from))},
            {"to", std::string(to_string(s.to))},
            {"label", s.label}};
  }
  Json operator()(const step::ConditionalLocal& s) const {
    Json table = Json::object();
    for (const auto& [m, op] : s.table) table[std::to_string(m)] = matrix_to_json(op);
    return {{"type", "conditional"},
            {"owner", std::string(to_string(s.owner))},
            {"label", s.label},
            {"targets", s.targets},
            {"table", std::move(table)}};
  }
  Json operator()(const step::DiscardAncilla& s) const {
    return {{"type", "discard"}, {"owner", std::string(to_string(s.owner))}, {"targets", s.targets}};
  }
};

Step step_from_json(const Json& s) {
  const auto type = get_string(s, "type");
  if (type == "local-isometry")
    return step::LocalIsometry{party(s, "owner"), matrix_from_json(field(s, "matrix")),
                               string_list(field(s, "targets"), "targets")};
  if (type == "measure")
    return step::ProjectiveMeasurement{party(s, "owner"), matrix_from_json(field(s, "basis")),
                                       string_list(field(s, "targets"), "targets"), get_string(s, "label")};
  if (type == "send") return step::ClassicalSend{party(s, "from"), party(s, "to"), get_string(s, "label")};
  if (type == "conditional") {
    step::ConditionalLocal c;
    c.owner = party(s, "owner");
    c.label = get_string(s, "label");
    c.targets = string_list(field(s, "targets"), "targets");
    const auto& table = field(s, "table");
    if (!table.is_object()) throw ParseError("conditional table must map outcomes to matrices");
    for (const auto& [key, value] : table.items()) {
      std::size_t m = 0;
      auto res = std::from_chars(key.data(), key.data() + key.size(), m);
      if (res.ec != std::errc() || res.ptr != key.data() + key.size())
        throw ParseError("conditional table key '" + key + "' is not an outcome index");
      c.table[m] = matrix_from_json(value);
    }
    return c;
  }
  if (type == "discard") return step::DiscardAncilla{party(s, "owner"), string_list(field(s, "targets"), "targets")};
  throw ParseError("unknown step type '" + type + "'");
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

PureState state_from_json(const Json& doc) {
  const auto& subs = field(doc, "subsystems");
  const auto& roles = field(doc, "roles");
  const auto& amps = field(doc, "amplitudes");
  if (!subs.is_array() || subs.empty()) throw ParseError("subsystems must be a non-empty list");
  if (!roles.is_object()) throw ParseError("roles must map subsystem names to roles");
  if (!amps.is_array()) throw ParseError("amplitudes must be a list");

  std::vector<Subsystem> list;
  for (const auto& s : subs) {
    Subsystem sub;
    sub.name = get_string(s, "name");
    sub.dim = get_size(s, "dim");
    if (sub.dim == 0) throw ParseError("subsystem '" + sub.name + "' has dimension 0");
    auto r = roles.find(sub.name);
    if (r == roles.end() || !r->is_string()) throw ParseError("no role given for subsystem '" + sub.name + "'");
    try {
      sub.role = parse_role(r->get<std::string>());
    } catch (const LayoutError& e) {
      throw ParseError(e.what());
    }
    list.push_back(std::move(sub));
  }
  for (const auto& [name, role] : roles.items()) {
    bool known = std::any_of(list.begin(), list.end(), [&](const Subsystem& s) { return s.name == name; });
    if (!known) throw ParseError("role given for unknown subsystem '" + name + "'");
  }

  SubsystemLayout layout;
  try {
    layout = SubsystemLayout(std::move(list));
  } catch (const LayoutError& e) {
    throw ParseError(e.what());
  }

  CVector v = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  std::set<std::vector<std::size_t>> seen;
  for (const auto& a : amps) {
    const auto& ket = field(a, "ket");
    if (!ket.is_array() || ket.size() != layout.size())
      throw ParseError("each ket needs one digit per subsystem");
    std::vector<std::size_t> digits;
    for (std::size_t k = 0; k < ket.size(); ++k) {
      if (!ket[k].is_number_integer() || ket[k].get<long long>() < 0 ||
          ket[k].get<std::size_t>() >= layout[k].dim)
        throw ParseError("ket digit out of range for subsystem '" + layout[k].name + "'");
      digits.push_back(ket[k].get<std::size_t>());
    }
    if (!seen.insert(digits).second) throw ParseError("duplicate ket in amplitudes");
    v(static_cast<Eigen::Index>(encode_index(digits, layout.dims()))) =
        std::complex<double>(get_number(a, "re", 0.0), get_number(a, "im", 0.0));
  }
  const double norm = v.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kDocumentNormTolerance)
    throw ParseError("amplitudes are not normalized (norm " + format_number(norm) + ")");
  return PureState(std::move(layout), v / norm);
}

Json state_to_json(const PureState& state) {
  const auto& layout = state.layout();
  Json doc;
  Json subs = Json::array();
  Json roles = Json::object();
  for (const auto& s : layout) {
    subs.push_back({{"name", s.name}, {"dim", s.dim}});
    roles[s.name] = std::string(to_string(s.role));
  }
  doc["subsystems"] = std::move(subs);
  doc["roles"] = std::move(roles);
  Json amps = Json::array();
  const auto& v = state.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == std::complex<double>(0, 0)) continue;
    amps.push_back({{"ket", decode_index(static_cast<std::size_t>(i), layout.dims())}, {"re", v(i).real()}, {"im", v(i).imag()}});
  }
  doc["amplitudes"] = std::move(amps);
  return doc;
}

PureState read_state(const std::filesystem::path& path) { return state_from_json(read_json(path)); }

CMatrix matrix_from_json(const Json& doc) {
  if (!doc.is_array() || doc.empty() || !doc.front().is_array())
    throw ParseError("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(doc.size());
  const auto cols = static_cast<Eigen::Index>(doc.front().size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = doc[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("matrix rows differ in length");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& e = row[static_cast<std::size_t>(j)];
      if (e.is_number()) {
        m(i, j) = e.get<double>();
      } else if (e.is_object()) {
        m(i, j) = {get_number(e, "re", 0.0), get_number(e, "im", 0.0)};
      } else {
        throw ParseError("matrix entries must be {re, im} objects");
      }
    }
  }
  return m;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({{"re", m(i, j).real()}, {"im", m(i, j).imag()}});
    rows.push_back(std::move(row));
  }
  return rows;
}

ProtocolScript protocol_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("protocol document must be an object");
  ProtocolScript s;
  s.name = doc.contains("name") ? get_string(doc, "name") : "script";
  s.resource_in_rank = doc.contains("resource_in_rank") ? get_size(doc, "resource_in_rank") : 1;
  s.resource_out_rank = doc.contains("resource_out_rank") ? get_size(doc, "resource_out_rank") : 1;
  s.resource_in_alice = registers(doc, "resource_in_alice", Party::Alice);
  s.resource_in_bob = registers(doc, "resource_in_bob", Party::Bob);
  s.ancillas = registers(doc, "ancillas", std::nullopt);
  const auto& steps = field(doc, "steps");
  if (!steps.is_array()) throw ParseError("steps must be a list");
  for (const auto& st : steps) s.steps.push_back(step_from_json(st));
  if (auto it = doc.find("output"); it != doc.end()) {
    if (auto m = it->find("moves"); m != it->end()) {
      if (!m->is_object()) throw ParseError("output.moves must map subsystems to registers");
      for (const auto& [from, to] : m->items()) {
        if (!to.is_string()) throw ParseError("output.moves values must be register names");
        s.output.moves[from] = to.get<std::string>();
      }
    }
    s.output.resource_out_alice = optional_list(*it, "resource_out_alice");
    s.output.resource_out_bob = optional_list(*it, "resource_out_bob");
  }
  return s;
}

Json protocol_to_json(const ProtocolScript& script) {
  Json doc;
  doc["name"] = script.name;
  doc["resource_in_rank"] = script.resource_in_rank;
  doc["resource_out_rank"] = script.resource_out_rank;
  doc["resource_in_alice"] = register_list(script.resource_in_alice, false);
  doc["resource_in_bob"] = register_list(script.resource_in_bob, false);
  doc["ancillas"] = register_list(script.ancillas, true);
  Json steps = Json::array();
  for (const auto& st : script.steps) steps.push_back(std::visit(StepWriter{}, st));
  doc["steps"] = std::move(steps);
  Json moves = Json::object();
  for (const auto& [from, to] : script.output.moves) moves[from] = to;
  doc["output"] = {{"moves", std::move(moves)},
                   {"resource_out_alice", script.output.resource_out_alice},
                   {"resource_out_bob", script.output.resource_out_bob}};
  return doc;
}

ProtocolScript read_protocol(const std::filesystem::path& path) { return protocol_from_json(read_json(path)); }

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const RenyiCurve& curve) {
  out << "alpha,f,term_split_A,term_split_B\n";
  for (const auto& s : curve.samples)
    out << s.alpha.to_string() << ',' << format_number(s.f) << ',' << format_number(s.term_split_A) << ','
        << format_number(s.term_split_B) << '\n';
}

Json isometries_to_json(const IsometryPair& pair) {
  return {{"U", matrix_to_json(pair.U)}, {"V", matrix_to_json(pair.V)}, {"residual", pair.residual}};
}

}  // namespace osqse::io
