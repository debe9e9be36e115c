#include "osqse/state.hpp"

#include <cstdint>
#include <cstdio>

namespace osqse {

PureState canonicalize(const PureState& state) {
  CVector v = state.amplitudes() / state.amplitudes().norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return PureState(state.layout(), std::move(v));
}

namespace {

class Fnv1a {
public:
  void add(const std::string& s) {
    for (unsigned char c : s) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
    hash_ ^= 0xff;
    hash_ *= 0x100000001b3ULL;
  }
  std::uint64_t value() const { return hash_; }

private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string fingerprint(const PureState& state) {
  auto canon = canonicalize(state);
  Fnv1a h;
  for (const auto& s : canon.layout()) {
    h.add(s.name);
    h.add(std::to_string(s.dim));
    h.add(std::string(to_string(s.role)));
  }
  const auto& v = canon.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    auto re = std::llround(v(i).real() * 1e10);
    auto im = std::llround(v(i).imag() * 1e10);
    if (re == 0 && im == 0) continue;
    h.add(std::to_string(i) + ":" + std::to_string(re) + "," + std::to_string(im));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

}  // namespace osqse
