#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "osqse/reference_states.hpp"
#include "osqse/state.hpp"

using namespace osqse;

namespace {

SubsystemLayout mixed_layout() {
  return SubsystemLayout({{"A1", 2, Role::A1}, {"B1", 3, Role::B1}, {"A2", 2, Role::A2}, {"B2", 2, Role::B2}});
}

}  // namespace

TEST_SUITE("state") {

TEST_CASE("layout groups and lookups") {
  auto l = mixed_layout();
  CHECK(l.total_dim() == 24);
  CHECK(l.index_of("A2") == 2);
  CHECK(l.group(RoleGroup::A) == std::vector<std::string>{"A1", "A2"});
  CHECK(l.group(RoleGroup::B) == std::vector<std::string>{"B1", "B2"});
  CHECK(l.group(RoleGroup::R).empty());
  CHECK(l.dim_of({"B1", "B2"}) == 6);
  CHECK_THROWS_AS(l.require("R"), LayoutError);

  SubsystemLayout no_b1({{"A1", 2, Role::A1}, {"A2", 2, Role::A2}});
  CHECK_THROWS_AS(no_b1.group(RoleGroup::B1), MissingRoleError);
  CHECK_THROWS_AS(SubsystemLayout({{"A1", 2, Role::A1}, {"A1", 2, Role::B1}}), LayoutError);
  CHECK_THROWS_AS(SubsystemLayout({{"A1", 0, Role::A1}}), LayoutError);
}

TEST_CASE("index encoding round-trips") {
  std::vector<std::size_t> dims{2, 3, 2, 2};
  for (std::size_t i = 0; i < 24; ++i) {
    auto d = decode_index(i, dims);
    CHECK(d == oracle::digits_of(i, dims));
    CHECK(encode_index(d, dims) == i);
  }
}

TEST_CASE("pure state validation") {
  auto l = mixed_layout();
  CVector v = CVector::Zero(24);
  v(0) = 0.5;
  CHECK_THROWS_AS(PureState(l, v), StateError);
  CHECK_THROWS_AS(PureState(l, CVector::Zero(3)), StateError);
  auto s = PureState::normalized(l, v);
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("partial trace matches index summation") {
  std::mt19937_64 rng(7);
  const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {2, 3}, {2, 2, 2}, {3, 2, 2}, {2, 2, 2, 2}, {4, 4}};
  for (const auto& dims : shapes) {
    std::vector<Subsystem> subs;
    for (std::size_t k = 0; k < dims.size(); ++k) subs.push_back({"s" + std::to_string(k), dims[k], Role::Ancilla});
    SubsystemLayout layout(subs);
    auto psi = oracle::random_state(rng, layout);
    auto raw = oracle::to_std(psi.amplitudes());
    for (std::uint32_t mask = 1; mask < (1u << dims.size()); ++mask) {
      std::vector<std::size_t> keep;
      std::vector<std::string> names;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (mask & (1u << k)) {
          keep.push_back(k);
          names.push_back(subs[k].name);
        }
      auto expected = oracle::partial_trace(raw, dims, keep);
      auto got = partial_trace(psi, names).matrix();
      double worst = 0;
      for (std::size_t i = 0; i < expected.size(); ++i)
        for (std::size_t j = 0; j < expected.size(); ++j)
          worst = std::max(worst, std::abs(expected[i][j] - got(Eigen::Index(i), Eigen::Index(j))));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("density partial trace agrees with pure partial trace") {
  std::mt19937_64 rng(11);
  auto l = mixed_layout();
  auto psi = oracle::random_state(rng, l);
  DensityOperator rho(l, psi.amplitudes() * psi.amplitudes().adjoint());
  auto a = partial_trace(rho, {"B1", "A2"}).matrix();
  auto b = partial_trace(psi, {"A2", "B1"}).matrix();
  CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("reduced spectra of complementary parts coincide") {
  std::mt19937_64 rng(3);
  auto l = mixed_layout();
  for (int t = 0; t < 20; ++t) {
    auto psi = oracle::random_state(rng, l);
    auto s1 = reduced_spectrum(psi, {"A1", "B2"});
    auto s2 = reduced_spectrum(psi, {"B1", "A2"});
    CHECK(same_spectrum(s1, s2, 1e-10));
    auto via_density = spectrum(partial_trace(psi, {"A1", "B2"}));
    CHECK(same_spectrum(s1, via_density, 1e-10));
  }
  CHECK(reduced_spectrum(reference::psi2(), {}).size() == 1);
}

TEST_CASE("schmidt decomposition reconstructs the state") {
  std::mt19937_64 rng(5);
  auto psi = oracle::random_state(rng, mixed_layout());
  auto sd = schmidt_decompose(psi, {"B1", "A2"});
  CHECK(sd.coefficients.size() == 4);  // limited by the 4-dimensional A1B2 side
  CHECK(equal_up_to_phase(sd.reconstruct(), psi, 1e-10));
}

TEST_CASE("spectrum validation and tensor") {
  CHECK_THROWS_AS(Spectrum::from_values({0.5, 0.2}), StateError);
  auto p = Spectrum::from_values({0.25, 0.75, 0.0});
  CHECK(p.size() == 2);
  CHECK(p.max() == 0.75);
  auto t = tensor(p, Spectrum::uniform(2));
  CHECK(t.size() == 4);
  CHECK(t[0] == doctest::Approx(0.375));
}

TEST_CASE("local operations and exchange") {
  std::mt19937_64 rng(13);
  auto l = mixed_layout();
  auto psi = oracle::random_state(rng, l);
  auto raw = oracle::to_std(psi.amplitudes());

  auto swapped = exchange_subsystems(psi, {"A2"}, {"B2"});
  auto expect = oracle::swap_digits(raw, l.dims(), 2, 3);
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(std::abs(swapped.amplitudes()(Eigen::Index(i)) - expect[i]) < 1e-14);
  CHECK_THROWS_AS(exchange_subsystems(psi, {"A1"}, {"B1"}), DimensionMismatch);

  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  auto flipped = apply_local(psi, x, {"A1"});
  CHECK(std::abs(flipped.amplitudes()(0) - psi.amplitudes()(12)) < 1e-14);
  CHECK_THROWS_AS(apply_local(psi, CMatrix(CMatrix::Ones(2, 2)), {"A1"}), NotIsometryError);

  // Isometry into a larger register changes the layout.
  CMatrix embed = CMatrix::Zero(3, 2);
  embed(0, 0) = embed(2, 1) = 1;
  auto grown = apply_local(psi, embed, {"A2"}, {3});
  CHECK(grown.layout().at("A2").dim == 3);
  CHECK(grown.amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("permute reorders digits") {
  std::mt19937_64 rng(17);
  auto l = mixed_layout();
  auto psi = oracle::random_state(rng, l);
  auto p = permute(psi, {"B2", "A1", "B1", "A2"});
  CHECK(p.layout().names() == std::vector<std::string>{"B2", "A1", "B1", "A2"});
  auto back = permute(p, l.names());
  CHECK((back.amplitudes() - psi.amplitudes()).norm() < 1e-15);
  auto d = decode_index(5, l.dims());
  auto i = encode_index({d[3], d[0], d[1], d[2]}, p.layout().dims());
  CHECK(p.amplitudes()(Eigen::Index(i)) == psi.amplitudes()(5));
}

TEST_CASE("swap_check on reference states") {
  CHECK(swap_check(reference::phi1(), RoleGroup::A2, RoleGroup::B2));
  CHECK_FALSE(swap_check(reference::phi1(), RoleGroup::A1, RoleGroup::B1));
  CHECK(swap_check(reference::psi2(), RoleGroup::A, RoleGroup::B));
}

TEST_CASE("fingerprint ignores global phase") {
  std::mt19937_64 rng(19);
  auto psi = oracle::random_state(rng, mixed_layout());
  PureState rotated(psi.layout(), psi.amplitudes() * std::polar(1.0, 0.9));
  CHECK(fingerprint(psi) == fingerprint(rotated));
  CHECK(fingerprint(psi) != fingerprint(reference::psi1()));
  CHECK(fingerprint(psi).size() == 16);
}

}  // TEST_SUITE
