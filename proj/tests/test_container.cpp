#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "frustra/container.hpp"
#include "frustra/exact_solver.hpp"

using namespace frustra;

namespace {

ChainSpec make_spec() {
  ChainSpec spec;
  spec.n_sites = 4;
  spec.local_dim = 3;
  spec.rank = 2;
  spec.seed = 0xfeedbeefcafe1234ull;
  return spec;
}

}  // namespace

TEST_CASE("projector chain round trip") {
  const ChainSpec spec = make_spec();
  const auto bonds = sample_chain(spec);
  const Container packed = pack_chain(spec, bonds);

  SUBCASE("binary form is bit-exact and stable") {
    std::ostringstream os(std::ios::binary);
    write_binary(packed, os);
    const std::string bytes = os.str();

    std::istringstream is(bytes, std::ios::binary);
    const Container restored = read_binary(is);
    ChainSpec restored_spec;
    const auto restored_bonds = unpack_chain(restored, &restored_spec);
    CHECK(restored_spec.n_sites == spec.n_sites);
    CHECK(restored_spec.local_dim == spec.local_dim);
    CHECK(restored_spec.rank == spec.rank);
    CHECK(restored_spec.seed == spec.seed);
    REQUIRE(restored_bonds.size() == bonds.size());
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      CHECK(restored_bonds[k].vectors == bonds[k].vectors);  // exact, no tolerance
    }

    std::ostringstream os2(std::ios::binary);
    write_binary(restored, os2);
    CHECK(os2.str() == bytes);
  }

  SUBCASE("JSON form is bit-exact") {
    const std::string text = to_json_string(packed);
    const Container restored = from_json_string(text);
    const auto restored_bonds = unpack_chain(restored);
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      CHECK(restored_bonds[k].vectors == bonds[k].vectors);
    }
    CHECK(to_json_string(restored) == text);
  }
}

TEST_CASE("solution stack round trip preserves shapes and data") {
  const ChainSpec spec = make_spec();
  const auto bonds = sample_chain(spec);
  const SolutionStack stack = propagate_solutions(spec, bonds);
  const Container packed = pack_solution(spec, stack);

  std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(packed, buffer);
  const SolutionStack restored = unpack_solution(read_binary(buffer));

  CHECK(restored.solution_counts == stack.solution_counts);
  REQUIRE(restored.site_tensors.size() == stack.site_tensors.size());
  for (std::size_t k = 0; k < stack.site_tensors.size(); ++k) {
    const Tensor3& a = stack.site_tensors[k];
    const Tensor3& b = restored.site_tensors[k];
    CHECK(a.left() == b.left());
    CHECK(a.phys() == b.phys());
    CHECK(a.right() == b.right());
    for (int i = 0; i < a.phys(); ++i) CHECK(a.slice(i) == b.slice(i));
  }
}

TEST_CASE("mps state round trip") {
  ChainSpec spec = make_spec();
  const auto bonds = sample_chain(spec);
  MpsState state = uniform_initial_state(spec);
  for (int sw = 1; sw <= 3; ++sw) sweep(state, bonds, 0.2, 4, sw);

  const Container packed = pack_mps(spec, state);
  std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(packed, buffer);
  const MpsState restored = unpack_mps(read_binary(buffer));

  CHECK(restored.n_sites() == state.n_sites());
  for (int k = 0; k < state.n_sites(); ++k) {
    for (int i = 0; i < state.local_dim(); ++i) {
      CHECK(restored.gamma(k).slice(i) == state.gamma(k).slice(i));
    }
  }
  for (int k = 0; k < state.n_sites() - 1; ++k) {
    CHECK(restored.lambda(k) == state.lambda(k));
  }
  CHECK((restored.densify() - state.densify()).norm() == 0.0);
}

TEST_CASE("malformed input is rejected") {
  SUBCASE("bad magic") {
    std::istringstream is("not a container", std::ios::binary);
    CHECK_THROWS_AS(read_binary(is), std::runtime_error);
  }
  SUBCASE("truncated stream") {
    const ChainSpec spec = make_spec();
    const auto bonds = sample_chain(spec);
    std::ostringstream os(std::ios::binary);
    write_binary(pack_chain(spec, bonds), os);
    const std::string bytes = os.str().substr(0, 40);
    std::istringstream is(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_binary(is), std::runtime_error);
  }
  SUBCASE("kind mismatch") {
    const ChainSpec spec = make_spec();
    const auto bonds = sample_chain(spec);
    const Container packed = pack_chain(spec, bonds);
    CHECK_THROWS_AS(unpack_solution(packed), std::runtime_error);
  }
}
