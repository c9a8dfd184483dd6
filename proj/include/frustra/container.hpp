#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "frustra/exact_solver.hpp"
#include "frustra/mps_engine.hpp"
#include "frustra/projectors.hpp"

namespace frustra {

// Self-describing tensor container shared by projector chains, solution
// stacks and MPS states. The binary form stores complex entries as pairs of
// little-endian 64-bit floats and round-trips bit-exactly; the JSON form
// stores them as [re, im] pairs with shortest round-trip formatting.
struct TensorBlob {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::vector<std::complex<double>> data;  // row-major over the shape
};

struct Container {
  std::string kind;  // "projector_chain" | "solution_stack" | "mps_state"
  std::uint32_t n_sites = 0;
  std::uint32_t local_dim = 0;
  std::uint32_t rank = 0;
  std::uint64_t seed = 0;
  Field field = Field::Complex;
  std::vector<TensorBlob> tensors;
};

void write_binary(const Container& c, std::ostream& os);
Container read_binary(std::istream& is);

std::string to_json_string(const Container& c);
Container from_json_string(const std::string& text);

Container pack_chain(const ChainSpec& spec, const std::vector<BondProjector>& bonds);
std::vector<BondProjector> unpack_chain(const Container& c, ChainSpec* spec_out = nullptr);

Container pack_solution(const ChainSpec& spec, const SolutionStack& stack);
SolutionStack unpack_solution(const Container& c);

Container pack_mps(const ChainSpec& spec, const MpsState& state);
MpsState unpack_mps(const Container& c);

}  // namespace frustra
