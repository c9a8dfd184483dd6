#include "frustra/container.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace frustra {

namespace {

constexpr char kMagic[8] = {'F', 'R', 'S', 'T', 'C', 'N', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("container: truncated input");
  return value;
}

std::uint32_t kind_code(const std::string& kind) {
  if (kind == "projector_chain") return 1;
  if (kind == "solution_stack") return 2;
  if (kind == "mps_state") return 3;
  throw std::invalid_argument("container: unknown kind '" + kind + "'");
}

std::string kind_name(std::uint32_t code) {
  switch (code) {
    case 1: return "projector_chain";
    case 2: return "solution_stack";
    case 3: return "mps_state";
  }
  throw std::runtime_error("container: unknown kind code");
}

}  // namespace

void write_binary(const Container& c, std::ostream& os) {
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kind_code(c.kind));
  put<std::uint32_t>(os, c.n_sites);
  put<std::uint32_t>(os, c.local_dim);
  put<std::uint32_t>(os, c.rank);
  put<std::uint64_t>(os, c.seed);
  put<std::uint8_t>(os, c.field == Field::Complex ? 0 : 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(c.tensors.size()));
  for (const auto& t : c.tensors) {
    if (t.name.size() > 255) throw std::invalid_argument("container: tensor name too long");
    put<std::uint8_t>(os, static_cast<std::uint8_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(t.shape.size()));
    std::uint64_t count = 1;
    for (std::uint64_t dim : t.shape) {
      put<std::uint64_t>(os, dim);
      count *= dim;
    }
    if (count != t.data.size()) throw std::invalid_argument("container: shape/data mismatch");
    for (const auto& z : t.data) {
      put<double>(os, z.real());
      put<double>(os, z.imag());
    }
  }
  if (!os) throw std::runtime_error("container: write failed");
}

Container read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("container: bad magic");
  }
  Container c;
  c.kind = kind_name(get<std::uint32_t>(is));
  c.n_sites = get<std::uint32_t>(is);
  c.local_dim = get<std::uint32_t>(is);
  c.rank = get<std::uint32_t>(is);
  c.seed = get<std::uint64_t>(is);
  c.field = get<std::uint8_t>(is) == 0 ? Field::Complex : Field::Real;
  const std::uint32_t n_tensors = get<std::uint32_t>(is);
  c.tensors.resize(n_tensors);
  for (auto& t : c.tensors) {
    const std::uint8_t name_len = get<std::uint8_t>(is);
    t.name.resize(name_len);
    is.read(t.name.data(), name_len);
    const std::uint32_t ndim = get<std::uint32_t>(is);
    t.shape.resize(ndim);
    std::uint64_t count = 1;
    for (auto& dim : t.shape) {
      dim = get<std::uint64_t>(is);
      count *= dim;
    }
    t.data.resize(count);
    for (auto& z : t.data) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      z = {re, im};
    }
  }
  return c;
}

std::string to_json_string(const Container& c) {
  nlohmann::json j;
  j["kind"] = c.kind;
  j["n_sites"] = c.n_sites;
  j["local_dim"] = c.local_dim;
  j["rank"] = c.rank;
  j["seed"] = c.seed;
  j["field"] = c.field == Field::Complex ? "complex" : "real";
  j["tensors"] = nlohmann::json::array();
  for (const auto& t : c.tensors) {
    nlohmann::json jt;
    jt["name"] = t.name;
    jt["shape"] = t.shape;
    nlohmann::json data = nlohmann::json::array();
    for (const auto& z : t.data) {
      data.push_back(z.real());
      data.push_back(z.imag());
    }
    jt["data"] = std::move(data);
    j["tensors"].push_back(std::move(jt));
  }
  return j.dump();
}

Container from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Container c;
  c.kind = j.at("kind").get<std::string>();
  kind_code(c.kind);
  c.n_sites = j.at("n_sites").get<std::uint32_t>();
  c.local_dim = j.at("local_dim").get<std::uint32_t>();
  c.rank = j.at("rank").get<std::uint32_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.field = j.at("field").get<std::string>() == "real" ? Field::Real : Field::Complex;
  for (const auto& jt : j.at("tensors")) {
    TensorBlob t;
    t.name = jt.at("name").get<std::string>();
    t.shape = jt.at("shape").get<std::vector<std::uint64_t>>();
    const auto& data = jt.at("data");
    if (data.size() % 2 != 0) throw std::runtime_error("container: odd data length");
    t.data.reserve(data.size() / 2);
    for (std::size_t i = 0; i < data.size(); i += 2) {
      t.data.emplace_back(data[i].get<double>(), data[i + 1].get<double>());
    }
    c.tensors.push_back(std::move(t));
  }
  return c;
}

namespace {

TensorBlob blob_from_matrix(const std::string& name, const Eigen::MatrixXcd& m) {
  TensorBlob t;
  t.name = name;
  t.shape = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  t.data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.data.push_back(m(i, j));
  }
  return t;
}

Eigen::MatrixXcd matrix_from_blob(const TensorBlob& t) {
  if (t.shape.size() != 2) throw std::runtime_error("container: expected a rank-2 tensor");
  Eigen::MatrixXcd m(t.shape[0], t.shape[1]);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = t.data[idx++];
  }
  return m;
}

TensorBlob blob_from_tensor3(const std::string& name, const Tensor3& g) {
  TensorBlob t;
  t.name = name;
  t.shape = {static_cast<std::uint64_t>(g.left()), static_cast<std::uint64_t>(g.phys()),
             static_cast<std::uint64_t>(g.right())};
  t.data = g.to_row_major();
  return t;
}

Tensor3 tensor3_from_blob(const TensorBlob& t) {
  if (t.shape.size() != 3) throw std::runtime_error("container: expected a rank-3 tensor");
  return Tensor3::from_row_major(t.data, static_cast<int>(t.shape[0]),
                                 static_cast<int>(t.shape[1]), static_cast<int>(t.shape[2]));
}

ChainSpec spec_from_header(const Container& c) {
  ChainSpec spec;
  spec.n_sites = static_cast<int>(c.n_sites);
  spec.local_dim = static_cast<int>(c.local_dim);
  spec.rank = static_cast<int>(c.rank);
  spec.seed = c.seed;
  spec.field = c.field;
  return spec;
}

}  // namespace

Container pack_chain(const ChainSpec& spec, const std::vector<BondProjector>& bonds) {
  Container c;
  c.kind = "projector_chain";
  c.n_sites = static_cast<std::uint32_t>(spec.n_sites);
  c.local_dim = static_cast<std::uint32_t>(spec.local_dim);
  c.rank = static_cast<std::uint32_t>(spec.rank);
  c.seed = spec.seed;
  c.field = spec.field;
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    c.tensors.push_back(blob_from_matrix("bond_" + std::to_string(k), bonds[k].vectors));
  }
  return c;
}

std::vector<BondProjector> unpack_chain(const Container& c, ChainSpec* spec_out) {
  if (c.kind != "projector_chain") throw std::runtime_error("container: not a projector chain");
  const ChainSpec spec = spec_from_header(c);
  if (spec_out) *spec_out = spec;
  std::vector<BondProjector> bonds;
  for (std::size_t k = 0; k < c.tensors.size(); ++k) {
    BondProjector bp;
    bp.bond_index = static_cast<int>(k);
    bp.local_dim = spec.local_dim;
    bp.vectors = matrix_from_blob(c.tensors[k]);
    bonds.push_back(std::move(bp));
  }
  return bonds;
}

Container pack_solution(const ChainSpec& spec, const SolutionStack& stack) {
  Container c;
  c.kind = "solution_stack";
  c.n_sites = static_cast<std::uint32_t>(spec.n_sites);
  c.local_dim = static_cast<std::uint32_t>(spec.local_dim);
  c.rank = static_cast<std::uint32_t>(spec.rank);
  c.seed = spec.seed;
  c.field = spec.field;
  for (std::size_t k = 0; k < stack.site_tensors.size(); ++k) {
    c.tensors.push_back(blob_from_tensor3("gamma_" + std::to_string(k), stack.site_tensors[k]));
  }
  return c;
}

SolutionStack unpack_solution(const Container& c) {
  if (c.kind != "solution_stack") throw std::runtime_error("container: not a solution stack");
  SolutionStack stack;
  stack.solution_counts = {1};
  for (const auto& t : c.tensors) {
    stack.site_tensors.push_back(tensor3_from_blob(t));
    stack.solution_counts.push_back(stack.site_tensors.back().right());
  }
  return stack;
}

Container pack_mps(const ChainSpec& spec, const MpsState& state) {
  Container c;
  c.kind = "mps_state";
  c.n_sites = static_cast<std::uint32_t>(spec.n_sites);
  c.local_dim = static_cast<std::uint32_t>(spec.local_dim);
  c.rank = static_cast<std::uint32_t>(spec.rank);
  c.seed = spec.seed;
  c.field = spec.field;
  for (int k = 0; k < state.n_sites(); ++k) {
    c.tensors.push_back(blob_from_tensor3("gamma_" + std::to_string(k), state.gamma(k)));
  }
  for (int k = 0; k < state.n_sites() - 1; ++k) {
    TensorBlob t;
    t.name = "lambda_" + std::to_string(k);
    t.shape = {static_cast<std::uint64_t>(state.lambda(k).size())};
    for (Eigen::Index i = 0; i < state.lambda(k).size(); ++i) {
      t.data.emplace_back(state.lambda(k)(i), 0.0);
    }
    c.tensors.push_back(std::move(t));
  }
  return c;
}

MpsState unpack_mps(const Container& c) {
  if (c.kind != "mps_state") throw std::runtime_error("container: not an MPS state");
  const int n = static_cast<int>(c.n_sites);
  MpsState state(n, static_cast<int>(c.local_dim));
  for (int k = 0; k < n; ++k) {
    state.gamma(k) = tensor3_from_blob(c.tensors[static_cast<std::size_t>(k)]);
  }
  for (int k = 0; k < n - 1; ++k) {
    const TensorBlob& t = c.tensors[static_cast<std::size_t>(n + k)];
    if (t.shape.size() != 1) throw std::runtime_error("container: expected a rank-1 tensor");
    Eigen::VectorXd lam(t.shape[0]);
    for (std::size_t i = 0; i < t.data.size(); ++i) lam(static_cast<Eigen::Index>(i)) = t.data[i].real();
    state.lambda(k) = std::move(lam);
  }
  return state;
}

}  // namespace frustra
