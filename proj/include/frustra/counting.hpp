#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace frustra {

using BigInt = boost::multiprecision::cpp_int;

enum class Regime { Frustrated, Critical, EntangledUnfrustrated, ProductSoluble };

const char* regime_name(Regime r);

// D_0..D_n of D_n = d D_{n-1} - r D_{n-2}, D_0 = 1, D_1 = d, exact integers.
std::vector<BigInt> solution_count_sequence(int d, int r, int n_max);

// D_n = (f^{n+1} - g^{n+1}) / (f - g) with f, g the roots of x^2 - d x + r,
// evaluated exactly by binary exponentiation in Z[x]/(x^2 - d x + r). Handles
// the repeated-root case (4r = d^2) through the same algebra.
BigInt closed_form_count_exact(int d, int r, int n);

// Floating-point evaluation of the closed form: the three regime formulas
// (real roots, repeated root, complex pair with the sin form). Results whose
// magnitude falls below the formula's roundoff envelope are snapped to zero.
double closed_form_count(int d, int r, int n);

struct CountReport {
  int d = 0;
  int r = 0;
  std::vector<BigInt> count_sequence;  // D_0..D_n
  std::complex<double> root_f;         // f + g = d, f * g = r, |f| >= |g|
  std::complex<double> root_g;
  std::optional<double> theta;         // arccos(d / (2 sqrt(r))), only if 4r > d^2
  Regime regime = Regime::ProductSoluble;
  std::optional<int> first_frustrated_length;  // smallest n with D_n <= 0

  std::string to_json() const;  // big integers as decimal strings
};

// Frustrated iff 4r > d^2; Critical iff 4r = d^2 and r >= d; ProductSoluble
// iff r < d; EntangledUnfrustrated otherwise. The only overlap (d=2, r=1)
// resolves to ProductSoluble. The sequence is extended far enough to locate
// the first nonpositive entry in the frustrated regime.
CountReport classify_regime(int d, int r, int n_max = 60);

struct DominationCheck {
  bool ok = false;
  std::optional<std::size_t> first_violation;  // index of the first bad entry
  std::vector<BigInt> slack;                   // u_n >= 0 with u_0 unused, when ok
};

// Checks s_0 = 1, s_n >= 0, s_1 <= d s_0 and s_{n+1} <= d s_n - r s_{n-1}.
// On success also verifies s_n <= D_n and returns the slack sequence.
DominationCheck verify_dominated_sequence(const std::vector<BigInt>& s, int d, int r);

}  // namespace frustra
