#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frustra/counting.hpp"

using namespace frustra;

TEST_CASE("recursion matches the hand-evaluated sequences") {
  SUBCASE("d=4 r=4 grows as 2^n (n+1)") {
    const auto seq = solution_count_sequence(4, 4, 5);
    const std::vector<BigInt> expected{1, 4, 12, 32, 80, 192};
    CHECK(seq == expected);
  }
  SUBCASE("d=2 r=1 grows linearly") {
    const auto seq = solution_count_sequence(2, 1, 6);
    for (int n = 0; n <= 6; ++n) CHECK(seq[n] == n + 1);
  }
  SUBCASE("d=4 r=5 turns negative at n=6") {
    const auto seq = solution_count_sequence(4, 5, 6);
    const std::vector<BigInt> expected{1, 4, 11, 24, 41, 44, -29};
    CHECK(seq == expected);
  }
}

TEST_CASE("exact closed form equals the recursion on the whole small grid") {
  for (int d = 2; d <= 8; ++d) {
    for (int r = 1; r <= d * d; ++r) {
      const auto seq = solution_count_sequence(d, r, 40);
      for (int n = 0; n <= 40; ++n) {
        CAPTURE(d);
        CAPTURE(r);
        CAPTURE(n);
        CHECK(closed_form_count_exact(d, r, n) == seq[n]);
      }
    }
  }
}

TEST_CASE("floating closed form: integer-root, critical and oscillatory cells") {
  SUBCASE("d=5 r=4 has roots 4 and 1") {
    CHECK(closed_form_count(5, 4, 0) == doctest::Approx(1));
    CHECK(closed_form_count(5, 4, 1) == doctest::Approx(5));
    CHECK(closed_form_count(5, 4, 2) == doctest::Approx(21));
    CHECK(closed_form_count(5, 4, 3) == doctest::Approx(85));
  }
  SUBCASE("critical d=4 r=4") {
    CHECK(closed_form_count(4, 4, 3) == doctest::Approx(32));
  }
  SUBCASE("oscillatory d=4 r=5") {
    CHECK(closed_form_count(4, 5, 5) == doctest::Approx(44).epsilon(1e-9));
    CHECK(closed_form_count(4, 5, 6) == doctest::Approx(-29).epsilon(1e-9));
    CHECK(closed_form_count(4, 5, 6) < 0);
  }
  SUBCASE("exact zeros are snapped") {
    CHECK(closed_form_count(2, 2, 3) == 0.0);   // theta = pi/4
    CHECK(closed_form_count(3, 3, 5) == 0.0);   // theta = pi/6
    CHECK(closed_form_count(4, 16, 2) == 0.0);  // theta = pi/3
  }
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(2, 1).regime == Regime::ProductSoluble);
  CHECK(classify_regime(4, 4).regime == Regime::Critical);
  CHECK(classify_regime(4, 5).regime == Regime::Frustrated);
  CHECK(classify_regime(5, 5).regime == Regime::EntangledUnfrustrated);
  CHECK(classify_regime(6, 9).regime == Regime::Critical);

  SUBCASE("first frustrated length of (4,5) is 6") {
    const CountReport rep = classify_regime(4, 5);
    REQUIRE(rep.first_frustrated_length.has_value());
    CHECK(*rep.first_frustrated_length == 6);
  }
  SUBCASE("theta only defined past the critical line") {
    CHECK(!classify_regime(4, 4).theta.has_value());
    CHECK(classify_regime(4, 5).theta.has_value());
  }
  SUBCASE("roots multiply and sum correctly") {
    for (int d = 2; d <= 6; ++d) {
      for (int r = 1; r <= d * d; ++r) {
        const CountReport rep = classify_regime(d, r, 2);
        CHECK(std::abs(rep.root_f + rep.root_g - std::complex<double>(d, 0)) < 1e-12);
        CHECK(std::abs(rep.root_f * rep.root_g - std::complex<double>(r, 0)) < 1e-12);
      }
    }
  }
  SUBCASE("partition is total and exclusive") {
    for (int d = 2; d <= 8; ++d) {
      for (int r = 1; r <= d * d; ++r) {
        const Regime regime = classify_regime(d, r, 2).regime;
        const bool frustrated = 4 * r > d * d;
        const bool product = r < d;
        const bool critical = 4 * r == d * d && r >= d;
        const bool entangled = r >= d && 4 * r < d * d;
        CHECK(static_cast<int>(frustrated) + static_cast<int>(product) +
                  static_cast<int>(critical) + static_cast<int>(entangled) ==
              1);
        if (frustrated) CHECK(regime == Regime::Frustrated);
        if (product) CHECK(regime == Regime::ProductSoluble);
        if (critical) CHECK(regime == Regime::Critical);
        if (entangled) CHECK(regime == Regime::EntangledUnfrustrated);
      }
    }
  }
}

TEST_CASE("first nonpositive index follows the angle rule") {
  // smallest n with D_n <= 0 equals the smallest n with n+1 >= pi/theta;
  // integer pi/theta (a zero crossing through D_n = 0) makes >= the right
  // comparison, e.g. (2,2) and (3,3).
  for (int d = 2; d <= 8; ++d) {
    for (int r = 1; r <= d * d; ++r) {
      if (4 * r <= d * d) continue;
      const CountReport rep = classify_regime(d, r);
      REQUIRE(rep.first_frustrated_length.has_value());
      const double ratio = M_PI / *rep.theta;
      int n = 0;
      while (n + 1 < ratio * (1 - 1e-12)) ++n;
      CAPTURE(d);
      CAPTURE(r);
      CHECK(*rep.first_frustrated_length == n);
    }
  }
  CHECK(*classify_regime(2, 2).first_frustrated_length == 3);
  CHECK(*classify_regime(3, 3).first_frustrated_length == 5);
}

TEST_CASE("domination checks") {
  SUBCASE("s = D holds with zero slack") {
    const auto seq = solution_count_sequence(3, 2, 12);
    const DominationCheck check = verify_dominated_sequence(seq, 3, 2);
    CHECK(check.ok);
    for (const auto& u : check.slack) CHECK(u == 0);
  }
  SUBCASE("constant ones work when r < d") {
    std::vector<BigInt> s(15, 1);
    CHECK(verify_dominated_sequence(s, 3, 2).ok);
  }
  SUBCASE("powers of two work at the critical point d=4 r=4") {
    std::vector<BigInt> s;
    BigInt v = 1;
    for (int n = 0; n < 12; ++n) {
      s.push_back(v);
      v *= 2;
    }
    CHECK(verify_dominated_sequence(s, 4, 4).ok);
  }
  SUBCASE("violations are located") {
    const std::vector<BigInt> s{1, 3, 9};  // 9 > 3*3 - 1*1
    const DominationCheck check = verify_dominated_sequence(s, 3, 1);
    CHECK(!check.ok);
    REQUIRE(check.first_violation.has_value());
    CHECK(*check.first_violation == 2);
  }
  SUBCASE("s_0 must be 1") {
    CHECK_THROWS_AS(verify_dominated_sequence({BigInt(2)}, 3, 1), std::invalid_argument);
  }
}

TEST_CASE("random admissible slack sequences stay dominated") {
  std::mt19937_64 rng(12345);
  const std::vector<std::pair<int, int>> cells{{3, 2}, {4, 4}, {5, 3}, {6, 7}, {8, 16}};
  int tested = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [d, r] = cells[trial % cells.size()];
    const int length = 10 + static_cast<int>(rng() % 10);
    const auto counts = solution_count_sequence(d, r, length);
    std::vector<BigInt> u(length + 1, 0);
    for (int n = 1; n <= length; ++n) {
      if (rng() % 3 == 0) u[n] = static_cast<int>(rng() % 3);
    }
    std::vector<BigInt> s{1};
    for (int n = 1; n <= length; ++n) {
      BigInt v = counts[n];
      for (int l = 1; l <= n; ++l) v -= u[l] * counts[n - l];
      if (v <= 0) break;
      s.push_back(v);
    }
    const DominationCheck check = verify_dominated_sequence(s, d, r);
    CHECK(check.ok);
    for (std::size_t n = 0; n < s.size(); ++n) CHECK(s[n] <= counts[n]);
    ++tested;
  }
  CHECK(tested == 1000);
}

TEST_CASE("report serializes with decimal strings") {
  const CountReport rep = classify_regime(4, 4, 20);
  const std::string json = rep.to_json();
  CHECK(json.find("\"22020096\"") != std::string::npos);
  CHECK(json.find("Critical") != std::string::npos);
  CHECK(json.find("\"theta\":null") != std::string::npos);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solution_count_sequence(1, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(solution_count_sequence(3, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(solution_count_sequence(3, 10, 5), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_count(3, 2, -1), std::invalid_argument);
}
