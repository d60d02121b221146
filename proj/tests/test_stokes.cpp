#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "nchodge/errors.hpp"
#include "nchodge/generators.hpp"
#include "nchodge/quantum_connection.hpp"
#include "nchodge/stokes.hpp"

using namespace nchodge;

namespace {

const double kPi = std::acos(-1.0);

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  if (a >= 2 * kPi - 1e-12) a = 0.0;
  return a;
}

/// Stokes directions by brute force over ordered pairs.
std::vector<double> brute_force_directions(const std::vector<Complex>& c) {
  std::vector<double> out;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b) {
      if (a == b) continue;
      const double phi = wrap(std::arg(c[a] - c[b]) - kPi / 2);
      if (std::none_of(out.begin(), out.end(), [&](double x) { return std::abs(x - phi) < 1e-9; })) out.push_back(phi);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Labels sorted by Re(c e^{-i phi}).
std::vector<int> order_at(const std::vector<Complex>& c, double phi) {
  std::vector<int> idx(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) {
    return (c[static_cast<std::size_t>(x)] * std::polar(1.0, -phi)).real() <
           (c[static_cast<std::size_t>(y)] * std::polar(1.0, -phi)).real();
  });
  return idx;
}

FilteredLocalSystem two_line_system(const ComplexVector& first, const ComplexVector& second) {
  FilteredLocalSystem f;
  f.rank = 2;
  f.monodromy = ComplexMatrix::Identity(2, 2);
  f.arcs = {{ComplexMatrix(first), ComplexMatrix::Identity(2, 2)}, {ComplexMatrix(second), ComplexMatrix::Identity(2, 2)}};
  return f;
}

}  // namespace

TEST_CASE("directions examples") {
  const auto single = stokes_directions(ExponentSet({0.0}));
  CHECK(single.directions.empty());
  REQUIRE(single.arcs.size() == 1);
  CHECK(single.arcs[0].order == std::vector<int>{0});

  const auto two = stokes_directions(ExponentSet({2.0, -2.0}));
  REQUIRE(two.directions.size() == 2);
  CHECK(std::abs(two.directions[0] - kPi / 2) < 1e-12);
  CHECK(std::abs(two.directions[1] - 3 * kPi / 2) < 1e-12);

  std::vector<Complex> cube;
  for (int k = 0; k < 3; ++k) cube.push_back(3.0 * std::polar(1.0, 2 * kPi * k / 3));
  const auto d = stokes_directions(ExponentSet(cube));
  const auto expected = brute_force_directions(cube);
  REQUIRE(d.directions.size() == 6);
  REQUIRE(expected.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(d.directions[k] - expected[k]) < 1e-12);
}

TEST_CASE("exponent sets reject duplicates") {
  CHECK_THROWS_AS(ExponentSet({1.0, 1.0}), UsageError);
  CHECK_THROWS_AS(ExponentSet({}), UsageError);
}

TEST_CASE("crossing examples") {
  const ExponentSet two({2.0, -2.0});
  const auto c = crossing_permutation(two, kPi / 2);
  REQUIRE(c.blocks.size() == 1);
  CHECK(c.blocks[0] == std::pair<int, int>{0, 1});
  CHECK(c.permutation == std::vector<int>{1, 0});
  CHECK_THROWS_AS(crossing_permutation(two, 0.3), UsageError);

  const ExponentSet tri({0.0, 1.0, Complex(0.0, 1.0)});
  const auto d = stokes_directions(tri);
  for (double phi : d.directions) {
    const auto x = crossing_permutation(tri, phi);
    REQUIRE(x.blocks.size() == 1);
    CHECK(x.blocks[0].second == x.blocks[0].first + 1);
  }

  const ExponentSet line({0.0, 1.0, 2.0});
  const auto y = crossing_permutation(line, kPi / 2);
  REQUIRE(y.blocks.size() == 1);
  CHECK(y.blocks[0] == std::pair<int, int>{0, 2});
  std::vector<int> reversed = y.before;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(y.after == reversed);
}

TEST_CASE("arcs carry the brute-force orders and crossings reverse blocks") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 5;
    const ExponentSet e = gen::random_exponents(m, trial % 4 == 3 && m >= 3 ? 3 : trial % 3, rng);
    const auto d = stokes_directions(e);
    const auto expected = brute_force_directions(e.values());
    REQUIRE(d.directions.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(std::abs(d.directions[k] - expected[k]) < 1e-9);
    for (const auto& arc : d.arcs) CHECK(arc.order == order_at(e.values(), 0.5 * (arc.begin + arc.end)));

    std::vector<int> composite(static_cast<std::size_t>(e.size()));
    for (int i = 0; i < e.size(); ++i) composite[static_cast<std::size_t>(i)] = i;
    for (double phi : d.directions) {
      const auto c = crossing_permutation(e, phi);
      std::vector<int> rebuilt = c.before;
      for (auto [lo, hi] : c.blocks) std::reverse(rebuilt.begin() + lo, rebuilt.begin() + hi + 1);
      CHECK(rebuilt == c.after);
      for (std::size_t p = 0; p < c.after.size(); ++p) CHECK(c.after[p] == c.before[static_cast<std::size_t>(c.permutation[p])]);
      std::vector<int> next(composite.size());
      for (std::size_t p = 0; p < next.size(); ++p) next[p] = composite[static_cast<std::size_t>(c.permutation[p])];
      composite = next;
    }
    for (std::size_t p = 0; p < composite.size(); ++p) CHECK(composite[p] == static_cast<int>(p));
  }
}

TEST_CASE("directions are translation invariant and rotate with the exponents") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const ExponentSet e = gen::random_exponents(4, 0, rng);
    std::vector<Complex> shifted, rotated;
    const double alpha = 0.37 * (trial + 1);
    for (Complex c : e.values()) {
      shifted.push_back(c + Complex(5.0, -3.0));
      rotated.push_back(c * std::polar(1.0, alpha));
    }
    const auto d0 = stokes_directions(e).directions;
    const auto d1 = stokes_directions(ExponentSet(shifted)).directions;
    REQUIRE(d0.size() == d1.size());
    for (std::size_t k = 0; k < d0.size(); ++k) CHECK(std::abs(d0[k] - d1[k]) < 1e-9);
    std::set<long> a, b;
    for (double x : d0) a.insert(std::lround(wrap(x + alpha) * 1e6));
    for (double x : stokes_directions(ExponentSet(rotated)).directions) b.insert(std::lround(x * 1e6));
    CHECK(a == b);
  }
}

TEST_CASE("filtration validation examples") {
  std::mt19937_64 rng(53);
  FilteredLocalSystem one;
  one.rank = 2;
  one.monodromy = gen::random_matrix(2, 2, rng);
  one.arcs = {{ComplexMatrix::Identity(2, 2)}};
  CHECK(validate_filtration(one, ExponentSet({Complex(1.0, 1.0)})).valid());

  const ExponentSet two({2.0, -2.0});
  const ComplexVector e1 = ComplexVector::Unit(2, 0), e2 = ComplexVector::Unit(2, 1);
  CHECK(validate_filtration(two_line_system(e1, e2), two).valid());
  const auto bad = validate_filtration(two_line_system(e1, e1), two);
  CHECK_FALSE(bad.valid());
  CHECK(std::any_of(bad.issues.begin(), bad.issues.end(), [](const ValidationIssue& i) { return i.condition == "opposed" || i.condition == "monodromy"; }));

  FilteredLocalSystem wrong = two_line_system(e1, e2);
  wrong.arcs.pop_back();
  CHECK_THROWS_AS(label_dimensions(wrong, two), UsageError);
}

TEST_CASE("generic filtrations are valid and corrupted steps are rejected") {
  std::mt19937_64 rng(59);
  int corruptions = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 2 + trial % 3;
    const ExponentSet e = gen::random_exponents(m, trial % 3, rng);
    std::vector<int> dims(static_cast<std::size_t>(m), 1);
    dims[0] = 1 + trial % 2;
    const auto f = generic_filtration(e, dims, rng);
    CHECK(label_dimensions(f, e) == dims);
    CHECK(validate_filtration(f, e).valid());
    for (auto [arc, step] : gen::corruptible_steps(f, e)) {
      CHECK_FALSE(validate_filtration(gen::corrupt_step(f, e, arc, step, rng), e).valid());
      ++corruptions;
    }
  }
  CHECK(corruptions > 0);
}

TEST_CASE("skeleton from the quantum connection") {
  const auto s2 = skeleton_from_connection(build_cpn_u_connection(2, 1.0));
  REQUIRE(s2.exponents.size() == 2);
  CHECK(s2.multiplicities == std::vector<int>{1, 1});
  CHECK(std::abs(std::abs(s2.exponents[0]) - 2.0) < 1e-12);

  const auto s5 = skeleton_from_connection(build_cpn_u_connection(5, 1.0));
  REQUIRE(s5.exponents.size() == 5);
  for (Complex c : s5.exponents.values()) CHECK(std::abs(std::pow(c / 5.0, 5) - 1.0) < 1e-10);

  const auto s0 = skeleton_from_connection(build_cpn_u_connection(2, 0.0));
  REQUIRE(s0.exponents.size() == 1);
  CHECK(s0.multiplicities == std::vector<int>{2});
}

TEST_CASE("canonical angles") {
  CHECK(std::abs(canonical_angle(-kPi / 2) - 3 * kPi / 2) < 1e-15);
  CHECK(std::abs(canonical_angle(2 * kPi)) < 1e-15);
  CHECK(std::abs(canonical_angle(5 * kPi) - kPi) < 1e-12);
}
