#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "msc/generators.hpp"
#include "msc/space.hpp"

using namespace msc;

namespace {

SpacePtr two_points() {
  return build_space({"a", "b"}, {{0, 1}, {1, 0}}, {1, 1}, 1.0);
}

SpacePtr three_line() {
  return build_space({"a", "b", "c"}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, {1, 1, 1}, 1.0);
}

}  // namespace

TEST_CASE("build_space: two points with unit distance") {
  SpacePtr s = two_points();
  CHECK(s->nbrs(0) == std::vector<int>{1});
  CHECK(s->nbrs(1) == std::vector<int>{0});
}

TEST_CASE("build_space: triangle violation reports the triple") {
  CHECK_THROWS_AS(build_space({"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, {1, 1, 1}, 1.0),
                  TriangleViolation);
  try {
    build_space({"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, {1, 1, 1}, 1.0);
  } catch (const TriangleViolation& e) {
    CHECK(e.a == "a");
    CHECK(e.b == "b");
    CHECK(e.c == "c");
  }
}

TEST_CASE("build_space: isolated points under small epsilon") {
  SpacePtr s = build_space({"a", "b", "c"}, {{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}, {1, 1, 1}, 1.0);
  for (int x = 0; x < 3; ++x) CHECK(s->nbrs(x).empty());
}

TEST_CASE("build_space: degenerate inputs") {
  CHECK_THROWS_AS(build_space({"a", "b"}, {{0, 1}, {2, 0}}, {1, 1}, 1.0), AsymmetricDistance);
  CHECK_THROWS_AS(build_space({"a", "b"}, {{0, 1}, {1, 0}}, {1, 0}, 1.0), NonpositiveWeight);
  CHECK_THROWS_AS(build_space({"a", "b"}, {{0, 0}, {0, 0}}, {1, 1}, 1.0),
                  ZeroDistanceDistinctPoints);
}

TEST_CASE("neighbor symmetry on random spaces") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    SpacePtr s = random_space(rng, 4, 16);
    for (int x = 0; x < s->size(); ++x)
      for (int y : s->nbrs(x)) {
        const auto& back = s->nbrs(y);
        CHECK(std::find(back.begin(), back.end(), x) != back.end());
      }
  }
}

TEST_CASE("lipschitz_constant") {
  SpacePtr s = two_points();
  CHECK(lipschitz_constant(*s, ScalarField{s, {0, 3}}) == doctest::Approx(3.0));
  CHECK(lipschitz_constant(*s, constant_field(s, 5.0)) == 0.0);

  SpacePtr line = three_line();
  // Oracle: enumerate the three pairs by hand.
  ScalarField f{line, {0, 1, 2}};
  double expect = 0.0;
  for (int x = 0; x < 3; ++x)
    for (int y = x + 1; y < 3; ++y)
      expect = std::max(expect, std::abs(f.v[x] - f.v[y]) / line->dist(x, y));
  CHECK(expect == doctest::Approx(1.0));
  CHECK(lipschitz_constant(*line, f) == doctest::Approx(expect));
}

TEST_CASE("mcshane_extend examples") {
  SpacePtr s = two_points();
  SupportPtr a_only = make_support(s, {0});
  ScalarField f = mcshane_extend(*s, *a_only, {0.0}, 1.0);
  CHECK(f.v[0] == doctest::Approx(0.0));
  CHECK(f.v[1] == doctest::Approx(1.0));

  // Support = whole space: the identity extension.
  SupportPtr whole = full_support(s);
  ScalarField id = mcshane_extend(*s, *whole, {0.25, 0.75}, 1.0);
  CHECK(id.v[0] == doctest::Approx(0.25));
  CHECK(id.v[1] == doctest::Approx(0.75));

  SpacePtr line = three_line();
  SupportPtr ac = make_support(line, {0, 2});
  ScalarField g = mcshane_extend(*line, *ac, {0.0, 0.0}, 1.0);
  CHECK(g.v[1] == doctest::Approx(1.0));  // min(0 + 1, 0 + 1)

  CHECK_THROWS_AS(mcshane_extend(*line, *ac, {0.0, 5.0}, 1.0), NotLipschitzOnSubset);
}

TEST_CASE("mcshane properties on random spaces") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    SpacePtr s = random_space(rng, 4, 14);
    std::uniform_int_distribution<int> kd(1, s->size());
    std::vector<int> idx(s->size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<int> sub(idx.begin(), idx.begin() + kd(rng));
    std::sort(sub.begin(), sub.end());
    SupportPtr sup = make_support(s, sub);
    const double L = 2.0;
    // L-Lipschitz anchor values via a clip.
    std::uniform_real_distribution<double> vd(-3.0, 3.0);
    std::vector<double> raw(sub.size());
    for (double& v : raw) v = vd(rng);
    std::vector<double> vals(sub.size());
    for (size_t i = 0; i < sub.size(); ++i) {
      double m = raw[i];
      for (size_t j = 0; j < sub.size(); ++j)
        m = std::min(m, raw[j] + L * s->dist(sub[i], sub[j]));
      vals[i] = m;
    }
    ScalarField f = mcshane_extend(*s, *sup, vals, L);
    for (size_t i = 0; i < sub.size(); ++i) CHECK(f.v[sub[i]] == doctest::Approx(vals[i]));
    CHECK(lipschitz_constant(*s, f) <= L * (1 + 1e-12));
  }
}

TEST_CASE("random_one_lipschitz: deterministic, 1-Lipschitz") {
  Rng rng(5);
  SpacePtr s = random_space(rng, 6, 12);
  ScalarField f1 = random_one_lipschitz(s, 42);
  ScalarField f2 = random_one_lipschitz(s, 42);
  CHECK(f1.v == f2.v);
  CHECK(lipschitz_constant(*s, f1) <= 1.0 + 1e-12);

  SpacePtr one = build_space({"a"}, {{0}}, {1}, 1.0);
  ScalarField g = random_one_lipschitz(one, 9);
  CHECK(lipschitz_constant(*one, g) == 0.0);
}

TEST_CASE("verify_triangles is re-checkable") {
  Rng rng(17);
  SpacePtr s = random_space(rng, 5, 12);
  CHECK_NOTHROW(verify_triangles(*s));
}
