#include <doctest.h>

#include <cmath>
#include <random>

#include "msc/generators.hpp"
#include "msc/module.hpp"

using namespace msc;

namespace {

SpacePtr two_points() {
  return build_space({"a", "b"}, {{0, 1}, {1, 0}}, {1, 1}, 1.0);
}

// One 2d fiber on every point, chosen norm kind, unit or given weights.
ModulePtr plane_module(const SpacePtr& s, NormKind kind, std::vector<double> w = {1, 1}) {
  SupportPtr full = full_support(s);
  std::vector<std::vector<std::string>> labels(s->size(), {"e0", "e1"});
  std::vector<FiberNorm> norms(s->size(), FiberNorm::weighted(kind, w));
  return make_module(full, std::move(labels), std::move(norms));
}

}  // namespace

TEST_CASE("pointwise_norm per kind") {
  SpacePtr s = two_points();
  auto with = [&](NormKind k) {
    Element e = zero_element(plane_module(s, k));
    e.coords[0] = {3.0, -4.0};
    return pointwise_norm(e).v[0];
  };
  CHECK(with(NormKind::Sup) == doctest::Approx(4.0));
  CHECK(with(NormKind::Sum) == doctest::Approx(7.0));
  CHECK(with(NormKind::Euclidean) == doctest::Approx(5.0));
  CHECK(pointwise_norm(zero_element(plane_module(s, NormKind::Sup))).v[0] == 0.0);
}

TEST_CASE("smul examples") {
  SpacePtr s = two_points();
  ModulePtr m = plane_module(s, NormKind::Sum);
  Element e = zero_element(m);
  e.coords[0] = {1.0, 2.0};
  e.coords[1] = {5.0, 0.0};

  CHECK(max_abs_diff(smul(constant_field(s, 1.0), e), e) == 0.0);
  CHECK(pointwise_norm(smul(constant_field(s, 0.0), e)).v[0] == 0.0);

  ScalarField g{s, {2.0, -1.0}};
  ScalarField n = pointwise_norm(smul(g, e));
  CHECK(n.v[0] == doctest::Approx(2.0 * 3.0));
  CHECK(n.v[1] == doctest::Approx(1.0 * 5.0));
}

TEST_CASE("dual: involution, weights, zero fibers") {
  SpacePtr s = two_points();
  ModulePtr m = plane_module(s, NormKind::Sup, {2.0, 1.0});
  ModulePtr d = dual(m);
  CHECK(d->norm[0].kind == NormKind::Sum);
  CHECK(d->norm[0].weights[0] == doctest::Approx(0.5));
  CHECK(d->norm[0].weights[1] == doctest::Approx(1.0));
  CHECK(structurally_equal(*dual(d), *m));

  // Brute-force dual norm: max pairing over a sampled primal unit ball.
  Element omega = zero_element(d);
  omega.coords[0] = {1.3, -0.7};
  const double claimed = pointwise_norm(omega).v[0];
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  double best = 0.0;
  for (int t = 0; t < 20000; ++t) {
    std::vector<double> v{dir(rng), dir(rng)};
    const double n = fiber_norm(m->norm[0], v);
    if (n == 0.0) continue;
    const double pair = (omega.coords[0][0] * v[0] + omega.coords[0][1] * v[1]) / n;
    best = std::max(best, std::abs(pair));
  }
  CHECK(best <= claimed + 1e-12);
  CHECK(best == doctest::Approx(claimed).epsilon(1e-3));

  // Zero fiber stays zero fiber.
  SupportPtr sub = make_support(s, {0});
  std::vector<std::vector<std::string>> labels(2);
  labels[0] = {"e0"};
  std::vector<FiberNorm> norms{FiberNorm::unit(NormKind::Sup, 1),
                               FiberNorm::unit(NormKind::Sup, 0)};
  ModulePtr partial = make_module(sub, std::move(labels), std::move(norms));
  CHECK(dual(partial)->dim(1) == 0);
}

TEST_CASE("ext: identity, zero outside, dual commutation") {
  SpacePtr s = two_points();
  SupportPtr sub = make_support(s, {0});
  SupportPtr full = full_support(s);

  std::vector<std::vector<std::string>> labels(2);
  labels[0] = {"e0", "e1"};
  std::vector<FiberNorm> norms{FiberNorm::weighted(NormKind::Sup, {2.0, 1.0}),
                               FiberNorm::unit(NormKind::Sup, 0)};
  ModulePtr m = make_module(sub, std::move(labels), std::move(norms));

  ModulePtr same = ext(m, sub);
  CHECK(structurally_equal(*same, *m));

  ModulePtr e = ext(m, full);
  Element v = zero_element(m);
  v.coords[0] = {1.0, -2.0};
  Element ev = ext_element(e, v);
  ScalarField n = pointwise_norm(ev);
  CHECK(n.v[0] == doctest::Approx(pointwise_norm(v).v[0]));
  CHECK(n.v[1] == 0.0);

  CHECK(structurally_equal(*dual(ext(m, full)), *ext(dual(m), full)));
  CHECK_THROWS_AS(ext(make_module(full, {{}, {}}, {FiberNorm::unit(NormKind::Sup, 0),
                                                   FiberNorm::unit(NormKind::Sup, 0)}),
                      sub),
                  NotASuperset);
}

TEST_CASE("pullback: identity, constant, bijection, absolute continuity") {
  Rng rng(21);
  SpacePtr X = random_space(rng, 4, 8);

  // Identity map: the pullback is the original module on nu.
  std::vector<int> ida(X->size());
  for (int i = 0; i < X->size(); ++i) ida[i] = i;
  PointMap idm{X, X, ida};
  ModulePtr M = random_module(rng, X);
  SupportPtr nu = full_support(X);
  ModulePtr pb = pullback(M, idm, nu);
  CHECK(structurally_equal(*pb, *M));

  // Constant map: every fiber is the fiber at q.
  SpacePtr Y = random_space(rng, 3, 6);
  ModulePtr MY = random_module(rng, Y);
  PointMap cm{X, Y, std::vector<int>(X->size(), 1)};
  ModulePtr pbc = pullback(MY, cm, nu);
  Element vy = random_element(rng, MY);
  Element lift = pullback_lift(pbc, cm, vy);
  ScalarField nl = pointwise_norm(lift), ny = pointwise_norm(vy);
  for (int x = 0; x < X->size(); ++x) CHECK(nl.v[x] == doctest::Approx(ny.v[1]));

  // A bijection transports fiber dimensions and norms pointwise.
  SpacePtr X2 = two_points();
  SpacePtr Y2 = build_space({"p", "q"}, {{0, 2}, {2, 0}}, {1, 1}, 2.0);
  ModulePtr MY2 = [&] {
    std::vector<std::vector<std::string>> labels{{"u"}, {"u", "v"}};
    std::vector<FiberNorm> norms{FiberNorm::unit(NormKind::Sum, 1),
                                 FiberNorm::unit(NormKind::Sum, 2)};
    return make_module(full_support(Y2), std::move(labels), std::move(norms));
  }();
  PointMap swap{X2, Y2, {1, 0}};
  ModulePtr pbs = pullback(MY2, swap, full_support(X2));
  CHECK(pbs->dim(0) == 2);
  CHECK(pbs->dim(1) == 1);

  // Missing base point: absolute continuity fails.
  SupportPtr partial = make_support(Y2, {0});
  ModulePtr MP = [&] {
    std::vector<std::vector<std::string>> labels{{"u"}, {}};
    std::vector<FiberNorm> norms{FiberNorm::unit(NormKind::Sup, 1),
                                 FiberNorm::unit(NormKind::Sup, 0)};
    return make_module(partial, std::move(labels), std::move(norms));
  }();
  CHECK_THROWS_AS(pullback(MP, swap, full_support(X2)), AbsoluteContinuityViolation);
}

TEST_CASE("induced_map: identity, scaling, overdetermined, errors") {
  SpacePtr X = two_points();
  SpacePtr Y = build_space({"p", "q"}, {{0, 1}, {1, 0}}, {1, 1}, 1.0);
  PointMap u{X, Y, {0, 1}};
  ModulePtr MY = plane_module(Y, NormKind::Sup);
  SupportPtr nu = full_support(X);
  ModulePtr pb = pullback(MY, u, nu);

  // Generators: the two fiber basis elements of MY.
  std::vector<Element> basis;
  for (int i = 0; i < 2; ++i) {
    Element b = zero_element(MY);
    b.coords[0][i] = 1.0;
    b.coords[1][i] = 1.0;
    basis.push_back(std::move(b));
  }

  auto lift = [&](const Element& v) { return pullback_lift(pb, u, v); };

  std::vector<std::pair<Element, Element>> idgens;
  for (const auto& b : basis) idgens.emplace_back(b, lift(b));
  ModuleMap idT = induced_map(pb, u, MY, pb, idgens, constant_field(X, 1.0));
  CHECK(max_matrix_diff(idT, identity_map(pb)) < 1e-12);

  std::vector<std::pair<Element, Element>> scale2;
  for (const auto& b : basis) scale2.emplace_back(b, smul(constant_field(X, 2.0), lift(b)));
  ModuleMap s2 = induced_map(pb, u, MY, pb, scale2, constant_field(X, 2.0));
  Rng prng(5);
  Element probe = random_element(prng, pb);
  CHECK(max_abs_diff(apply(s2, probe), smul(constant_field(X, 2.0), probe)) < 1e-12);
  // The bound 2 is tight: bound 1.9 must be rejected.
  CHECK_THROWS_AS(induced_map(pb, u, MY, pb, scale2, constant_field(X, 1.9)), BoundViolated);

  // Overdetermined consistent generators give the same map.
  std::vector<std::pair<Element, Element>> over = idgens;
  Element extra = add(basis[0], basis[1]);
  over.emplace_back(extra, lift(extra));
  ModuleMap overT = induced_map(pb, u, MY, pb, over, constant_field(X, 1.0));
  CHECK(max_matrix_diff(overT, idT) < 1e-12);

  // Non-spanning generators.
  std::vector<std::pair<Element, Element>> thin;
  thin.emplace_back(basis[0], lift(basis[0]));
  CHECK_THROWS_AS(induced_map(pb, u, MY, pb, thin, constant_field(X, 1.0)),
                  GeneratorsDoNotSpan);

  // Inconsistent images: equal lifts, different images.
  std::vector<std::pair<Element, Element>> bad = idgens;
  bad.emplace_back(basis[0], smul(constant_field(X, -1.0), lift(basis[0])));
  CHECK_THROWS_AS(induced_map(pb, u, MY, pb, bad, constant_field(X, 1.0)),
                  InconsistentImages);
}

TEST_CASE("norm axioms hold exactly for every kind (property)") {
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    SpacePtr X = random_space(rng, 3, 8);
    ModulePtr M = random_module(rng, X);
    Element v = random_element(rng, M), w = random_element(rng, M);
    ScalarField nv = pointwise_norm(v), nw = pointwise_norm(w), ns = pointwise_norm(add(v, w));
    ScalarField g = random_target_field(rng, X);
    ScalarField ng = pointwise_norm(smul(g, v));
    for (int x = 0; x < X->size(); ++x) {
      CHECK(ns.v[x] <= nv.v[x] + nw.v[x] + 1e-12);
      CHECK(ng.v[x] == doctest::Approx(std::abs(g.v[x]) * nv.v[x]).epsilon(1e-12));
    }
  }
}
