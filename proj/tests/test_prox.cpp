#include <doctest.h>

#include <cmath>
#include <vector>

#include "geodr/manifolds.hpp"
#include "geodr/prox.hpp"
#include "support.hpp"

using namespace geodr;
using doctest::Approx;

namespace {

const double e = std::exp(1.0);

}  // namespace

TEST_SUITE("prox-reflect") {
  TEST_CASE("prox_dist_point examples") {
    LogOrthant lo(2);
    const Point c = lo.point({1, 1});
    CHECK(prox_dist_point(lo, c, 1.0, c).coords == c.coords);
    CHECK(prox_dist_point(lo, c, 10.0, lo.point({e, e})).coords == c.coords);
    const Point half = prox_dist_point(lo, c, std::sqrt(2.0) / 2.0, lo.point({e, e}));
    CHECK(half.coords[0] == Approx(std::sqrt(e)));
    CHECK(half.coords[1] == Approx(std::sqrt(e)));
    CHECK_THROWS(prox_dist_point(lo, c, 0.0, c));
  }

  TEST_CASE("prox_dist_point at d == lambda returns the center") {
    Euclidean eu(1);
    CHECK(prox_dist_point(eu, eu.point({0.0}), 2.0, eu.point({2.0})).coords[0] == 0.0);
  }

  TEST_CASE("project_ball examples") {
    LogOrthant lo(2);
    const Point c = lo.point({1, 1});
    const Point inside = lo.point({1.5, 1.2});
    CHECK(project_ball(lo, c, 1.0, inside).coords == inside.coords);
    const Point p = project_ball(lo, c, 1.0, lo.point({e * e, e * e}));
    CHECK(p.coords[0] == Approx(std::exp(1.0 / std::sqrt(2.0))));
    CHECK(p.coords[1] == Approx(std::exp(1.0 / std::sqrt(2.0))));
    CHECK(project_ball(lo, c, 1.0, p).coords == p.coords);
  }

  TEST_CASE("prox_dist_ball examples") {
    LogOrthant lo(2);
    const Point c = lo.point({1, 1});
    const Point inside = lo.point({1.5, 1.2});
    CHECK(prox_dist_ball(lo, c, 1.0, 0.3, inside).coords == inside.coords);

    const Point x = lo.point({e * e, e * e});
    const double lam = (std::sqrt(2.0) - 1.0) / 2.0;
    const double gap = 2.0 * std::sqrt(2.0) - 1.0;
    const Point px = project_ball(lo, c, 1.0, x);
    const Point want = lo.geodesic(x, px, lam / gap);
    const Point got = prox_dist_ball(lo, c, 1.0, lam, x);
    CHECK((got.coords - want.coords).norm() < 1e-12);
    CHECK(lo.dist(x, got) == Approx(lam));

    for (int s = 0; s < 1000; ++s) {
      const Point y = testing::random_point(lo), cc = testing::random_point(lo);
      const double l = testing::uniform(0.01, 3.0);
      CHECK((prox_dist_ball(lo, cc, 0.0, l, y).coords - prox_dist_point(lo, cc, l, y).coords).norm() <=
            1e-12 * (1.0 + y.coords.norm()));
    }
  }

  TEST_CASE("diagonal_prox examples") {
    const auto lo = make_log_orthant(2);
    const auto p2 = make_product(lo, 2);
    const Point d = diagonal_prox(*p2, p2->point(Vector{{1.0, 4.0, 4.0, 1.0}}));
    for (int i = 0; i < 4; ++i) CHECK(d.coords[i] == Approx(2.0));

    const auto eu = make_euclidean(2);
    const auto p3 = make_product(eu, 3);
    const Point m = diagonal_prox(*p3, p3->point(Vector{{0.0, 0.0, 3.0, 0.0, 0.0, 3.0}}));
    for (int i = 0; i < 6; ++i) CHECK(m.coords[i] == Approx(1.0));

    const Point same = p3->point(Vector{{0.5, 2.0, 0.5, 2.0, 0.5, 2.0}});
    CHECK((diagonal_prox(*p3, same).coords - same.coords).norm() < 1e-15);

    const auto nested = make_product(p2, 2);
    CHECK_THROWS(diagonal_prox(*nested, testing::random_point(*nested)));
  }

  TEST_CASE("reflect examples") {
    const auto eu = make_euclidean(2);
    const auto op = ProxOperator::dist_to_point(eu, eu->point({1, 1}), 0.5);
    for (int s = 0; s < 100; ++s) {
      const Point x = testing::random_point(*eu);
      const Point want{2.0 * op(x).coords - x.coords, eu->tag()};
      CHECK((reflect(*eu, op, x).coords - want.coords).norm() < 1e-12);
    }
    const auto ball = ProxOperator::indicator_ball(eu, eu->point({0, 0}), 5.0);
    const Point in = eu->point({1, 1});
    CHECK(reflect(*eu, ball, in).coords == in.coords);
  }

  TEST_CASE("rosenbrock prox examples") {
    RosenbrockPlane rp;
    const Point x = rp.point({1, 2});
    const Point p = rosenbrock_prox_phi(1.0, 1.0, x);
    CHECK(p.coords[0] == Approx(1.0));
    CHECK(p.coords[1] == Approx(4.0 / 3.0));
    const Point on = rp.point({1.5, 2.25});
    CHECK((rosenbrock_prox_phi(1.0, 0.7, on).coords - on.coords).norm() < 1e-14);
    for (double y : {-3.0, 0.0, 4.0, 11.0}) {
      const Point q = rosenbrock_prox_psi(2.0, 1.0, rp.point({2.0, y}));
      CHECK(q.coords[0] == Approx(2.0));
      CHECK(q.coords[1] == Approx(y));
    }
  }

  TEST_CASE("rosenbrock reflection examples") {
    RosenbrockPlane rp;
    const Point r = rosenbrock_reflect_phi(1.0, 1.0, rp.point({1, 2}));
    CHECK(r.coords[0] == Approx(1.0));
    CHECK(r.coords[1] == Approx(2.0 / 3.0));
    const Point on = rp.point({-0.5, 0.25});
    CHECK((rosenbrock_reflect_phi(2.0, 0.3, on).coords - on.coords).norm() < 1e-14);
    const Point s = rosenbrock_reflect_psi(2.0, 1.0, rp.point({0, 0}));
    CHECK(s.coords[0] == Approx(8.0 / 3.0));
    CHECK(s.coords[1] == Approx(64.0 / 9.0));
  }

  TEST_CASE("closed-form reflections equal the generic construction") {
    const auto rp = make_rosenbrock_plane();
    for (int s = 0; s < 1000; ++s) {
      const double a = testing::uniform(0.1, 3.0), b = testing::uniform(0.1, 3.0);
      const double lam = testing::uniform(0.05, 2.0);
      const Point x = testing::random_point(*rp);
      const auto phi = ProxOperator::rosenbrock_phi(rp, a, lam);
      const auto psi = ProxOperator::rosenbrock_psi(rp, b, lam);
      const Point g1 = reflect(*rp, phi, x), c1 = ReflectionOperator(phi)(x);
      const Point g2 = reflect(*rp, psi, x), c2 = ReflectionOperator(psi)(x);
      CHECK((g1.coords - c1.coords).norm() <= 1e-10 * (1.0 + x.coords.norm()));
      CHECK((g2.coords - c2.coords).norm() <= 1e-10 * (1.0 + x.coords.norm()));
    }
  }

  TEST_CASE("product_prox examples") {
    const auto lo = make_log_orthant(2);
    const auto p1 = make_product(lo, 1);
    const auto op = ProxOperator::dist_to_point(lo, lo->point({2, 3}), 0.4);
    const Point x = testing::random_point(*p1);
    const std::vector<ProxOperator> single{op};
    CHECK((product_prox(*p1, single, x).coords - op(lo->point(x.coords)).coords).norm() < 1e-15);

    const auto p3 = make_product(lo, 3);
    const std::vector<ProxOperator> ids(3, ProxOperator::identity(lo));
    const Point y = testing::random_point(*p3);
    CHECK(product_prox(*p3, ids, y).coords == y.coords);

    const std::vector<ProxOperator> mixed{ProxOperator::dist_to_point(lo, lo->point({1, 1}), 0.2),
                                          ProxOperator::dist_to_point(lo, lo->point({5, 2}), 1.5),
                                          ProxOperator::dist_to_point(lo, lo->point({0.5, 9}), 0.05)};
    const Point z = testing::random_point(*p3);
    const Point out = product_prox(*p3, mixed, z);
    for (int k = 0; k < 3; ++k) {
      CHECK((p3->component(out, k).coords - mixed[k](p3->component(z, k)).coords).norm() < 1e-15);
    }
    CHECK_THROWS(product_prox(*p3, single, z));
    CHECK_THROWS(ProxOperator::product_of(p3, std::vector<ProxOperator>{op}));
  }

  TEST_CASE("reflection of a product is the product of reflections") {
    const auto lo = make_log_orthant(2);
    const auto p3 = make_product(lo, 3);
    std::vector<ProxOperator> parts{ProxOperator::dist_to_point(lo, lo->point({1, 1}), 0.2),
                                    ProxOperator::dist_to_ball(lo, lo->point({5, 2}), 0.3, 0.5),
                                    ProxOperator::indicator_ball(lo, lo->point({3, 3}), 0.4)};
    const auto F = ProxOperator::product_of(p3, parts);
    for (int s = 0; s < 500; ++s) {
      const Point x = testing::random_point(*p3);
      const Point whole = reflect(*p3, F, x);
      const Point split = ReflectionOperator(F)(x);
      CHECK((whole.coords - split.coords).norm() <= 1e-10 * (1.0 + x.coords.norm()));
    }
  }

  TEST_CASE("nonexpansive reflections") {
    const auto rp = make_rosenbrock_plane();
    const auto lo = make_log_orthant(2);
    const ReflectionOperator rphi(ProxOperator::rosenbrock_phi(rp, 1.0, 1.0));
    const ReflectionOperator rpsi(ProxOperator::rosenbrock_psi(rp, 2.0, 1.0));
    const ReflectionOperator rball(ProxOperator::indicator_ball(lo, lo->point({2, 3}), 0.7));
    const ReflectionOperator rpt(ProxOperator::dist_to_point(lo, lo->point({2, 3}), 0.4));
    struct Case {
      const char* name;
      const Manifold& m;
      const ReflectionOperator& R;
    };
    const Case cases[] = {{"R_phi", *rp, rphi}, {"R_psi", *rp, rpsi}, {"R_ball", *lo, rball}, {"R_point", *lo, rpt}};
    for (const auto& c : cases) {
      CAPTURE(c.name);
      for (int s = 0; s < testing::kSamples; ++s) {
        const Point x = testing::random_point(c.m), y = testing::random_point(c.m);
        const double d = c.m.dist(x, y);
        CHECK(c.m.dist(c.R(x), c.R(y)) <= d * (1.0 + 1e-12));
      }
    }
  }

  TEST_CASE("prox_dist_point optimality") {
    const auto lo = make_log_orthant(2);
    for (int s = 0; s < 200; ++s) {
      const Point c = testing::random_point(*lo), x = testing::random_point(*lo);
      const double lam = testing::uniform(0.05, 3.0);
      const Point u = prox_dist_point(*lo, c, lam, x);
      auto value = [&](const Point& w) { return lo->dist(w, c) + std::pow(lo->dist(x, w), 2) / (2.0 * lam); };
      const double fu = value(u);
      for (int k = 0; k < 100; ++k) CHECK(fu <= value(testing::random_point(*lo)) + 1e-9);
      for (int k = 0; k < 20; ++k) CHECK(fu <= value(lo->geodesic(u, testing::random_point(*lo), 1e-3)) + 1e-9);
    }
  }

  TEST_CASE("diagonal_prox optimality") {
    const auto lo = make_log_orthant(2);
    const auto p4 = make_product(lo, 4);
    for (int s = 0; s < 200; ++s) {
      const Point x = testing::random_point(*p4);
      const Point m = p4->component(diagonal_prox(*p4, x), 0);
      auto value = [&](const Point& w) {
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) sum += std::pow(lo->dist(p4->component(x, k), w), 2);
        return sum;
      };
      const double fm = value(m);
      for (int k = 0; k < 100; ++k) CHECK(fm <= value(testing::random_point(*lo)) + 1e-9);
    }
  }

  TEST_CASE("projection is idempotent") {
    for (const auto& m : {make_log_orthant(3), make_rosenbrock_plane()}) {
      CAPTURE(m->name());
      for (int s = 0; s < testing::kSamples; ++s) {
        const Point c = testing::random_point(*m), x = testing::random_point(*m);
        const double r = testing::uniform(0.0, 2.0);
        const Point p = project_ball(*m, c, r, x);
        const Point pp = project_ball(*m, c, r, p);
        CHECK((pp.coords - p.coords).norm() <= 1e-12 * (1.0 + p.coords.norm()));
        CHECK(m->dist(c, p) <= r + 1e-12 * (1.0 + r));
      }
    }
  }
}
