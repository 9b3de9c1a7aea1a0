#include "doctest.h"

#include "crgeo/curves.hpp"
#include "crgeo/rep.hpp"
#include "support.hpp"

using namespace crgeo;
using namespace crgeo::test;

namespace {

double aspect_closed(double x) { return 2 * (2 * x - 3) / (x - 3); }

// Random isometry as a product of C-reflections.
Mat3 rand_isometry() {
  Mat3 g = Mat3::Identity();
  int used = 0;
  while (used < 3) {
    Vec3 v = rand_vec();
    if (classify(HVec3(v)).value < 0.2 * v.squaredNorm()) continue;
    g = c_reflection_matrix(v, Form::Ball) * g;
    ++used;
  }
  return g;
}

}  // namespace

TEST_CASE("sampled points are orthogonal to the polar") {
  RepInstance rep = build_rep(kSLow);
  for (const Vec3& P : rep.Cp)
    for (const Vec3& x : CCircle(P).sample(128, 0.25)) {
      CHECK(std::abs(inner(x, P, Form::Ball)) < 1e-9 * x.norm() * P.norm());
      CHECK(std::abs(inner(x, x, Form::Ball)) < 1e-12 * x.squaredNorm());
    }
}

TEST_CASE("aspect at the parabolic endpoint is 10") {
  RepInstance rep = build_rep(kSBar);
  AspectValue a = aspect_invariant(HVec3(rep.Ep[0]), HVec3(rep.Cp[1]));
  CHECK(!a.perpendicular);
  CHECK(a.value == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("aspect over the certified sweep") {
  for (int k = 0; k < 64; ++k) {
    double s = kSLow + (kSBar - kSLow) * k / 63.0;
    RepInstance rep = build_rep(s);
    double A = aspect_invariant(HVec3(rep.Ep[0]), HVec3(rep.Cp[1])).value;
    CHECK(A >= 9.5);
    CHECK(A <= 10.0 + 1e-9);
    CHECK(std::abs(A - aspect_closed(rep.x)) < 1e-8);
  }
  // Frozen from the independent numpy computation.
  RepInstance r6 = build_rep(6.0);
  CHECK(aspect_invariant(HVec3(r6.Ep[0]), HVec3(r6.Cp[1])).value == doctest::Approx(9.603536175706754).epsilon(1e-10));
}

TEST_CASE("aspect signals and linking") {
  AspectValue p = aspect_invariant(HVec3(1, 0, 0), HVec3(0, 1, 0));
  CHECK(p.perpendicular);
  CHECK(std::isinf(p.value));
  CHECK(!linked(CCircle(Vec3(0, 1, 0)), CCircle(Vec3(1, 0, 0))));

  RepInstance rep = build_rep(kSLow);
  CHECK(linked(CCircle(rep.Cp[1]), CCircle(rep.Ep[0])));
  CHECK(!linked(CCircle(rep.Cp[1]), CCircle(rep.Cp[1])));

  // <C,C> = 3/4, <C,E> = 1: aspect 3/4.
  Vec3 E(1, 0, 0), C(1, 0, 0.5);
  CHECK(aspect_invariant(HVec3(E), HVec3(C)).value == doctest::Approx(0.75));
  CHECK(!linked(CCircle(C), CCircle(E)));
}

TEST_CASE("aspect is invariant under isometries") {
  RepInstance rep = build_rep(6.2);
  double A = aspect_invariant(HVec3(rep.Ep[0]), HVec3(rep.Cp[1])).value;
  for (int k = 0; k < 20; ++k) {
    Mat3 g = rand_isometry();
    double B = aspect_invariant(HVec3(Vec3(g * rep.Ep[0])), HVec3(Vec3(g * rep.Cp[1]))).value;
    CHECK(std::abs(A - B) < 1e-9 * A);
  }
}

TEST_CASE("the graph function") {
  for (double A : {1.5, 9.0, 10.0}) CHECK(f_graph(A, 0.0) == 0.0);
  CHECK(f_graph(9, kPi / 2) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(f_graph_dd(9, kPi / 2) == doctest::Approx(-7 / std::sqrt(8.0)).epsilon(1e-14));
  CHECK_THROWS_AS(f_graph(1.0, 0.3), Error);
  CHECK_THROWS_AS(f_graph_dd(0.5, 0.3), Error);
  // Second derivative against central differences.
  for (int k = 0; k < 50; ++k) {
    double A = uniform(1.1, 12), t = uniform(0, kTwoPi), h = 1e-4;
    double fd = (f_graph(A, t + h) - 2 * f_graph(A, t) + f_graph(A, t - h)) / (h * h);
    CHECK(std::abs(fd - f_graph_dd(A, t)) < 1e-5 * std::max(1.0, std::abs(fd)));
  }
  // Sign pattern for aspect at least 9.
  for (int k = 1; k < 100; ++k) {
    double t = kPi * k / 100;
    CHECK(f_graph_dd(9.5, t) < 0);
    CHECK(f_graph_dd(9.5, t + kPi) > 0);
  }
}

TEST_CASE("circle fit") {
  std::vector<cplx> pts;
  for (int k = 0; k < 40; ++k) pts.push_back(cplx(1, -2) + std::polar(3.0, 0.3 * k));
  CircleFit f = fit_circle(pts);
  CHECK(std::abs(f.center - cplx(1, -2)) < 1e-12);
  CHECK(f.radius == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("C-circle samples in Heisenberg charts") {
  RepInstance rep = build_rep(kSLow);
  HeisMap B3 = build_normalization(NormalizationKind::N3_AxisUnitRadius, rep);
  CircleSample c1 = ccircle_sample(CCircle(rep.Cp[1]), B3, 256);
  CHECK(!c1.vertical);
  CHECK(std::abs(c1.fit.radius - 1) < 1e-6);
  CHECK(c1.fit.residual < 1e-7);
  CHECK(c1.contact_residual < 1e-9);
  double A = aspect_invariant(HVec3(rep.Ep[0]), HVec3(rep.Cp[1])).value;
  CHECK(std::abs(c1.fitted_aspect() - A) < 1e-6);
  CHECK(std::abs(c1.data.aspect() - A) < 1e-8);

  HeisMap B1 = build_normalization(NormalizationKind::N1_StandardPair, rep);
  CircleSample e0 = ccircle_sample(CCircle(rep.Ep[0]), B1, 64);
  CHECK(e0.vertical);
  CHECK(std::abs(ccircle_sample(CCircle(rep.Cp[2]), B1, 256).fitted_aspect() - A) < 1e-6);
}

TEST_CASE("delta invariant") {
  CHECK(delta_invariant(HVec3(1, 0, 2), HVec3(0, 1, 3), HVec3(3, 2, 1)).value == 0.0);
  // Siegel triple with a point (z, t): delta = |t| / |z|^2.
  for (int k = 0; k < 20; ++k) {
    cplx z = rand_c(2.0);
    double t = uniform(-3, 3);
    Vec3 l;
    l << cplx(-std::norm(z), t), kSqrt2 * z, 1.0;
    double d = delta_invariant(HVec3(0, 0, 1, Form::Siegel), HVec3(1, 0, 0, Form::Siegel), HVec3(l, Form::Siegel)).value;
    CHECK(d == doctest::Approx(std::abs(t) / std::norm(z)).epsilon(1e-12));
  }
  // Invariance under isometries and rescaling.
  for (int k = 0; k < 20; ++k) {
    Vec3 a = rand_vec(), b = rand_vec(), c = rand_vec();
    Mat3 g = rand_isometry();
    double d0 = delta_invariant(HVec3(a), HVec3(b), HVec3(c)).value;
    double d1 = delta_invariant(HVec3(Vec3(rand_c(2) * (g * a))), HVec3(Vec3(g * b)), HVec3(Vec3(rand_c(2) * (g * c))))
                    .value;
    CHECK(std::abs(d0 - d1) < 1e-8 * std::max(1.0, d0));
  }
  DeltaValue inf = delta_invariant(HVec3(0, 0, 1, Form::Siegel), HVec3(1, 0, 0, Form::Siegel),
                                   HVec3(cplx(0, 1), 0, 1, Form::Siegel));
  CHECK(inf.infinite);
  CHECK_THROWS_AS(delta_invariant(HVec3(1, 0, 0), HVec3(0, 1, 0), HVec3(1, 1, 1)), Error);
}

TEST_CASE("delta of the item 3 triple at the parabolic endpoint is sqrt 15") {
  RepInstance rep = build_rep(kSBar);
  Vec3 U1(rep.b, std::conj(rep.b), 1.0), U2(rep.a, std::conj(rep.a), 1.0);
  double d = delta_invariant(HVec3(U1), HVec3(U2), HVec3(Vec3(rep.I[1] * U2))).value;
  CHECK(d == doctest::Approx(std::sqrt(15.0)).epsilon(1e-6));
}

TEST_CASE("cross ratio") {
  CHECK(std::abs(cross_ratio(XC::infinity(), XC(-1.0), XC(0.0), XC(1.0)) - 2.0) < 1e-15);
  CHECK_THROWS_AS(cross_ratio(XC(1.0), XC(1.0), XC(0.0), XC(2.0)), Error);
  for (int k = 0; k < 100; ++k) {
    cplx z[4] = {rand_c(), rand_c(), rand_c(), rand_c()};
    cplx a = rand_c(), b = rand_c(), c = rand_c(), d = rand_c();
    if (std::abs(a * d - b * c) < 0.1) continue;
    auto m = [&](cplx w) { return (a * w + b) / (c * w + d); };
    cplx x0 = cross_ratio(z[0], z[1], z[2], z[3]);
    cplx x1 = cross_ratio(m(z[0]), m(z[1]), m(z[2]), m(z[3]));
    CHECK(std::abs(x0 - x1) < 1e-10 * std::max(1.0, std::abs(x0)));
    // Infinity as a limit.
    cplx big = 1e9 * (1.0 + rand_c());
    cplx xi = cross_ratio(XC::infinity(), z[1], z[2], z[3]);
    cplx xb = cross_ratio(big, z[1], z[2], z[3]);
    CHECK(std::abs(xi - xb) < 1e-6 * std::max(1.0, std::abs(xi)));
  }
}

TEST_CASE("cross ratio criterion over the sweep") {
  for (int k = 0; k < 64; ++k) {
    double s = kSLow + (kSBar - kSLow) * k / 63.0;
    RepInstance rep = build_rep(s);
    cplx f = cross_ratio(rep.a, -rep.a, rep.b, rep.beta);
    CHECK(f.real() > 2);
  }
}

TEST_CASE("spinal spheres") {
  SpinalSphere S = SpinalSphere::from_poles(Vec3(cplx(0, 1), 0, 1), Vec3(cplx(0, -1), 0, 1));
  for (const Vec3& x : S.sample(12, 24)) {
    HeisPoint h = heis_chart(x);
    CHECK(std::abs(std::pow(std::norm(h.z), 2) + h.t * h.t - 1) < 1e-8);
  }
  // The spine is the vertical axis.
  Vec3 sp = S.spine_polar();
  CHECK(std::abs(sp(0)) < 1e-12);
  CHECK(std::abs(sp(2)) < 1e-12);

  // A cospinal family: radii 1/2, 1, 2 about the same poles.
  std::vector<std::vector<HeisPoint>> fam;
  for (double rho : {0.5, 1.0, 2.0}) {
    SpinalSphere T = SpinalSphere::from_poles(Vec3(cplx(0, rho), 0, 1), Vec3(cplx(0, -rho), 0, 1));
    std::vector<HeisPoint> pts;
    for (const Vec3& x : T.sample(10, 16)) pts.push_back(heis_chart(x));
    fam.push_back(pts);
  }
  for (size_t i = 0; i < fam.size(); ++i)
    for (size_t j = i + 1; j < fam.size(); ++j) {
      double m = 1e300;
      for (const auto& p : fam[i])
        for (const auto& q : fam[j]) m = std::min(m, std::abs(p.z - q.z) + std::abs(p.t - q.t));
      CHECK(m > 0.01);
    }
  CHECK_THROWS_AS(SpinalSphere::from_poles(Vec3(1, 0, 0), Vec3(2, 0, 0)), Error);
}

TEST_CASE("contact tangency of C-circles fails and of R-circle lines holds") {
  // Horizontal line through the origin is an R-circle.
  std::vector<HeisPoint> line;
  for (int k = 0; k < 100; ++k) line.emplace_back(cplx(-1 + 0.02 * k, 0), 0.0);
  CHECK(contact_tangency_residual(line) < 1e-14);
  std::vector<HeisPoint> vertical;
  for (int k = 0; k < 100; ++k) vertical.emplace_back(cplx(0, 0), 0.01 * k);
  CHECK(contact_tangency_residual(vertical) > 0.5);
}
