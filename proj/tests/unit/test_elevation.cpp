#include "doctest.h"

#include "crgeo/elevation.hpp"
#include "crgeo/sectors.hpp"
#include "support.hpp"

using namespace crgeo;
using namespace crgeo::test;

namespace {

const Elevation& elev_low() {
  static const Elevation E(build_rep(kSLow));
  return E;
}

// Random point of Heisenberg space off the vertical axis, as a Siegel lift.
Vec3 rand_off_axis(double zmin = 0.2) {
  cplx z;
  do z = rand_c(3.0);
  while (std::abs(z) < zmin);
  return heis_lift(HeisPoint(z, uniform(-8, 8)));
}

// Point of S0 = {|z|^4 + t^2 = u^2}.
Vec3 on_s0(double u, double psi, double alpha) {
  return heis_lift(HeisPoint(std::polar(std::sqrt(u * std::cos(psi)), alpha), u * std::sin(psi)));
}

Mat3 rand_stabilizer(const Elevation& E) { return E.fiber_element(ElevationPoint(uniform(0, kTwoPi), uniform(-2, 2))); }

}  // namespace

TEST_CASE("elevation points and theta helpers") {
  ElevationPoint p(-0.5, 1.0);
  CHECK(p.winding == -1);
  CHECK(p.canonical() == doctest::Approx(kTwoPi - 0.5));
  CHECK(ElevationPoint(4 * kPi + 1, 0).canonical() == doctest::Approx(1.0));
  CHECK(theta_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(golden_search([](double t) { return (t - 0.3) * (t - 0.3); }, 0, 1, 1) == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(golden_search([](double t) { return std::sin(t); }, 0, 3, -1) == doctest::Approx(kPi / 2).epsilon(1e-7));
}

TEST_CASE("psi has a pole on E0") {
  const Elevation& E = elev_low();
  CHECK_THROWS_AS(E.psi_siegel(Vec3(1, 0, 0)), Error);
  CHECK_THROWS_AS(E.psi_siegel(heis_lift(HeisPoint(0.0, 2.0))), Error);
  try {
    E.psi(HVec3(E.rep().Q[0].end1));
    FAIL("expected a pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Pole);
  }
}

TEST_CASE("harmonic fibers are fibers of psi") {
  const Elevation& E = elev_low();
  double u = E.u();
  for (int k = 0; k < 30; ++k) {
    Vec3 X = rand_off_axis();
    FiberArc F = E.fiber_through(X, 64);
    double spread = 0;
    for (const Vec3& Y : F.pts) {
      ElevationPoint q = E.psi_siegel(Y);
      spread = std::max({spread, theta_distance(q.theta, F.psi.theta), std::abs(q.h - F.psi.h)});
    }
    CHECK(spread < 1e-7);
    CHECK(F.t_lower * F.t_upper == doctest::Approx(u * u).epsilon(1e-6));
    // The projection passes through the origin: the full R-circle meets the axis.
    auto circ = E.fiber_circle(X);
    CHECK(std::abs(heis_chart(circ(0.0)).z) < 1e-9);
  }
}

TEST_CASE("psi conjugates the stabilizer of E0 and Q0 to translations") {
  const Elevation& E = elev_low();
  for (int k = 0; k < 10; ++k) {
    Mat3 g = rand_stabilizer(E);
    std::vector<double> dth, dh;
    for (int j = 0; j < 64; ++j) {
      Vec3 X = rand_off_axis();
      ElevationPoint a = E.psi_siegel(X), b = E.psi_siegel(Vec3(g * X));
      dth.push_back(std::remainder(b.theta - a.theta, kTwoPi));
      dh.push_back(b.h - a.h);
    }
    double mth = 0, mh = 0;
    for (int j = 0; j < 64; ++j) {
      mth += dth[j] / 64;
      mh += dh[j] / 64;
    }
    double res = 0;
    for (int j = 0; j < 64; ++j) res = std::max({res, std::abs(dth[j] - mth), std::abs(dh[j] - mh)});
    CHECK(res < 1e-7);
  }
}

TEST_CASE("psi of C1 and E2 are graphs with one max and one min") {
  for (double s : {kSLow, 6.2, kSBar - 1e-6}) {
    Elevation E(build_rep(s));
    for (int j : {1, 2}) {
      const Vec3& P = j == 1 ? E.rep().Cp[1] : E.rep().Ep[2];
      ElevationCurve c = E.image(E.circle_samples(P, 2048), true, "c");
      CHECK(c.graph);
      CHECK(std::abs(c.winding) == 1);
      CHECK(c.extrema == 2);
    }
  }
}

TEST_CASE("branch coherence across sample densities") {
  const Elevation& E = elev_low();
  auto f = E.circle_param(E.rep().Cp[1]);
  GraphFunction g1(E, f, 1024), g2(E, f, 4096, 0.37);
  for (int k = 0; k < 200; ++k) {
    double th = uniform(0, kTwoPi);
    CHECK(std::abs(g1(th) - g2(th)) < 1e-5);
  }
}

TEST_CASE("slope data") {
  const Elevation& E = elev_low();
  double u = E.u();
  for (int k = 0; k < 50; ++k) {
    SlopeData S = E.slope_at(on_s0(u, uniform(-1.4, 1.4), uniform(0, kTwoPi)));
    CHECK(S.infinite);
    CHECK(std::abs(S.s0_level - 1) < 1e-12);
  }
  for (int k = 0; k < 200; ++k) {
    Vec3 X = rand_off_axis(0.05);
    SlopeData S = E.slope_at(X);
    if (std::abs(S.s0_level - 1) < 1e-3) continue;
    CHECK(!S.infinite);
    CHECK(S.sigma != 0);
    // Positive exactly when S0 separates x from Q0.
    CHECK((S.sigma > 0) == S.remote);
    Mat3 g = rand_stabilizer(E);
    CHECK(E.slope_at(Vec3(g * X)).sigma == doctest::Approx(S.sigma).epsilon(1e-5));
  }
  // Points of one fiber in different orbits have different slopes.
  FiberArc F = E.fiber_through(rand_off_axis(), 16);
  CHECK(std::abs(E.slope_at(F.pts[3]).sigma - E.slope_at(F.pts[12]).sigma) > 1e-4);
  CHECK_THROWS_AS(E.slope_at(heis_lift(HeisPoint(0.0, 1.0))), Error);
}

TEST_CASE("cone disks") {
  const Elevation& E = elev_low();
  ConeDisk D = E.cone_disk(1, 0, 24, 32);
  CHECK(D.fold_turns == 2);
  CHECK(D.arcs.size() == 24);
  // Arcs start on C1 and end on Q0.
  for (const auto& arc : D.arcs) {
    CHECK(std::abs(inner(arc.front(), E.frame().M * E.rep().Cp[1], Form::Siegel)) < 1e-9 * arc.front().norm() *
                                                                                           E.rep().Cp[1].norm() * 10);
    HeisPoint end = heis_chart(arc.back());
    CHECK(std::abs(end.z) < 1e-9);
    CHECK(std::abs(end.t) >= E.u() - 1e-9);  // Q0 runs through infinity in this chart
  }
  // Pairwise disjoint away from the shared endpoints on Q0.
  double m = 1e300;
  for (size_t a = 0; a < D.arcs.size(); ++a)
    for (size_t b = a + 1; b < D.arcs.size(); ++b)
      for (size_t i = 0; i + 4 < D.arcs[a].size(); ++i)
        for (size_t j = 0; j + 4 < D.arcs[b].size(); ++j) {
          HeisPoint p = heis_chart(D.arcs[a][i]), q = heis_chart(D.arcs[b][j]);
          m = std::min(m, std::abs(p.z - q.z) + std::abs(p.t - q.t));
        }
  CHECK(m > 1e-6);
  CHECK_THROWS_AS(E.cone_disk(1, 1, 8, 8), Error);
}

TEST_CASE("R-axis") {
  const Elevation& E = elev_low();
  AxisData A = E.r_axis(1);
  CHECK(std::abs(A.psi[0].h - A.psi[1].h) < 1e-6);
  CHECK(std::abs(theta_distance(A.psi[0].theta, A.psi[1].theta) - kPi) < 1e-6);
  for (const Vec3& X : A.samples) {
    HeisPoint h = heis_chart(X);
    if (h.inf) continue;
    CHECK(std::abs(h.z.imag()) < 1e-12);
    CHECK(std::abs(h.t) < 1e-12);
  }
  // Half-turn about the axis points is a symmetry of psi(C1).
  GraphFunction g(E, E.circle_param(E.rep().Cp[1]), 2048);
  double tha = A.psi[0].theta, ha = A.psi[0].h;
  for (int k = 0; k < 256; ++k) {
    double th = kTwoPi * k / 256;
    CHECK(std::abs(g(2 * tha - th) - (2 * ha - g(th))) < 1e-4);
  }
  AxisData A2 = E.r_axis(2);
  CHECK(std::abs(A2.psi[0].h - A2.psi[1].h) < 1e-6);
}

TEST_CASE("predicates over the certified range") {
  for (int k = 0; k < 8; ++k) {
    double s = k == 7 ? kSBar - 1e-6 : kSLow + (kSBar - kSLow) * k / 7.0;
    CAPTURE(s);
    Elevation E(build_rep(s));
    Predicates P = E.predicates(1024, 32, 24);
    CHECK(P.interlaced);
    CHECK(P.remote);
    CHECK(P.asymmetric);
    CHECK(P.u > 4.2);
  }
}

TEST_CASE("vertical radii") {
  const Elevation& E = elev_low();
  auto f = E.circle_param(E.rep().Cp[1]);
  VerticalRadius a = E.vertical_radius(f, 512), b = E.vertical_radius(E.circle_samples(E.rep().Cp[1], 4096));
  CHECK(a.psi == doctest::Approx(b.psi).epsilon(1e-5));
  CHECK(a.psi >= b.psi);
  // The log formula on [X] reproduces the height spread.
  CHECK(a.eq_log == doctest::Approx(a.psi).epsilon(1e-6));
  CHECK_THROWS_AS(E.vertical_radius(std::vector<Vec3>{}), Error);
}

TEST_CASE("sector regions") {
  const Elevation& E = elev_low();
  PictureData P = sector_regions(E);
  CHECK(P.Q21.h_min() > P.psi2.h_max());
  for (const auto& R : P.regions12) CHECK(R.closure_gap < 1e-3);
  CHECK(pairing_residual(E, P, 0.5) < 1e-5);
  CHECK(P.u_prime > 0);
}
