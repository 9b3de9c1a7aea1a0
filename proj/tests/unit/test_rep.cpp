#include "doctest.h"

#include "crgeo/rep.hpp"
#include "support.hpp"

using namespace crgeo;
using namespace crgeo::test;

namespace {

double sweep_s(int k, int n) { return kSLow + (kSBar - kSLow) * k / (n - 1.0); }

bool proportional(const Vec3& u, const Vec3& v, double tol) {
  // |u ^ v| relative to |u||v|.
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) m = std::max(m, std::abs(u(i) * v(j) - u(j) * v(i)));
  return m < tol * u.norm() * v.norm();
}

// Frozen from the independent numpy computation.
struct Frozen {
  double s, x;
  cplx e, a, b;
  double k, u, c, A, r, D;
  double re_ab, re_abeta, re_bbeta;
};
const Frozen kFrozen[] = {
    {5.916079783099616, 4.084910056474565, {0.7468024493127731, 0.2080714437260349},
     {0.5434893092548457, 0.45234872689739136}, {0.6990946772013481, -0.10614439367551592}, -0.3361275962610303,
     5.373339639558672, 0.32392476598985287, 9.530412373074444, 3.349905596030148, 0.895072745978419,
     0.33193620186948486, 0.4322396252934959, 0.4749112392221105},
    {6.0, 4.070752434152533, {0.7465801015150123, 0.2054720543919846}, {0.5460917422810388, 0.44920352738203156},
     {0.6990372405553794, -0.10652199921481374}, -0.33222318635372705, 5.876279664192655, 0.3226891861110392,
     9.603536175706754, 3.664662396141621, 0.8958716891669951, 0.3338884068231365, 0.4331101028395702,
     0.47518564076835523},
    {6.3, 4.023025889997074, {0.7457750572835645, 0.19669388333379514}, {0.554825886175987, 0.43836997619480145},
     {0.6988537606363446, -0.10771917770034684}, -0.3189573926234872, 10.239483055889796, 0.3183849005993793,
     9.864954209533671, 6.394480149761549, 0.8986310550703234, 0.3405213036882564, 0.43606422560659447,
     0.47611333264559297},
};

}  // namespace

TEST_CASE("frozen representation data") {
  for (const Frozen& f : kFrozen) {
    CAPTURE(f.s);
    RepInstance rep = build_rep(f.s);
    CHECK(rep.x == doctest::Approx(f.x).epsilon(1e-11));
    CHECK(std::abs(rep.e - f.e) < 1e-10);
    CHECK(std::abs(rep.a - f.a) < 1e-10);
    CHECK(std::abs(rep.b - f.b) < 1e-10);
    CHECK(rep.k == doctest::Approx(f.k).epsilon(1e-10));
    CHECK(rep.r == doctest::Approx(f.r).epsilon(1e-9));
    CHECK(2 * (2 * rep.x - 3) / (rep.x - 3) == doctest::Approx(f.A).epsilon(1e-10));
    CHECK((rep.a * std::conj(rep.b)).real() == doctest::Approx(f.re_ab).epsilon(1e-10));
    CHECK((rep.a * std::conj(rep.beta)).real() == doctest::Approx(f.re_abeta).epsilon(1e-10));
    CHECK((rep.b * std::conj(rep.beta)).real() == doctest::Approx(f.re_bbeta).epsilon(1e-10));
    CHECK(std::norm(rep.d) == doctest::Approx(1 - std::norm(rep.c)).epsilon(1e-10));
    CHECK(1 - 1 / (2 * (2 * rep.x - 3) / (rep.x - 3)) == doctest::Approx(f.D).epsilon(1e-10));
  }
}

TEST_CASE("classification") {
  CHECK(build_rep(kSBar).cls == RepClass::Parabolic);
  CHECK(build_rep(kSLow).cls == RepClass::Loxodromic);
  CHECK(build_rep(0.0).cls == RepClass::Loxodromic);
  RepInstance e = build_rep(kSBar + 0.5);
  CHECK(e.cls == RepClass::Elliptic);
  CHECK(e.elliptic_warning);
  CHECK(!e.certified);
  CHECK(!build_rep(1.0).certified);
  CHECK(build_rep(6.0).certified);
  CHECK_THROWS_AS(build_rep(-1.0), Error);
}

TEST_CASE("generators") {
  for (double s : {0.0, 1.0, kSLow, 6.3, kSBar}) {
    RepInstance rep = build_rep(s);
    CHECK(std::norm(rep.beta) == doctest::Approx(0.5).epsilon(1e-14));
    for (int j = 0; j < 3; ++j) {
      CHECK(max_abs(rep.I[j] * rep.I[j] - Mat3::Identity()) < 1e-12);
      // I_j fixes p_{j-1} and p_{j+1} projectively.
      for (int o : {(j + 1) % 3, (j + 2) % 3}) CHECK(proportional(rep.I[j] * rep.p[o], rep.p[o], 1e-12));
      CHECK(std::abs(inner(rep.p[j], rep.p[j], Form::Ball)) < 1e-12);
    }
    Mat3 g;
    cplx A1 = cplx(s, 17) / cplx(s, 1), A2 = cplx(0, 12 * kSqrt2 / std::sqrt(1 + s * s));
    g << 0.0, -1.0, 0.0, -A1, 0.0, A2, -A2, 0.0, -std::conj(A1);
    CHECK(max_abs(rep.g0 - g) < 1e-12);
    CHECK(9 * std::norm(rep.A1 - 1.0) == doctest::Approx(8 * std::norm(rep.A2)).epsilon(1e-10));
  }
}

TEST_CASE("the swap symmetry exchanges p1 and p2 and fixes p0") {
  auto swap = [](const Vec3& v) { return Vec3(std::conj(v(1)), std::conj(v(0)), std::conj(v(2))); };
  for (int k = 0; k < 16; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 16));
    CHECK(proportional(swap(rep.p[0]), rep.p[0], 1e-12));
    CHECK(proportional(swap(rep.p[1]), rep.p[2], 1e-12));
    CHECK(proportional(swap(rep.p[2]), rep.p[1], 1e-12));
  }
}

TEST_CASE("eigen datum") {
  for (int k = 0; k < 32; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 32));
    EigenDatum ed = eigen_e(rep);
    double x = rep.x;
    CHECK(std::abs(std::abs(ed.lambda) - 1) < 1e-12);
    CHECK(std::abs(ed.lambda - ed.raw_eigenvalue) < 1e-9);
    CHECK(ed.shape_residual < 1e-9);
    CHECK(std::norm(ed.e) == doctest::Approx(x * x / (9 * (x - 1))).epsilon(1e-9));
    CHECK(std::norm(ed.e - std::conj(ed.e)) == doctest::Approx(x * (x - 3) * (x - 3) / (9 * (x - 1))).epsilon(1e-9));
    Vec3 v(ed.e, std::conj(ed.e), 1.0);
    CHECK((rep.g0 * v - ed.raw_eigenvalue * v).norm() < 1e-9);
  }
}

TEST_CASE("x over the certified range") {
  CHECK(build_rep(kSBar).x == doctest::Approx(4.0).epsilon(1e-9));
  for (int k = 0; k < 256; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 256));
    double x = rep.x, s = rep.s;
    CHECK(x >= 4 - 1e-12);
    CHECK(x <= 817.0 / 200);
    CHECK(288 / (1 + s * s) == doctest::Approx(9 * (x - 1) * (x - 3) * (x - 3) / x).epsilon(1e-8));
  }
  for (double s : {0.0, 0.5, 1.0, 3.0}) CHECK(build_rep(s).x > 1);
  CHECK_THROWS_AS(x_of(cplx(1.0, 0.0)), Error);
}

TEST_CASE("Clifford torus points") {
  for (int k = 0; k < 64; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 64));
    auto [a, b] = clifford_points(rep);
    CHECK(std::abs(a - rep.a) < 1e-14);
    CHECK(std::abs(b - rep.b) < 1e-14);
    CHECK(std::norm(a) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(b) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(inner(rep.qa, Vec3(rep.e, std::conj(rep.e), 1.0), Form::Ball)) < 1e-9);
    double re_ab = (a * std::conj(b)).real(), im_ba = (b * std::conj(a)).imag();
    CHECK(re_ab >= 0.331);
    CHECK(re_ab <= 0.344);
    CHECK(im_ba >= -0.374);
    CHECK(im_ba <= -0.363);
  }
  CHECK_THROWS_AS(clifford_points(cplx(0.5, 0.0)), Error);
}

TEST_CASE("Q0 endpoints") {
  for (int k = 0; k < 63; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 64));
    Q0Endpoints q = q0_endpoints(rep);
    double x = rep.x;
    CHECK(std::norm(q.c) + std::norm(q.d) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::norm(q.c) >= 0.5);
    CHECK(std::norm(q.d) > 0.294);
    CHECK(std::norm(q.c) * std::norm(q.d) == doctest::Approx(1 / (x * (x - 3) * (x - 3))).epsilon(1e-8));
    CHECK(proportional(rep.g0 * q.end1, q.end1, 1e-8));
    CHECK(proportional(rep.g0 * q.end2, q.end2, 1e-8));
    for (const Vec3& v : {q.end1, q.end2}) {
      CHECK(std::abs(inner(v, v, Form::Ball)) < 1e-9);
      CHECK(std::abs(inner(v, rep.Ep[0], Form::Ball)) < 1e-9 * v.norm() * rep.Ep[0].norm());
    }
  }
}

TEST_CASE("Q0 shrinks to a point at the parabolic endpoint") {
  double prev = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    RepInstance rep = build_rep(kSBar - eps);
    double gap = (rep.Q[0].end1 / rep.Q[0].end1(2) - rep.Q[0].end2 / rep.Q[0].end2(2)).norm();
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.05);
  CHECK(build_rep(kSBar).q0_degenerate());
}

TEST_CASE("harmonic parameter") {
  for (int k = 0; k < 63; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 64));
    HarmonicR h = r_harmonic(rep);
    CHECK(!h.infinite);
    CHECK(h.r > 3);
    for (const Vec3& P : {h.Pr, h.Pmr}) {
      CHECK(std::abs(inner(P, P, Form::Ball)) < 1e-9 * P.squaredNorm());
      CHECK(proportional(rep.g0 * P, P, 1e-8));
    }
  }
  HarmonicR inf = r_harmonic(build_rep(kSBar));
  CHECK(inf.infinite);
  CHECK(std::isinf(build_rep(kSBar).r));
}

TEST_CASE("scalar panel") {
  for (int k = 0; k < 64; ++k) {
    double s = k == 63 ? kSBar - 1e-6 : sweep_s(k, 64);
    RepInstance rep = build_rep(s);
    ScalarPanel P;
    REQUIRE_NOTHROW(P = scalar_panel(rep, true));
    CHECK(P.all_ok());
    CHECK(P.max_error() < 1e-8);
    double re_abeta = P.get("re_abeta").direct;
    CHECK(re_abeta >= 0.432);
    CHECK(re_abeta <= 0.438);
  }
  // At x = 4 the triple sum has magnitude sqrt(15)/128.
  ScalarPanel P = scalar_panel(build_rep(kSBar), true);
  CHECK(std::abs(P.get("im_triple").closed) == doctest::Approx(std::sqrt(15.0) / 128).epsilon(1e-6));
  CHECK(P.get("im_triple").sign_conflict);
  CHECK_THROWS_AS(P.get("no_such_entry"), Error);
}

TEST_CASE("monotone scalars over the range") {
  std::vector<double> ab, abt, bbt;
  for (int k = 0; k < 256; ++k) {
    RepInstance rep = build_rep(sweep_s(k, 256));
    ab.push_back((rep.a * std::conj(rep.b)).real());
    abt.push_back((rep.a * std::conj(rep.beta)).real());
    bbt.push_back((rep.b * std::conj(rep.beta)).real());
  }
  for (const auto* v : {&ab, &abt, &bbt}) {
    int pos = 0, neg = 0;
    for (size_t i = 1; i < v->size(); ++i) ((*v)[i] > (*v)[i - 1] ? pos : neg)++;
    CHECK((pos == 0 || neg == 0));
  }
}

TEST_CASE("item 3 quantity exceeds 8") {
  for (int k = 0; k < 64; ++k) CHECK(item3_quantity(build_rep(sweep_s(k, 64))) > 8);
}
