#include "crgeo/rep.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace crgeo {

namespace {

const cplx I_(0.0, 1.0);

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Index of the eigenvalue of unit modulus; ties (near-parabolic) are broken
// by picking the eigenvalue farthest from the other two.
int positive_eigen_index(const std::array<cplx, 3>& lam) {
  std::array<double, 3> dev, iso;
  for (int i = 0; i < 3; ++i) {
    dev[i] = std::abs(std::abs(lam[i]) - 1.0);
    iso[i] = std::min(std::abs(lam[i] - lam[(i + 1) % 3]), std::abs(lam[i] - lam[(i + 2) % 3]));
  }
  double best = *std::min_element(dev.begin(), dev.end());
  int pick = -1;
  for (int i = 0; i < 3; ++i) {
    if (dev[i] <= best + 1e-7 && (pick < 0 || iso[i] > iso[pick])) pick = i;
  }
  return pick;
}

}  // namespace

const char* rep_class_name(RepClass c) {
  switch (c) {
    case RepClass::Loxodromic: return "loxodromic";
    case RepClass::Parabolic: return "parabolic";
    case RepClass::Elliptic: return "elliptic";
  }
  return "?";
}

double x_of(cplx e) {
  double e2 = std::norm(e);
  if (std::abs(1.0 - e2) < 1e-14) throw Error(ErrorKind::SingularX, "|e| = 1");
  return ((e * e + e2 + std::conj(e) * std::conj(e)) / (1.0 - e2)).real();
}

double x_of(const RepInstance& rep) { return x_of(rep.e); }

std::pair<cplx, cplx> clifford_points(cplx e) {
  double disc = 2.0 * std::norm(e) - 1.0;
  if (disc <= 0.0) throw Error(ErrorKind::RealBranch, fmt("2|e|^2 - 1 = %.3e is not positive", disc));
  double sq = std::sqrt(disc);
  cplx eb = std::conj(e);
  return {(1.0 + I_ * sq) / (2.0 * eb), (1.0 - I_ * sq) / (2.0 * eb)};
}

std::pair<cplx, cplx> clifford_points(const RepInstance& rep) { return clifford_points(rep.e); }

EigenDatum eigen_e(const RepInstance& rep) {
  auto pairs = eigensystem(IsometryMatrix(rep.g0), 1e-9);
  std::array<cplx, 3> lam{pairs[0].value, pairs[1].value, pairs[2].value};
  int k = positive_eigen_index(lam);
  Vec3 v = pairs[k].vector.v;
  if (std::abs(v(2)) < 1e-12) throw Error(ErrorKind::RepresentationDegenerate, "eigenvector has vanishing last coordinate");
  v /= v(2);
  double shape = std::abs(v(1) - std::conj(v(0)));
  if (shape > 1e-7) throw Error(ErrorKind::RepresentationDegenerate, fmt("eigenvector not of shape (e, conj e, 1): %.3e", shape), shape);
  cplx e = v(0);
  cplx lamf = -std::conj(e) / e;
  if (std::abs(lamf - lam[k]) > 1e-7)
    throw Error(ErrorKind::RepresentationDegenerate, "eigenvalue disagrees with -conj(e)/e");
  return {e, lamf, lam[k], shape};
}

RepInstance build_rep(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorKind::InvalidArgument, "s must be finite and >= 0");
  RepInstance R;
  R.s = s;
  R.certified = s >= kSLow - 1e-12 && s <= kSBar + 1e-12;
  R.beta = cplx(s, 1.0) / std::sqrt(2.0 + 2.0 * s * s);
  R.A1 = cplx(s, 17.0) / cplx(s, 1.0);
  R.A2 = cplx(0.0, 12.0 * kSqrt2 / std::sqrt(1.0 + s * s));
  cplx b = R.beta, bb = std::conj(b);

  R.Cp[0] << 1.0, -1.0, 0.0;
  R.Cp[1] << 0.0, 2.0 * bb, 1.0;
  R.Cp[2] << 2.0 * b, 0.0, 1.0;
  R.p[0] << b, bb, 1.0;
  R.p[1] << b, b, 1.0;
  R.p[2] << bb, bb, 1.0;

  R.I[0] << 0, -1, 0, -1, 0, 0, 0, 0, -1;
  R.I[1] << -1, 0, 0, 0, 3, -4.0 * bb, 0, 4.0 * b, -3;
  R.I[2] << 3, 0, -4.0 * b, 0, -1, 0, 4.0 * bb, 0, -3;
  R.g0 = R.I[1] * R.I[0] * R.I[2];

  Eigen::ComplexEigenSolver<Mat3> es(R.g0, true);
  for (int i = 0; i < 3; ++i) R.eigenvalues[i] = es.eigenvalues()(i);
  double maxmod = 0, maxdev = 0;
  for (auto l : R.eigenvalues) {
    maxmod = std::max(maxmod, std::abs(l));
    maxdev = std::max(maxdev, std::abs(std::abs(l) - 1.0));
  }
  if (maxmod > 1.0 + 1e-7) {
    R.cls = RepClass::Loxodromic;
  } else {
    // Non-diagonalizable when two eigenvectors are numerically parallel.
    double minsin = 1.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        Vec3 u = es.eigenvectors().col(i).normalized(), w = es.eigenvectors().col(j).normalized();
        double c = std::abs(u.dot(w));
        minsin = std::min(minsin, std::sqrt(std::max(0.0, 1.0 - c * c)));
      }
    R.cls = (maxdev <= 1e-7 && minsin < 1e-4) ? RepClass::Parabolic : RepClass::Elliptic;
  }
  if (s > kSBar + 1e-12) {
    R.elliptic_warning = true;
    R.warnings.push_back("s exceeds the parabolic endpoint; lemma checks disabled");
  }

  auto ed = eigen_e(R);
  R.e = ed.e;
  R.lambda = ed.lambda;
  R.x = x_of(R.e);
  R.Ep[0] << R.e, std::conj(R.e), 1.0;
  R.Ep[1] = R.I[2] * R.Ep[0];
  R.Ep[2] = R.I[1] * R.Ep[0];

  auto ab = clifford_points(R.e);
  R.a = ab.first;
  R.b = ab.second;
  R.qa << R.a, std::conj(R.a), 1.0;
  R.qb << R.b, std::conj(R.b), 1.0;
  R.k = inner(R.qa, R.qb, Form::Ball).real();

  if (R.cls == RepClass::Loxodromic) {
    auto hr = r_harmonic(R);
    R.r = hr.r;
    R.Pr = hr.Pr;
    R.Pmr = hr.Pmr;
    auto qe = q0_endpoints(R);
    R.c = qe.c;
    R.d = qe.d;
    R.Q[0] = {qe.end1, qe.end2, R.qa, false};
  } else {
    R.r = std::numeric_limits<double>::infinity();
    R.Pr = R.qa;
    R.Pmr = R.qa;
    R.c = R.a;
    R.d = std::conj(R.a);
    R.Q[0] = {R.qa, R.qa, R.qa, true};
  }
  auto img = [](const Mat3& M, const ArcDescriptor& q) {
    return ArcDescriptor{M * q.end1, M * q.end2, M * q.interior, q.degenerate};
  };
  R.Q[1] = img(R.I[2], R.Q[0]);
  R.Q[2] = img(R.I[1], R.Q[0]);
  return R;
}

HarmonicR r_harmonic(const RepInstance& rep) {
  if (rep.cls != RepClass::Loxodromic) {
    double inf = std::numeric_limits<double>::infinity();
    return {inf, true, rep.qa, rep.qa};
  }
  Eigen::ComplexEigenSolver<Mat3> es(rep.g0, true);
  std::array<cplx, 3> lam{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
  int k = positive_eigen_index(lam);
  Eigen::Matrix<cplx, 3, 2> S;
  S.col(0) = rep.qa;
  S.col(1) = I_ * rep.qb;
  std::vector<double> rs;
  for (int j = 0; j < 3; ++j) {
    if (j == k) continue;
    Vec3 v = es.eigenvectors().col(j);
    Eigen::Vector2cd sol = S.colPivHouseholderQr().solve(v);
    double res = (S * sol - v).norm() / v.norm();
    cplx ratio = sol(0) / sol(1);
    if (res > 1e-6 || std::abs(ratio.imag()) > 1e-6 * std::max(1.0, std::abs(ratio)))
      throw Error(ErrorKind::Construction, fmt("fixed point not of the form r qa + i qb (residual %.3e)", res), res);
    rs.push_back(ratio.real());
  }
  if (std::abs(rs[0] + rs[1]) > 1e-6 * std::max(1.0, std::abs(rs[0])))
    throw Error(ErrorKind::Construction, "fixed points are not symmetric about qb");
  double r = 0.5 * (std::abs(rs[0]) + std::abs(rs[1]));
  Vec3 Pr = r * rep.qa + I_ * rep.qb;
  Vec3 Pmr = -r * rep.qa + I_ * rep.qb;
  return {r, false, Pr, Pmr};
}

Q0Endpoints q0_endpoints(const RepInstance& rep) {
  if (rep.cls != RepClass::Loxodromic) throw Error(ErrorKind::DegenerateParameter, "Q0 endpoints need a loxodromic g0");
  Q0Endpoints out;
  // Roots of z^3 + (2 conj A1/A2) z^2 + (conj A1^2 - A1)/A2^2 z + 1/A2.
  cplx A1 = rep.A1, A2 = rep.A2, A1b = std::conj(A1);
  Mat3 comp = Mat3::Zero();
  comp(0, 0) = -2.0 * A1b / A2;
  comp(0, 1) = -(A1b * A1b - A1) / (A2 * A2);
  comp(0, 2) = -1.0 / A2;
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  Eigen::ComplexEigenSolver<Mat3> es(comp, false);
  std::array<cplx, 3> roots{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
  out.cubic_roots = roots;
  int ie = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(roots[i] - rep.e) < std::abs(roots[ie] - rep.e)) ie = i;
  std::vector<cplx> rest;
  for (int i = 0; i < 3; ++i)
    if (i != ie) rest.push_back(roots[i]);
  if (std::abs(rest[0] - rest[1]) < 1e-9 || std::abs(roots[ie] - rep.e) > 1e-7)
    throw Error(ErrorKind::Labeling, "cannot separate the cubic roots");
  if (std::norm(rest[0]) < std::norm(rest[1])) std::swap(rest[0], rest[1]);
  out.c = rest[0];
  out.d = std::conj(rest[1]);
  out.end1 << out.c, out.d, 1.0;
  out.end2 << std::conj(out.d), std::conj(out.c), 1.0;
  // Cross-check against the eigenvector route.
  double best = 1e300;
  for (const Vec3& P : {rep.Pr, rep.Pmr}) {
    Vec3 n = P / P(2);
    best = std::min(best, (n - out.end1).norm());
  }
  out.match_residual = best;
  if (best > 1e-6) throw Error(ErrorKind::Labeling, fmt("cubic roots do not match the fixed points (%.3e)", best), best);
  return out;
}

const ScalarEntry& ScalarPanel::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw Error(ErrorKind::InvalidArgument, "unknown panel entry " + name);
}

double ScalarPanel::max_error() const {
  double m = 0;
  for (const auto& e : entries) m = std::max(m, e.error());
  return m;
}

bool ScalarPanel::all_ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const ScalarEntry& e) { return e.ok(); });
}

double item3_quantity(const RepInstance& R) {
  cplx bt = R.beta;
  double ab = (R.a * std::conj(R.b)).real();
  double abt = (R.a * std::conj(bt)).real();
  double bbt = (R.b * std::conj(bt)).real();
  return (1 - 2 * ab) * (1 + 2 * abt) / (1 - 2 * bbt);
}

ScalarPanel scalar_panel(const RepInstance& R, bool strict) {
  if (R.cls == RepClass::Elliptic) throw Error(ErrorKind::DegenerateParameter, "scalar panel needs a non-elliptic g0");
  ScalarPanel P;
  P.s = R.s;
  const double x = R.x, s = R.s;
  P.x = x;
  const cplx a = R.a, b = R.b, bt = R.beta, e = R.e, eb = std::conj(e);
  const double e2 = std::norm(e);
  const double tol = 1e-8;
  auto add = [&](const std::string& n, double direct, double closed, bool conflict = false) {
    P.entries.push_back({n, direct, closed, tol, conflict});
  };
  const double root9 = std::sqrt(std::max(0.0, (x - 3) * (2 * x - 3) * (9 - x)));
  const double root1 = std::sqrt(std::max(0.0, (x - 3) * (2 * x - 3) * (x - 1)));

  cplx ab = a * std::conj(b), abt = a * std::conj(bt), bbt = b * std::conj(bt);
  double re_abt = (3 * (x - 1) * (9 + x) - (x - 3) * root9) / (16 * x * x);
  double re_bbt = (3 * (x - 1) * (9 + x) + (x - 3) * root9) / (16 * x * x);
  add("re_ab", ab.real(), (-9 + 9 * x - x * x) / (2 * x * x));
  add("im_ab", ab.imag(), 3 * root1 / (2 * x * x));
  add("re_abeta", abt.real(), re_abt);
  add("im_abeta", abt.imag(), std::sqrt(std::max(0.0, 0.25 - re_abt * re_abt)));
  add("re_bbeta", bbt.real(), re_bbt);
  add("im_bbeta", bbt.imag(), -std::sqrt(std::max(0.0, 0.25 - re_bbt * re_bbt)));
  // The sum is negative on the whole range; the published closed form is its magnitude.
  cplx tri = ab + b * std::conj(bt) + bt * std::conj(a);
  add("im_triple", tri.imag(), -(x - 3) * root1 / (8 * x * x), true);
  add("abs_e2", e2, x * x / (9 * (x - 1)));
  add("abs_e_minus_ebar2", std::norm(e - eb), x * (x - 3) * (x - 3) / (9 * (x - 1)));
  add("abs_2betabar_e_minus_1_2", std::norm(2.0 * std::conj(bt) * e - 1.0), (x - 3) * (x - 3) / (18 * (x - 1)));
  add("abs_A2_2", std::norm(R.A2), 9 * (x - 1) * (x - 3) * (x - 3) / x);
  add("abs_A2_2_s", std::norm(R.A2), 288.0 / (1 + s * s));

  // Identities that do not involve x.
  cplx betabar_id = 0.75 * (R.A1 - 1.0) / R.A2;
  add("betabar_identity", std::abs(std::conj(bt) - betabar_id), 0.0);
  cplx A1f = (e * e - eb * eb * eb * eb) / (e2 - e2 * e2);
  cplx A2f = (e * e * e - eb * eb * eb) / (e2 - e2 * e2);
  add("A1_from_e", std::abs(R.A1 - A1f), 0.0);
  add("A2_from_e", std::abs(R.A2 - A2f), 0.0);
  add("A1m1_over_A2", std::abs((R.A1 - 1.0) / R.A2 - (e / x + eb)), 0.0);
  add("nine_A1m1_eight_A2", 9 * std::norm(R.A1 - 1.0), 8 * std::norm(R.A2));
  add("abs_a2", std::norm(a), 0.5);
  add("abs_b2", std::norm(b), 0.5);
  add("abs_lambda", std::abs(R.lambda), 1.0);
  add("aspect", (2 * e2 - 1) / std::norm(2.0 * std::conj(bt) * e - 1.0), 2 * (2 * x - 3) / (x - 3));
  cplx Ua = 2.0 * std::conj(a) * bt - 1.0, Ub = 2.0 * std::conj(b) * bt - 1.0;
  add("two_re_UaUb", 2 * (Ua * std::conj(Ub)).real(), -3 * (3 - 4 * x + x * x) / (2 * x * x));
  if (R.cls == RepClass::Loxodromic) {
    double c2 = std::norm(R.c), d2 = std::norm(R.d);
    add("c2_plus_d2", c2 + d2, 1.0);
    add("c2_times_d2", c2 * d2, 1.0 / (x * (x - 3) * (x - 3)));
  }
  if (strict) {
    for (const auto& en : P.entries) {
      if (en.error() > 1e-7) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s at s=%.9f: direct %.12g vs closed %.12g", en.name.c_str(), s, en.direct,
                      en.closed);
        throw Error(ErrorKind::IdentityViolation, buf, en.error());
      }
    }
  }
  return P;
}

}  // namespace crgeo
