#include "crgeo/coords.hpp"

#include <cmath>
#include <cstdio>

#include "crgeo/rep.hpp"

namespace crgeo {

namespace {
const cplx I_(0.0, 1.0);

std::string fmtres(const char* what, double r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s (residual %.3e)", what, r);
  return buf;
}

double isometry_residual(const Mat3& M) {
  return (M.adjoint() * form_matrix(Form::Siegel) * M - form_matrix(Form::Ball)).cwiseAbs().maxCoeff();
}

// Ball -> Siegel map with q0 -> infinity, q0' -> 0, E0 -> vertical axis.
Mat3 standard_frame(const RepInstance& R) {
  double ee = inner(R.Ep[0], R.Ep[0], Form::Ball).real();
  Mat3 src, dst = Mat3::Zero();
  src.col(0) = R.qa;
  src.col(1) = R.qb;
  src.col(2) = R.Ep[0];
  dst(0, 0) = 1.0;
  dst(2, 1) = R.k;
  dst(1, 2) = std::sqrt(ee);
  return dst * src.inverse();
}

double pole_t(const Mat3& M, const Vec3& v) { return heis_chart(Vec3(M * v)).t; }

}  // namespace

const Mat3& cayley() {
  static const Mat3 K = [] {
    Mat3 k = Mat3::Zero();
    double h = 1.0 / std::sqrt(2.0);
    k(0, 0) = h;
    k(0, 2) = -h;
    k(1, 1) = 1.0;
    k(2, 0) = h;
    k(2, 2) = h;
    return k;
  }();
  return K;
}

HVec3 ball_to_siegel(const HVec3& v) {
  if (v.form != Form::Ball) throw Error(ErrorKind::FormMismatch, "expected a ball vector");
  return HVec3(Vec3(cayley() * v.v), Form::Siegel);
}

HVec3 siegel_to_ball(const HVec3& v) {
  if (v.form != Form::Siegel) throw Error(ErrorKind::FormMismatch, "expected a Siegel vector");
  return HVec3(Vec3(cayley().inverse() * v.v), Form::Ball);
}

HeisPoint heis_chart(const Vec3& X) {
  double scale = X.norm();
  if (scale == 0.0) throw Error(ErrorKind::DegenerateInput, "zero vector has no chart image");
  if (std::abs(X(2)) <= 1e-14 * scale) return HeisPoint::infinity();
  cplx w1 = X(0) / X(2), w2 = X(1) / X(2);
  return HeisPoint(w2 / kSqrt2, w1.imag());
}

HeisPoint heis_chart(const HVec3& X) {
  if (X.form != Form::Siegel) throw Error(ErrorKind::FormMismatch, "chart expects a Siegel vector");
  return heis_chart(X.v);
}

Vec3 heis_lift(const HeisPoint& p) {
  Vec3 v;
  if (p.inf) {
    v << 1.0, 0.0, 0.0;
    return v;
  }
  v << cplx(-std::norm(p.z), p.t), kSqrt2 * p.z, 1.0;
  return v;
}

HeisPoint heis_mul(const HeisPoint& p, const HeisPoint& q) {
  if (p.inf || q.inf) throw Error(ErrorKind::UndefinedOperation, "group law is undefined at infinity");
  return HeisPoint(p.z + q.z, p.t + q.t + 2.0 * (std::conj(p.z) * q.z).imag());
}

HeisPoint heis_inv(const HeisPoint& p) {
  if (p.inf) throw Error(ErrorKind::UndefinedOperation, "infinity has no inverse");
  return HeisPoint(-p.z, -p.t);
}

Mat3 heis_translation(const HeisPoint& g) {
  Mat3 T = Mat3::Identity();
  T(0, 1) = -kSqrt2 * std::conj(g.z);
  T(0, 2) = cplx(-std::norm(g.z), g.t);
  T(1, 2) = kSqrt2 * g.z;
  return T;
}

Mat3 heis_rotation(double theta) {
  Mat3 m = Mat3::Identity();
  m(1, 1) = std::polar(1.0, theta);
  return m;
}

Mat3 heis_dilation(double r) {
  Mat3 m = Mat3::Zero();
  m(0, 0) = r;
  m(1, 1) = 1.0;
  m(2, 2) = 1.0 / r;
  return m;
}

const char* normalization_name(NormalizationKind k) {
  switch (k) {
    case NormalizationKind::N1_StandardPair: return "N1";
    case NormalizationKind::N2_SwapSymmetric: return "N2";
    case NormalizationKind::N3_AxisUnitRadius: return "N3";
  }
  return "?";
}

NormalizationKind normalization_from_name(const std::string& s) {
  if (s == "N1") return NormalizationKind::N1_StandardPair;
  if (s == "N2") return NormalizationKind::N2_SwapSymmetric;
  if (s == "N3") return NormalizationKind::N3_AxisUnitRadius;
  throw Error(ErrorKind::InvalidArgument, "unknown normalization " + s);
}

CircleData circle_from_polar(const Vec3& X) {
  CircleData c{};
  if (std::abs(X(2)) < 1e-12 * X.norm()) {
    // {z0} x R: <X,(1,0,0)> = 0 and X1 + sqrt2 X2 conj(z0) = 0.
    c.vertical = true;
    c.center_z = std::abs(X(1)) > 0 ? std::conj(-X(0) / (kSqrt2 * X(1))) : cplx(0);
    return c;
  }
  Vec3 Y = X / X(2);
  c.center_z = Y(1) / kSqrt2;
  c.center_t = Y(0).imag();
  c.r2 = Y(0).real() + std::norm(c.center_z);
  c.vertical = false;
  return c;
}

HeisMap build_normalization(NormalizationKind kind, const RepInstance& R) {
  HeisMap B;
  B.kind = kind;
  Mat3 M = standard_frame(R);
  double res = isometry_residual(M);
  if (kind == NormalizationKind::N2_SwapSymmetric) {
    HeisPoint p0 = heis_chart(Vec3(M * R.p[0]));
    M = heis_rotation(-std::arg(p0.z)) * M;
    M = heis_dilation(1.0 / std::abs(p0.z)) * M;
    HeisPoint q = heis_chart(Vec3(M * R.p[0]));
    res = std::max(res, std::abs(q.z - 1.0) + std::abs(q.t));
    B.u = R.q0_degenerate() ? 0.0 : std::abs(pole_t(M, R.Pr));
  } else {
    if (R.q0_degenerate())
      throw Error(ErrorKind::DegenerateParameter, "Q0 collapses at the parabolic endpoint");
    double tq = std::abs(pole_t(M, R.Pr));
    M = heis_dilation(1.0 / std::sqrt(tq)) * M;
    if (kind == NormalizationKind::N3_AxisUnitRadius) {
      // Loxodromic translation along E0 fixing (0,+-1), chosen to put the
      // center of C1 on C x {0}; then rotate and rescale.
      Mat3 F;
      F << I_, -I_, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0;
      Vec3 coef = F.colPivHouseholderQr().solve(Vec3(M * R.Cp[1]));
      double rho = std::sqrt(std::abs(coef(1) / coef(0)));
      Mat3 D = Mat3::Zero();
      D(0, 0) = rho;
      D(1, 1) = 1.0 / rho;
      D(2, 2) = 1.0;
      M = F * D * F.inverse() * M;
      CircleData cd = circle_from_polar(M * R.Cp[1]);
      M = heis_rotation(-std::arg(cd.center_z)) * M;
      cd = circle_from_polar(M * R.Cp[1]);
      M = heis_dilation(1.0 / std::sqrt(cd.r2)) * M;
      cd = circle_from_polar(M * R.Cp[1]);
      res = std::max(res, std::abs(cd.r2 - 1.0));
      res = std::max(res, std::abs(cd.center_t) + std::abs(cd.center_z.imag()));
      if (cd.center_z.real() <= 0) throw Error(ErrorKind::NormalizationFailure, "C1 center not on the positive axis");
    }
    double t1 = pole_t(M, R.Pr), t2 = pole_t(M, R.Pmr);
    B.u = 0.5 * (std::abs(t1) + std::abs(t2));
    res = std::max(res, std::abs(t1 + t2) / std::max(1.0, B.u));
    if (kind == NormalizationKind::N1_StandardPair) res = std::max(res, std::abs(B.u - 1.0));
  }
  res = std::max(res, isometry_residual(M) / std::max(1.0, M.norm()));
  HeisPoint e0 = heis_chart(Vec3(M * R.qb));
  res = std::max(res, std::abs(e0.z));
  B.M = M;
  B.Minv = M.inverse();
  B.residual = res;
  if (res > 1e-8) throw Error(ErrorKind::NormalizationFailure, fmtres(normalization_name(kind), res), res);
  return B;
}

double contact_form(const HeisPoint& p, const Eigen::Vector3d& d) {
  double x = p.z.real(), y = p.z.imag();
  return d(2) + 2.0 * (x * d(1) - y * d(0));
}

ContactPlane contact_plane(const HeisPoint& p) {
  if (p.inf) throw Error(ErrorKind::UndefinedOperation, "no contact plane at infinity");
  double x = p.z.real(), y = p.z.imag();
  ContactPlane cp;
  cp.p = p;
  cp.span[0] = Eigen::Vector3d(1.0, 0.0, 2.0 * y);
  cp.span[1] = Eigen::Vector3d(0.0, 1.0, -2.0 * x);
  cp.normal = Eigen::Vector3d(-2.0 * y, 2.0 * x, 1.0);
  return cp;
}

double projected_signed_area(const std::vector<HeisPoint>& pts) {
  double a = 0;
  size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    cplx p = pts[i].z, q = pts[(i + 1) % n].z;
    a += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * a;
}

std::vector<HeisPoint> contact_lift(const std::vector<cplx>& zs, double t0) {
  std::vector<HeisPoint> out;
  out.reserve(zs.size());
  double t = t0;
  for (size_t i = 0; i < zs.size(); ++i) {
    if (i > 0) {
      // Exact for straight segments: x dy - y dx = Im(conj(z0) z1).
      t -= 2.0 * (std::conj(zs[i - 1]) * zs[i]).imag();
    }
    out.emplace_back(zs[i], t);
  }
  return out;
}

SliceFrame slice_frame(const HVec3& E0) {
  auto cl = classify(E0);
  if (cl.cls != VectorClass::Positive) throw Error(ErrorKind::InvalidPolar, "slice polar must be positive");
  const Mat3& J = form_matrix(E0.form);
  Vec3 a = J * E0.v.conjugate();
  // Two independent vectors orthogonal to E0, then Gram-Schmidt in the form.
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 1, 3>> svd(a.transpose(), Eigen::ComputeFullV);
  Vec3 v1 = svd.matrixV().col(1), v2 = svd.matrixV().col(2);
  Eigen::Matrix2cd H;
  H << inner(v1, v1, E0.form), inner(v2, v1, E0.form), inner(v1, v2, E0.form), inner(v2, v2, E0.form);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H);
  Vec3 fneg = es.eigenvectors()(0, 0) * v1 + es.eigenvectors()(1, 0) * v2;
  Vec3 fpos = es.eigenvectors()(0, 1) * v1 + es.eigenvectors()(1, 1) * v2;
  double ln = es.eigenvalues()(0), lp = es.eigenvalues()(1);
  if (!(ln < 0 && lp > 0)) throw Error(ErrorKind::DegenerateProjection, "slice is not indefinite");
  SliceFrame F;
  F.E0 = E0.v;
  F.form = E0.form;
  F.fplus = fpos / std::sqrt(lp);
  F.fminus = fneg / std::sqrt(-ln);
  // Fix the phase so the frame is deterministic.
  auto phase = [](Vec3& v) {
    int i = 0;
    for (int j = 1; j < 3; ++j)
      if (std::abs(v(j)) > std::abs(v(i))) i = j;
    v *= std::polar(1.0, -std::arg(v(i)));
  };
  phase(F.fplus);
  phase(F.fminus);
  return F;
}

SlicePoint eta_project(const HVec3& x, const SliceFrame& F) {
  cplx ee = inner(F.E0, F.E0, F.form);
  Vec3 y = x.v - (inner(x.v, F.E0, F.form) / ee) * F.E0;
  cplx al = inner(y, F.fplus, F.form);
  cplx be = -inner(y, F.fminus, F.form);
  if (std::abs(be) < 1e-12 * y.norm()) throw Error(ErrorKind::DegenerateProjection, "projection is degenerate");
  return {al / be};
}

SlicePoint eta_project(const HVec3& x, const HVec3& E0) { return eta_project(x, slice_frame(E0)); }

cplx eta_halfplane(const Vec3& ball, const HeisMap& B) {
  Vec3 X = B.M * ball;
  if (std::abs(X(2)) < 1e-14 * X.norm()) throw Error(ErrorKind::DegenerateProjection, "point at the pole");
  return X(0) / X(2);
}

double hyperbolic_distance_disk(cplx w1, cplx w2) {
  double num = std::abs(w1 - w2), den = std::abs(1.0 - std::conj(w1) * w2);
  double q = std::min(num / den, 1.0 - 1e-16);
  return 2.0 * std::atanh(q);
}

}  // namespace crgeo
