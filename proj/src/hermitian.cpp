#include "crgeo/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>

namespace crgeo {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::FormMismatch: return "form-mismatch";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::InvalidPolar: return "invalid-polar";
    case ErrorKind::DegenerateSpan: return "degenerate-span";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::UndefinedOperation: return "undefined-operation";
    case ErrorKind::DegenerateParameter: return "degenerate-parameter";
    case ErrorKind::NormalizationFailure: return "normalization-failure";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::RepresentationDegenerate: return "representation-degenerate";
    case ErrorKind::SingularX: return "singular-x";
    case ErrorKind::RealBranch: return "real-branch";
    case ErrorKind::Labeling: return "labeling";
    case ErrorKind::Construction: return "construction";
    case ErrorKind::IdentityViolation: return "identity-violation";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Linkage: return "linkage";
    case ErrorKind::Genericity: return "genericity";
    case ErrorKind::SamplingResolution: return "sampling-resolution";
    case ErrorKind::DegenerateProjection: return "degenerate-projection";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

HVec3 HVec3::normalized() const {
  for (int i = 2; i >= 0; --i) {
    if (std::abs(v(i)) > 1e-300) return HVec3(Vec3(v / v(i)), form);
  }
  return *this;
}

const Mat3& form_matrix(Form f) {
  static const Mat3 ball = [] {
    Mat3 m = Mat3::Zero();
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 2) = -1;
    return m;
  }();
  static const Mat3 siegel = [] {
    Mat3 m = Mat3::Zero();
    m(0, 2) = 1;
    m(1, 1) = 1;
    m(2, 0) = 1;
    return m;
  }();
  return f == Form::Ball ? ball : siegel;
}

cplx inner(const Vec3& u, const Vec3& v, Form f) {
  if (f == Form::Ball) return u(0) * std::conj(v(0)) + u(1) * std::conj(v(1)) - u(2) * std::conj(v(2));
  return u(0) * std::conj(v(2)) + u(1) * std::conj(v(1)) + u(2) * std::conj(v(0));
}

cplx herm_inner(const HVec3& u, const HVec3& v) {
  if (u.form != v.form) throw Error(ErrorKind::FormMismatch, "inner product of vectors under different forms");
  return inner(u.v, v.v, u.form);
}

Classification classify(const HVec3& x, double rel_tol) {
  double n2 = x.v.squaredNorm();
  if (n2 == 0.0) throw Error(ErrorKind::DegenerateInput, "cannot classify the zero vector");
  double val = inner(x.v, x.v, x.form).real();
  double tol = rel_tol * n2;
  VectorClass c = VectorClass::Null;
  if (val > tol) c = VectorClass::Positive;
  else if (val < -tol) c = VectorClass::Negative;
  return {c, val, tol};
}

const char* class_name(VectorClass c) {
  switch (c) {
    case VectorClass::Negative: return "negative";
    case VectorClass::Null: return "null";
    case VectorClass::Positive: return "positive";
  }
  return "?";
}

HVec3 IsometryMatrix::operator()(const HVec3& x) const {
  if (x.form != form) throw Error(ErrorKind::FormMismatch, "isometry applied to vector under a different form");
  return HVec3(Vec3(m * x.v), form);
}

IsometryMatrix IsometryMatrix::operator*(const IsometryMatrix& o) const {
  if (o.form != form) throw Error(ErrorKind::FormMismatch, "product of isometries under different forms");
  return IsometryMatrix(Mat3(m * o.m), form);
}

double IsometryMatrix::form_residual() const {
  const Mat3& J = form_matrix(form);
  return (m.adjoint() * J * m - J).cwiseAbs().maxCoeff();
}

Mat3 c_reflection_matrix(const Vec3& C, Form f) {
  cplx cc = inner(C, C, f);
  Mat3 M;
  for (int j = 0; j < 3; ++j) {
    Vec3 U = Vec3::Zero();
    U(j) = 1;
    M.col(j) = -U + (2.0 * inner(U, C, f) / cc) * C;
  }
  return M;
}

IsometryMatrix c_reflection(const HVec3& C) {
  auto cl = classify(C);
  if (cl.cls != VectorClass::Positive)
    throw Error(ErrorKind::InvalidPolar, std::string("C-reflection needs a positive polar, got ") + class_name(cl.cls));
  return IsometryMatrix(c_reflection_matrix(C.v, C.form), C.form);
}

HVec3 polar_of_span(const HVec3& p, const HVec3& q) {
  if (p.form != q.form) throw Error(ErrorKind::FormMismatch, "span of vectors under different forms");
  const Mat3& J = form_matrix(p.form);
  // <X,p> = X . (J conj p) as a bilinear dot product.
  Vec3 a = J * p.v.conjugate();
  Vec3 b = J * q.v.conjugate();
  // Eigen's cross() conjugates complex results; the polar needs the bilinear one.
  Vec3 x(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
  double scale = a.norm() * b.norm();
  if (scale == 0.0 || x.norm() < 1e-12 * scale)
    throw Error(ErrorKind::DegenerateSpan, "points are projectively equal");
  return HVec3(x, p.form).normalized();
}

std::vector<EigenPair> eigensystem(const IsometryMatrix& M, double tol) {
  if (!M.m.allFinite()) throw Error(ErrorKind::NumericFailure, "non-finite matrix entries");
  Eigen::ComplexEigenSolver<Mat3> es(M.m, true);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericFailure, "eigen-solver did not converge");
  std::vector<EigenPair> out;
  double mnorm = std::max(1.0, M.m.norm());
  for (int i = 0; i < 3; ++i) {
    Vec3 v = es.eigenvectors().col(i);
    cplx lam = es.eigenvalues()(i);
    double res = (M.m * v - lam * v).norm() / std::max(v.norm(), 1e-300);
    if (res > tol * mnorm) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "eigenpair residual %.3e", res);
      throw Error(ErrorKind::NumericFailure, buf, res);
    }
    out.push_back({lam, HVec3(v, M.form), res});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenPair& a, const EigenPair& b) { return std::abs(a.value) > std::abs(b.value); });
  return out;
}

}  // namespace crgeo
