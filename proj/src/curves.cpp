#include "crgeo/curves.hpp"

#include <cmath>
#include <limits>

namespace crgeo {

std::vector<Vec3> CCircle::sample(int n, double offset) const {
  SliceFrame F = slice_frame(HVec3(polar, form));
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double phi = kTwoPi * (k + offset) / n;
    out.push_back(F.fminus + std::polar(1.0, phi) * F.fplus);
  }
  return out;
}

Vec3 CCircle::point(double phi) const {
  SliceFrame F = slice_frame(HVec3(polar, form));
  return F.fminus + std::polar(1.0, phi) * F.fplus;
}

AspectValue aspect_invariant(const HVec3& E, const HVec3& C) {
  if (classify(E).cls != VectorClass::Positive || classify(C).cls != VectorClass::Positive)
    throw Error(ErrorKind::InvalidPolar, "aspect needs two positive polars");
  cplx ce = herm_inner(C, E);
  double num = std::abs(herm_inner(E, E)) * std::abs(herm_inner(C, C));
  if (std::norm(ce) <= 1e-24 * num) return {std::numeric_limits<double>::infinity(), true};
  return {num / std::norm(ce), false};
}

bool linked(const CCircle& C, const CCircle& E) {
  auto a = aspect_invariant(HVec3(E.polar, E.form), HVec3(C.polar, C.form));
  if (a.perpendicular) return false;
  // A circle and itself (or projectively equal polars) is degenerate, not linked.
  double par = std::abs(herm_inner(HVec3(C.polar, C.form), HVec3(E.polar, E.form)));
  double nn = std::sqrt(std::abs(inner(C.polar, C.polar, C.form)) * std::abs(inner(E.polar, E.polar, E.form)));
  if (std::abs(par - nn) < 1e-12 * nn) return false;
  return a.value > 1.0;
}

double f_graph(double A, double t) {
  if (!(A > 1.0)) throw Error(ErrorKind::DomainError, "f_A needs A > 1");
  double s = std::sin(t), c = std::cos(t);
  return s * (c + std::sqrt(A - s * s));
}

double f_graph_dd(double A, double t) {
  if (!(A > 1.0)) throw Error(ErrorKind::DomainError, "f_A needs A > 1");
  // f = sin t cos t + sin t W, W = sqrt(A - sin^2 t).
  double s = std::sin(t), c = std::cos(t);
  double W = std::sqrt(A - s * s);
  double Wp = -s * c / W;
  double Wpp = -(c * c - s * s) / W - (s * c) * (s * c) / (W * W * W);
  return -4.0 * s * c - s * W + 2.0 * c * Wp + s * Wpp;
}

CircleFit fit_circle(const std::vector<cplx>& pts) {
  // Algebraic fit: x^2 + y^2 + D x + E y + F = 0.
  Eigen::MatrixXd M(pts.size(), 3);
  Eigen::VectorXd rhs(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    double x = pts[i].real(), y = pts[i].imag();
    M(i, 0) = x;
    M(i, 1) = y;
    M(i, 2) = 1.0;
    rhs(i) = -(x * x + y * y);
  }
  Eigen::Vector3d sol = M.colPivHouseholderQr().solve(rhs);
  cplx c(-sol(0) / 2, -sol(1) / 2);
  double r = std::sqrt(std::max(0.0, std::norm(c) - sol(2)));
  double res = 0;
  for (const auto& p : pts) res = std::max(res, std::abs(std::abs(p - c) - r));
  return {c, r, res};
}

CircleSample ccircle_sample(const CCircle& C, const HeisMap& B, int n) {
  CircleSample out;
  out.data = C.data(B);
  out.vertical = out.data.vertical;
  std::vector<cplx> zs;
  for (const Vec3& v : C.sample(n)) {
    HeisPoint p = B.apply(v);
    if (p.inf) continue;
    out.points.push_back(p);
    zs.push_back(p.z);
  }
  if (out.vertical) return out;
  out.fit = fit_circle(zs);
  double x0 = out.data.center_z.real(), y0 = out.data.center_z.imag();
  for (const auto& p : out.points) {
    double tp = out.data.center_t - 2.0 * (x0 * p.z.imag() - y0 * p.z.real());
    out.contact_residual = std::max(out.contact_residual, std::abs(p.t - tp));
  }
  return out;
}

DeltaValue delta_invariant(const HVec3& V1, const HVec3& V2, const HVec3& V3) {
  cplx a = herm_inner(V1, V2), b = herm_inner(V2, V3), c = herm_inner(V3, V1);
  double scale = V1.v.norm() * V2.v.norm() * V3.v.norm();
  if (std::abs(a) < 1e-14 * scale || std::abs(b) < 1e-14 * scale || std::abs(c) < 1e-14 * scale)
    throw Error(ErrorKind::Degenerate, "delta needs nonzero pairwise products");
  cplx tau = a * b * c;
  if (std::abs(tau.real()) <= 1e-15 * std::abs(tau)) return {std::numeric_limits<double>::infinity(), true};
  return {std::abs(tau.imag()) / std::abs(tau.real()), false};
}

cplx cross_ratio(const XC& z1, const XC& z2, const XC& z3, const XC& z4) {
  const XC* z[4] = {&z1, &z2, &z3, &z4};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      bool same = (z[i]->inf && z[j]->inf) || (!z[i]->inf && !z[j]->inf && std::abs(z[i]->v - z[j]->v) < 1e-14);
      if (same) throw Error(ErrorKind::Degenerate, "cross ratio of coincident points");
    }
  // (z1-z3)(z2-z4) / ((z1-z2)(z3-z4)); drop the factors containing infinity.
  auto diff = [](const XC& a, const XC& b) -> std::pair<cplx, int> {
    if (a.inf) return {1.0, 1};
    if (b.inf) return {-1.0, 1};
    return {a.v - b.v, 0};
  };
  auto n1 = diff(z1, z3), n2 = diff(z2, z4), d1 = diff(z1, z2), d2 = diff(z3, z4);
  return (n1.first * n2.first) / (d1.first * d2.first);
}

SpinalSphere SpinalSphere::from_poles(const Vec3& p1, const Vec3& p2) {
  cplx k = inner(p1, p2, Form::Siegel);
  if (std::abs(k) < 1e-14 * p1.norm() * p2.norm()) throw Error(ErrorKind::Degenerate, "poles coincide");
  const cplx I_(0.0, 1.0);
  Vec3 q2 = p2 * std::conj(2.0 * I_ / k);  // <p1, q2> = 2i
  HVec3 Y = polar_of_span(HVec3(p1, Form::Siegel), HVec3(p2, Form::Siegel));
  Vec3 y = Y.v / std::sqrt(inner(Y.v, Y.v, Form::Siegel).real());
  Mat3 src, dst;
  src << I_, -I_, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0;
  dst.col(0) = p1;
  dst.col(1) = q2;
  dst.col(2) = y;
  SpinalSphere S;
  S.pole1 = p1;
  S.pole2 = p2;
  S.g = dst * src.inverse();
  return S;
}

std::vector<Vec3> SpinalSphere::sample(int nlat, int nlon) const {
  std::vector<Vec3> out;
  for (int i = 1; i < nlat; ++i) {
    double psi = -kPi / 2 + kPi * i / nlat;
    double t = std::sin(psi), r = std::sqrt(std::cos(psi));
    for (int j = 0; j < nlon; ++j) {
      HeisPoint p(std::polar(r, kTwoPi * j / nlon), t);
      out.push_back(g * heis_lift(p));
    }
  }
  return out;
}

Vec3 SpinalSphere::spine_polar() const {
  return polar_of_span(HVec3(pole1, Form::Siegel), HVec3(pole2, Form::Siegel)).v;
}

const char* arc_kind_name(ArcKind k) {
  switch (k) {
    case ArcKind::HarmonicFiber: return "harmonic-fiber";
    case ArcKind::ConeArc: return "cone-arc";
    case ArcKind::Axis: return "axis";
    case ArcKind::Affiliate: return "affiliate";
    case ArcKind::Boundary: return "boundary";
  }
  return "?";
}

double contact_tangency_residual(const std::vector<HeisPoint>& pts) {
  double worst = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].inf || pts[i - 1].inf) continue;
    cplx zm = 0.5 * (pts[i].z + pts[i - 1].z);
    cplx dz = pts[i].z - pts[i - 1].z;
    double dt = pts[i].t - pts[i - 1].t;
    Eigen::Vector3d d(dz.real(), dz.imag(), dt);
    double len = d.norm();
    if (len == 0) continue;
    worst = std::max(worst, std::abs(contact_form(HeisPoint(zm, 0.0), d)) / len);
  }
  return worst;
}

}  // namespace crgeo
