#include "crgeo/elevation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crgeo {

namespace {

const cplx I_(0.0, 1.0);

double wrap_pi(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - kPi;
}

double unwrap_near(double c, double ref) { return c + kTwoPi * std::round((ref - c) / kTwoPi); }

Vec3 lift(const HeisPoint& p) { return heis_lift(p); }

int count_sign_changes(const std::vector<double>& d, bool cyclic) {
  std::vector<int> s;
  for (double v : d)
    if (v != 0) s.push_back(v > 0 ? 1 : -1);
  if (s.size() < 2) return 0;
  int n = 0;
  for (size_t k = 1; k < s.size(); ++k) n += s[k] != s[k - 1];
  if (cyclic) n += s.back() != s.front();
  return n;
}

}  // namespace

ElevationPoint::ElevationPoint(double th, double hh) : theta(th), h(hh) {
  winding = static_cast<int>(std::floor(th / kTwoPi));
}

double ElevationPoint::canonical() const {
  double c = std::fmod(theta, kTwoPi);
  if (c < 0) c += kTwoPi;
  if (c >= kTwoPi) c -= kTwoPi;
  return c;
}

double theta_distance(double a, double b) { return std::abs(wrap_pi(a - b)); }

double ElevationCurve::h_min() const { return pts[argmin_h()].h; }
double ElevationCurve::h_max() const { return pts[argmax_h()].h; }
size_t ElevationCurve::argmin_h() const {
  if (pts.empty()) throw Error(ErrorKind::Degenerate, "empty elevation curve");
  return std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.h < b.h; }) - pts.begin();
}
size_t ElevationCurve::argmax_h() const {
  if (pts.empty()) throw Error(ErrorKind::Degenerate, "empty elevation curve");
  return std::max_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.h < b.h; }) - pts.begin();
}

Elevation::Elevation(const RepInstance& rep) : rep_(rep) {
  B_ = build_normalization(NormalizationKind::N3_AxisUnitRadius, rep_);
  B2_ = build_normalization(NormalizationKind::N2_SwapSymmetric, rep_);
  for (int j = 0; j < 3; ++j) Is_[j] = B_.conj(rep_.I[j]);
  double u = B_.u;
  F_ << I_ * u, -I_ * u, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0;
  Finv_ = F_.inverse();
  swap_ = B_.M * B2_.Minv;
  swap_inv_ = B2_.M * B_.Minv;
  c_ = circle_from_polar(B_.M * rep_.Cp[1]).center_z.real();
}

Vec3 Elevation::swap_symmetry(const Vec3& X) const { return swap_ * Vec3((swap_inv_ * X).conjugate()); }

ElevationPoint Elevation::psi_siegel(const Vec3& X) const {
  double scale = X.norm();
  if (!(scale > 0) || std::abs(X(2)) <= 1e-13 * scale) throw Error(ErrorKind::Pole, "psi undefined on E0 (infinity)");
  cplx w = X(0) / X(2);
  cplx z = X(1) / (kSqrt2 * X(2));
  if (std::abs(z) <= 1e-12 * (1.0 + std::sqrt(std::abs(w)))) throw Error(ErrorKind::Pole, "psi undefined on E0");
  double u = B_.u;
  double th = std::arg(z) - 0.5 * std::arg(w * w + u * u);
  double h = std::log(std::abs(w - I_ * u) / std::abs(w + I_ * u));
  ElevationPoint p(th, h);
  p.theta = p.canonical();
  p.winding = 0;
  return p;
}

ElevationPoint Elevation::psi(const HVec3& x) const {
  Vec3 X = x.form == Form::Ball ? to_siegel(x.v) : x.v;
  return psi_siegel(X);
}

Mat3 Elevation::fiber_element(const ElevationPoint& p) const {
  double rho = std::exp(-p.h / 2);
  Mat3 D = Mat3::Zero();
  D(0, 0) = rho;
  D(1, 1) = 1.0 / rho;
  D(2, 2) = 1.0;
  return heis_rotation(p.theta) * F_ * D * Finv_;
}

FiberArc Elevation::fiber_through(const Vec3& X, int n) const {
  FiberArc out;
  out.psi = psi_siegel(X);
  Mat3 g = fiber_element(out.psi);
  Vec3 q = g.inverse() * X;
  q /= q(2);
  cplx sy = q(1) / kSqrt2;
  if (std::abs(sy.imag()) > 1e-7 * (1 + std::abs(sy)) || sy.real() <= 0)
    throw Error(ErrorKind::NumericFailure, "fiber base point off the positive ray", std::abs(sy.imag()));
  out.base = sy.real();
  out.lower = g * Vec3(0.0, 0.0, 1.0);
  out.upper = g * Vec3(1.0, 0.0, 0.0);
  out.t_lower = heis_chart(out.lower).t;
  out.t_upper = heis_chart(out.upper).t;
  out.pts.reserve(n);
  for (int k = 1; k <= n; ++k) {
    double phi = 0.5 * kPi * k / (n + 1);
    double sn = std::sin(phi), cs = std::cos(phi);
    out.pts.push_back(g * Vec3(-sn * sn, kSqrt2 * sn * cs, cs * cs));
  }
  return out;
}

std::vector<Vec3> Elevation::cone_arc(const Vec3& X, int n) const {
  ElevationPoint p = psi_siegel(X);
  Mat3 g = fiber_element(p);
  Vec3 q = g.inverse() * X;
  q /= q(2);
  cplx sy = q(1) / kSqrt2;
  if (std::abs(sy.imag()) > 1e-7 * (1 + std::abs(sy)) || sy.real() <= 0)
    throw Error(ErrorKind::NumericFailure, "cone arc base point off the positive ray", std::abs(sy.imag()));
  double s = sy.real();
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double tau = n == 1 ? 1.0 : 1.0 - double(k) / (n - 1);
    out.push_back(g * Vec3(-s * s, kSqrt2 * s * tau, tau * tau));
  }
  // Keep the first sample exactly on the source curve.
  out.front() = X / X(2);
  return out;
}

std::function<Vec3(double)> Elevation::fiber_circle(const Vec3& X) const {
  Mat3 g = fiber_element(psi_siegel(X));
  return [g](double phi) {
    double sn = std::sin(phi), cs = std::cos(phi);
    return Vec3(g * Vec3(-sn * sn, kSqrt2 * sn * cs, cs * cs));
  };
}

std::function<Vec3(double)> Elevation::circle_param(const Vec3& ball_polar) const {
  SliceFrame F = slice_frame(HVec3(ball_polar, Form::Ball));
  Vec3 fm = B_.M * F.fminus, fp = B_.M * F.fplus;
  return [fm, fp](double phi) { return Vec3(fm + std::polar(1.0, phi) * fp); };
}

double Elevation::circle_phase(const Vec3& ball_polar, const Vec3& siegel_pt) const {
  SliceFrame F = slice_frame(HVec3(ball_polar, Form::Ball));
  Vec3 X = B_.Minv * siegel_pt;
  cplx a = inner(X, F.fplus, Form::Ball), b = inner(X, F.fminus, Form::Ball);
  return std::arg(-a / b);
}

std::vector<Vec3> Elevation::circle_samples(const Vec3& ball_polar, int n, double phi0) const {
  auto f = circle_param(ball_polar);
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(f(phi0 + kTwoPi * k / n));
  return out;
}

ConeDisk Elevation::cone_disk(int i, int j, int n_arcs, int n_pts, double phi0) const {
  if (i < 1 || i > 2 || j < 0 || j > 2 || i == j) throw Error(ErrorKind::InvalidArgument, "cone disk index pair");
  if (j != 0 && j != 3 - i) throw Error(ErrorKind::InvalidArgument, "cone disk index pair");
  if (!linked(CCircle(rep_.Cp[i]), CCircle(rep_.Ep[j]))) throw Error(ErrorKind::Linkage, "C_i does not link E_j");
  ConeDisk D;
  D.i = i;
  D.j = j;
  auto f = circle_param(rep_.Cp[i]);
  for (int k = 0; k < n_arcs; ++k) {
    double phi = phi0 + kTwoPi * k / n_arcs;
    Vec3 X = f(phi);
    X /= X(2);
    ElevationPoint p = psi_siegel(X);
    Mat3 g = fiber_element(p);
    D.fold_t.push_back(heis_chart(Vec3(g * Vec3(0.0, 0.0, 1.0))).t);
    std::vector<Vec3> arc = cone_arc(X, n_pts);
    if (j != 0)
      for (auto& v : arc) v = Is_[i] * v;
    D.phis.push_back(phi);
    D.base.push_back(X);
    D.ends.push_back(arc.back());
    D.arcs.push_back(std::move(arc));
  }
  std::vector<double> dt;
  for (size_t k = 0; k < D.fold_t.size(); ++k) dt.push_back(D.fold_t[(k + 1) % D.fold_t.size()] - D.fold_t[k]);
  D.fold_turns = count_sign_changes(dt, true);
  return D;
}

AxisData Elevation::r_axis(int i, int n) const {
  if (i != 1 && i != 2) throw Error(ErrorKind::InvalidArgument, "axis index");
  if (!(c_ > 1e-9)) throw Error(ErrorKind::Genericity, "Sigma_1 is a spinal sphere: C1 centered on E0");
  AxisData A;
  A.i = i;
  A.on_circle[0] = lift(HeisPoint(c_ + 1.0, 0.0));
  A.on_circle[1] = lift(HeisPoint(c_ - 1.0, 0.0));
  for (int k = 0; k < n; ++k) {
    double phi = kPi * k / n;
    double sn = std::sin(phi), cs = std::cos(phi);
    A.samples.push_back(Vec3(-sn * sn, kSqrt2 * sn * cs, cs * cs));
  }
  if (i == 2) {
    for (auto& v : A.on_circle) v = swap_symmetry(v);
    for (auto& v : A.samples) v = swap_symmetry(v);
  }
  for (int k = 0; k < 2; ++k) {
    A.on_circle[k] /= A.on_circle[k](2);
    A.psi[k] = psi_siegel(A.on_circle[k]);
  }
  return A;
}

std::vector<int> cusp_candidates(const std::vector<ElevationPoint>& pts, bool closed) {
  std::vector<int> out;
  size_t n = pts.size();
  if (n < 3) return out;
  double tmin = 1e300, tmax = -1e300, hmin = 1e300, hmax = -1e300;
  for (auto& p : pts) {
    tmin = std::min(tmin, p.theta);
    tmax = std::max(tmax, p.theta);
    hmin = std::min(hmin, p.h);
    hmax = std::max(hmax, p.h);
  }
  double sx = std::max(tmax - tmin, 1e-300), sy = std::max(hmax - hmin, 1e-300);
  size_t nseg = closed ? n : n - 1;
  std::vector<Eigen::Vector2d> d(nseg);
  for (size_t k = 0; k < nseg; ++k) {
    const auto& a = pts[k];
    const auto& b = pts[(k + 1) % n];
    double dth = closed && k + 1 == n ? wrap_pi(b.theta - a.theta) : b.theta - a.theta;
    d[k] = Eigen::Vector2d(dth / sx, (b.h - a.h) / sy);
  }
  std::vector<char> mark(n, 0);
  for (size_t k = 0; k < nseg; ++k) {
    for (size_t off = 1; off <= 2; ++off) {
      size_t k2 = k + off;
      if (!closed && k2 >= nseg) continue;
      k2 %= nseg;
      if (d[k].squaredNorm() == 0 || d[k2].squaredNorm() == 0) continue;
      if (d[k].dot(d[k2]) < 0) mark[(k + 1) % n] = 1;
    }
  }
  // Merge marks within 3 samples.
  std::vector<int> idx;
  for (size_t k = 0; k < n; ++k)
    if (mark[k]) idx.push_back(static_cast<int>(k));
  if (idx.empty()) return out;
  std::vector<std::vector<int>> groups;
  for (int k : idx) {
    if (!groups.empty() && k - groups.back().back() <= 3)
      groups.back().push_back(k);
    else
      groups.push_back({k});
  }
  if (closed && groups.size() > 1 && groups.front().front() + static_cast<int>(n) - groups.back().back() <= 3) {
    for (int k : groups.front()) groups.back().push_back(k + static_cast<int>(n));
    groups.erase(groups.begin());
  }
  for (auto& g : groups) out.push_back(g[g.size() / 2] % static_cast<int>(n));
  std::sort(out.begin(), out.end());
  return out;
}

ElevationCurve Elevation::image(const std::vector<Vec3>& siegel, bool closed, const std::string& source) const {
  ElevationCurve C;
  C.source = source;
  C.closed = closed;
  C.pts.reserve(siegel.size());
  for (size_t k = 0; k < siegel.size(); ++k) {
    ElevationPoint p = psi_siegel(siegel[k]);
    if (k > 0) p.theta = unwrap_near(p.theta, C.pts.back().theta);
    p.winding = static_cast<int>(std::floor(p.theta / kTwoPi));
    C.pts.push_back(p);
    C.params.push_back(static_cast<double>(k));
  }
  size_t n = C.pts.size();
  if (n < 2) return C;
  std::vector<double> dth, dh;
  for (size_t k = 0; k + 1 < n; ++k) {
    dth.push_back(C.pts[k + 1].theta - C.pts[k].theta);
    dh.push_back(C.pts[k + 1].h - C.pts[k].h);
  }
  if (closed) {
    double close = unwrap_near(C.pts[0].theta, C.pts.back().theta) - C.pts.back().theta;
    dth.push_back(close);
    dh.push_back(C.pts[0].h - C.pts.back().h);
    double total = C.pts.back().theta - C.pts[0].theta + close;
    C.winding = static_cast<int>(std::lround(total / kTwoPi));
  }
  bool inc = std::all_of(dth.begin(), dth.end(), [](double v) { return v > 0; });
  bool dec = std::all_of(dth.begin(), dth.end(), [](double v) { return v < 0; });
  C.graph = inc || dec;
  C.extrema = count_sign_changes(dh, closed);
  return C;
}

ElevationCurve Elevation::image_param(const std::function<Vec3(double)>& f, double a, double b, int n, bool closed,
                                      const std::string& source, bool detect_cusps) const {
  std::vector<Vec3> pts;
  std::vector<double> params;
  for (int k = 0; k < n; ++k) {
    double t = closed ? a + (b - a) * k / n : a + (b - a) * k / (n - 1);
    params.push_back(t);
    pts.push_back(f(t));
  }
  ElevationCurve C = image(pts, closed, source);
  C.params = params;
  if (!detect_cusps) return C;
  double tmin = 1e300, tmax = -1e300, hmin = 1e300, hmax = -1e300;
  for (auto& p : C.pts) {
    tmin = std::min(tmin, p.theta);
    tmax = std::max(tmax, p.theta);
    hmin = std::min(hmin, p.h);
    hmax = std::max(hmax, p.h);
  }
  double step = (b - a) / (closed ? n : n - 1);
  for (int k : cusp_candidates(C.pts, closed)) {
    // Refine to a local step of 1e-5 and confirm the reversal survives.
    double lo = params[k] - 3 * step, hi = params[k] + 3 * step;
    if (!closed) {
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    int m = std::max(7, static_cast<int>(std::ceil((hi - lo) / 1e-5)));
    std::vector<ElevationPoint> loc;
    loc.reserve(m + 1);
    for (int q = 0; q <= m; ++q) {
      ElevationPoint p = psi_siegel(f(lo + (hi - lo) * q / m));
      if (!loc.empty()) p.theta = unwrap_near(p.theta, loc.back().theta);
      loc.push_back(p);
    }
    const std::vector<ElevationPoint>& core = loc;
    double sx = std::max(tmax - tmin, 1e-300), sy = std::max(hmax - hmin, 1e-300);
    int found = -1;
    for (size_t q = 0; q + 2 < core.size() && found < 0; ++q) {
      Eigen::Vector2d d1((core[q + 1].theta - core[q].theta) / sx, (core[q + 1].h - core[q].h) / sy);
      for (size_t off = 1; off <= 2 && q + 1 + off < core.size(); ++off) {
        size_t r = q + off;
        Eigen::Vector2d d2((core[r + 1].theta - core[r].theta) / sx, (core[r + 1].h - core[r].h) / sy);
        if (d1.squaredNorm() > 0 && d2.squaredNorm() > 0 && d1.dot(d2) < 0) {
          found = static_cast<int>(q + 1);
          break;
        }
      }
    }
    if (found < 0) continue;
    double tc = lo + (hi - lo) * found / m;
    C.cusps.push_back(k);
    C.cusp_params.push_back(tc);
  }
  return C;
}

SlopeData Elevation::slope_at(const Vec3& X) const {
  HeisPoint p = heis_chart(X);
  if (p.inf || std::abs(p.z) < 1e-8) throw Error(ErrorKind::NumericFailure, "slope step collapses near E0");
  double x = p.z.real(), y = p.z.imag(), u = B_.u;
  double eps = 1e-6 * (1.0 + std::abs(p.z) + std::sqrt(std::abs(p.t)));
  if (eps > 0.25 * std::abs(p.z)) eps = 0.25 * std::abs(p.z);
  Eigen::Vector3d v[2] = {Eigen::Vector3d(1.0, 0.0, 2.0 * y), Eigen::Vector3d(0.0, 1.0, -2.0 * x)};
  Eigen::Vector2d d[2];
  for (int j = 0; j < 2; ++j) {
    auto at = [&](double sgn) {
      HeisPoint q(p.z + sgn * eps * cplx(v[j](0), v[j](1)), p.t + sgn * eps * v[j](2));
      return psi_siegel(lift(q));
    };
    ElevationPoint a = at(1.0), b = at(-1.0);
    d[j] = Eigen::Vector2d(wrap_pi(a.theta - b.theta), a.h - b.h) / (2 * eps);
  }
  const Eigen::Vector2d& w = d[0].norm() >= d[1].norm() ? d[0] : d[1];
  SlopeData S;
  S.sigma = w(0) != 0 ? w(1) / w(0) : std::copysign(std::numeric_limits<double>::infinity(), w(1));
  S.infinite = !(std::abs(S.sigma) < 1e6);
  S.s0_level = (std::pow(std::norm(p.z), 2) + p.t * p.t) / (u * u);
  S.remote = S.s0_level < 1.0;
  return S;
}

std::vector<Vec3> Elevation::q0_samples(int n) const {
  std::vector<Vec3> out;
  for (int k = 0; k < n; ++k) {
    double sg = n == 1 ? 1.0 : -1.0 + 2.0 * k / (n - 1);
    out.push_back(Vec3(I_ * B_.u, 0.0, sg));
  }
  return out;
}

Predicates Elevation::predicates(int n_curve, int n_arcs, int n_pts) const {
  Predicates P;
  ElevationCurve c1 = image(circle_samples(rep_.Cp[1], n_curve), true, "C1");
  ElevationCurve e2 = image(circle_samples(rep_.Ep[2], n_curve), true, "E2");
  P.theta_min_C1 = c1.pts[c1.argmin_h()].canonical();
  P.theta_min_E2 = e2.pts[e2.argmin_h()].canonical();
  double a = std::sin(P.theta_min_C1), b = std::sin(P.theta_min_E2);
  P.interlaced = a * b < 0;
  P.interlace_margin = (P.interlaced ? 1.0 : -1.0) * std::min(std::abs(a), std::abs(b));

  CircleData cd = circle_from_polar(B_.M * rep_.Cp[1]);
  P.aspect = cd.r2 / std::norm(cd.center_z);
  P.u = B_.u;
  P.r2 = cd.r2;
  P.center_im = cd.center_z.imag();
  P.center_t = cd.center_t;
  P.criteria_ok = P.aspect >= 9.0 && P.u >= 4.0 && std::abs(P.r2 - 1.0) < 1e-9 && std::abs(P.center_im) < 1e-9 &&
                  std::abs(P.center_t) < 1e-9;

  ConeDisk D = cone_disk(1, 2, n_arcs, n_pts);
  P.s0_level_max = 0;
  P.slope_min = std::numeric_limits<double>::infinity();
  for (const auto& arc : D.arcs)
    for (const auto& X : arc) {
      SlopeData S = slope_at(X);
      P.s0_level_max = std::max(P.s0_level_max, S.s0_level);
      P.slope_min = std::min(P.slope_min, S.sigma);
    }
  P.remote = P.criteria_ok && P.s0_level_max < 1.0 && P.slope_min > 0;

  // Half-plane picture: Theta0 = imaginary axis, Theta1 = |eta| = u,
  // Theta2 = circle through eta(dQ2) orthogonal to eta(E2).
  std::vector<cplx> eta_e2;
  for (const auto& X : circle_samples(rep_.Ep[2], 512)) eta_e2.push_back(X(0) / X(2));
  CircleFit k = fit_circle(eta_e2);
  Vec3 q1 = Is_[1] * Vec3(I_ * B_.u, 0.0, 1.0), q2 = Is_[1] * Vec3(-I_ * B_.u, 0.0, 1.0);
  cplx P1 = q1(0) / q1(2), P2 = q2(0) / q2(2);
  cplx mid = 0.5 * (P1 + P2), nrm = I_ * (P2 - P1) / std::abs(P2 - P1);
  auto dotc = [](cplx p, cplx q) { return (std::conj(p) * q).real(); };
  double R2 = k.radius * k.radius;
  double sp = (R2 + std::norm(mid - P1) - std::norm(mid - k.center)) / (2.0 * dotc(nrm, mid - k.center));
  cplx m = mid + sp * nrm;
  double rho = std::abs(m - P1);
  P.theta2_offset = std::min(std::abs(std::abs(I_ * B_.u - m) - rho), std::abs(std::abs(-I_ * B_.u - m) - rho)) / B_.u;

  ElevationPoint pe1 = psi_siegel(q1), pe2 = psi_siegel(q2);
  auto dist = [](const ElevationPoint& x, const ElevationPoint& y) {
    return std::hypot(theta_distance(x.theta, y.theta), x.h - y.h);
  };
  const ElevationPoint& mx = e2.pts[e2.argmax_h()];
  const ElevationPoint& mn = e2.pts[e2.argmin_h()];
  P.extremum_gap = std::min({dist(mx, pe1), dist(mx, pe2), dist(mn, pe1), dist(mn, pe2)});
  P.asymmetric = P.theta2_offset > 1e-6 && P.extremum_gap > 1e-6;
  return P;
}

VerticalRadius Elevation::vertical_radius(const std::vector<Vec3>& X) const {
  if (X.empty()) throw Error(ErrorKind::Degenerate, "vertical radius of an empty set");
  double hmin = 1e300, hmax = -1e300, tmin = 1e300, tmax = -1e300;
  double lmin = 1e300, lmax = -1e300, gmin = 1e300, gmax = -1e300;
  double u = B_.u;
  for (const auto& v : X) {
    ElevationPoint p = psi_siegel(v);
    hmin = std::min(hmin, p.h);
    hmax = std::max(hmax, p.h);
    double t = heis_chart(v).t;
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
    double t1 = heis_chart(Vec3(fiber_element(p) * Vec3(0.0, 0.0, 1.0))).t;
    lmin = std::min(lmin, t1);
    lmax = std::max(lmax, t1);
    double g = std::log((u - t1) / (u + t1));
    gmin = std::min(gmin, g);
    gmax = std::max(gmax, g);
  }
  return {0.5 * (hmax - hmin), 0.5 * (tmax - tmin), 0.5 * (lmax - lmin), 0.5 * (gmax - gmin)};
}

const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

double golden_search(const std::function<double(double)>& f, double a, double b, double sign) {
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = sign * f(c), fd = sign * f(d);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = sign * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = sign * f(d);
    }
  }
  return 0.5 * (a + b);
}

VerticalRadius Elevation::vertical_radius(const std::function<Vec3(double)>& f, int n) const {
  if (n < 8) throw Error(ErrorKind::InvalidArgument, "vertical radius needs at least 8 samples");
  const double u = B_.u;
  std::array<std::function<double(double)>, 4> q = {
      [&](double phi) { return psi_siegel(f(phi)).h; },
      [&](double phi) { return heis_chart(f(phi)).t; },
      [&](double phi) { return heis_chart(Vec3(fiber_element(psi_siegel(f(phi))) * Vec3(0.0, 0.0, 1.0))).t; },
      [&](double phi) {
        double t1 = heis_chart(Vec3(fiber_element(psi_siegel(f(phi))) * Vec3(0.0, 0.0, 1.0))).t;
        return std::log((u - t1) / (u + t1));
      }};
  std::array<double, 4> half{};
  const double step = kTwoPi / n;
  for (int j = 0; j < 4; ++j) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = q[j](step * k);
    int kmax = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    int kmin = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    double hi = std::max(v[kmax], q[j](golden_search(q[j], step * (kmax - 1), step * (kmax + 1), -1.0)));
    double lo = std::min(v[kmin], q[j](golden_search(q[j], step * (kmin - 1), step * (kmin + 1), 1.0)));
    half[j] = 0.5 * (hi - lo);
  }
  return {half[0], half[1], half[2], half[3]};
}

}  // namespace crgeo
