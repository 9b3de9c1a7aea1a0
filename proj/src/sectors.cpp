#include "crgeo/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace crgeo {

namespace {

double wrap_pi(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - kPi;
}

double unwrap_near(double c, double ref) { return c + kTwoPi * std::round((ref - c) / kTwoPi); }

double canon(double t) {
  double c = std::fmod(t, kTwoPi);
  if (c < 0) c += kTwoPi;
  return c >= kTwoPi ? c - kTwoPi : c;
}


// Root of f on [a, b] with f(a), f(b) of opposite sign.
double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 100 && b - a > 1e-14 * (1 + std::abs(a)); ++it) {
    double m = 0.5 * (a + b), fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

GraphFunction::GraphFunction(const Elevation& E, std::function<Vec3(double)> f, int n, double phi0,
                             std::string source)
    : E_(&E), f_(std::move(f)) {
  std::vector<Vec3> pts;
  std::vector<double> phis;
  for (int k = 0; k < n; ++k) {
    phis.push_back(phi0 + kTwoPi * k / n);
    pts.push_back(f_(phis.back()));
  }
  curve_ = E.image(pts, true, source);
  curve_.params = phis;
  if (!curve_.graph || std::abs(curve_.winding) != 1)
    throw Error(ErrorKind::Construction, "image of " + source + " is not a graph over theta");
  if (curve_.winding > 0) {
    for (int k = 0; k < n; ++k) {
      th_.push_back(curve_.pts[k].theta);
      ph_.push_back(phis[k]);
    }
    th_.push_back(th_[0] + kTwoPi);
    ph_.push_back(ph_[0] + kTwoPi);
  } else {
    for (int k = n - 1; k >= 0; --k) {
      th_.push_back(curve_.pts[k].theta);
      ph_.push_back(phis[k]);
    }
    th_.push_back(th_[0] + kTwoPi);
    ph_.push_back(ph_[0] - kTwoPi);
  }
  auto hval = [this](double phi) { return E_->psi_siegel(f_(phi)).h; };
  auto refine = [&](size_t k, double sign) {
    double a = phis[(k + n - 1) % n], b = phis[(k + 1) % n];
    if (k == 0) a -= kTwoPi;
    if (k + 1 == static_cast<size_t>(n)) b += kTwoPi;
    double phi = golden_search(hval, a, b, sign);
    ElevationPoint p = E_->psi_siegel(f_(phi));
    return p;
  };
  ElevationPoint pmin = refine(curve_.argmin_h(), 1.0);
  ElevationPoint pmax = refine(curve_.argmax_h(), -1.0);
  theta_min_ = pmin.theta;
  h_min_ = pmin.h;
  theta_max_ = pmax.theta;
  h_max_ = pmax.h;
}

double GraphFunction::solve(double theta) const {
  double t0 = th_.front();
  double th = t0 + canon(theta - t0);
  size_t k = std::upper_bound(th_.begin(), th_.end(), th) - th_.begin();
  if (k == 0) k = 1;
  if (k >= th_.size()) k = th_.size() - 1;
  double pa = ph_[k - 1], pb = ph_[k];
  double ta = th_[k - 1], tb = th_[k];
  auto F = [&](double phi) {
    double c = E_->psi_siegel(f_(phi)).theta;
    return unwrap_near(c, ta) - th;
  };
  double fa = ta - th, fb = tb - th;
  if (fa == 0) return pa;
  if (fb == 0) return pb;
  // Illinois regula falsi.
  int side = 0;
  double pc = pa;
  for (int it = 0; it < 60; ++it) {
    pc = (pa * fb - pb * fa) / (fb - fa);
    double fc = F(pc);
    if (std::abs(fc) < 1e-14 || std::abs(pb - pa) < 1e-15) break;
    if ((fc < 0) == (fb < 0)) {
      pb = pc;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      pa = pc;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return pc;
}

double GraphFunction::operator()(double theta) const { return E_->psi_siegel(f_(solve(theta))).h; }

double GraphFunction::param_at(double theta) const { return solve(theta); }

std::vector<CrossingCluster> find_crossings(const std::vector<const ElevationCurve*>& A,
                                            const std::vector<const ElevationCurve*>& B, const CrossingOptions& opt) {
  using V2 = Eigen::Vector2d;
  struct Seg {
    V2 a, b;
  };
  auto segments = [&](const std::vector<const ElevationCurve*>& cs) {
    std::vector<Seg> out;
    for (const ElevationCurve* c : cs) {
      size_t n = c->pts.size();
      if (n < 2) continue;
      size_t trim = static_cast<size_t>(std::max(opt.trim, 0));
      size_t lo = c->closed ? 0 : trim, hi = c->closed ? n : (n - 1 > trim ? n - 1 - trim : 0);
      for (size_t k = lo; k < hi; ++k) {
        const auto& p = c->pts[k];
        const auto& q = c->pts[(k + 1) % n];
        double qt = (k + 1 == n) ? unwrap_near(q.theta, p.theta) : q.theta;
        double shift = -kTwoPi * std::floor(std::min(p.theta, qt) / kTwoPi);
        out.push_back({V2(p.theta + shift, p.h), V2(qt + shift, q.h)});
      }
    }
    return out;
  };
  std::vector<Seg> sa = segments(A), sb0 = segments(B);
  std::vector<CrossingCluster> result;
  if (sa.empty() || sb0.empty()) return result;
  std::vector<Seg> sb;
  sb.reserve(3 * sb0.size());
  for (double sh : {-kTwoPi, 0.0, kTwoPi})
    for (const auto& s : sb0) sb.push_back({s.a + V2(sh, 0), s.b + V2(sh, 0)});

  double hlo = 1e300, hhi = -1e300;
  for (const auto* v : {&sa, &sb})
    for (const auto& s : *v) {
      hlo = std::min({hlo, s.a.y(), s.b.y()});
      hhi = std::max({hhi, s.a.y(), s.b.y()});
    }
  double pad = opt.contact_tol + 1e-12;
  hlo -= pad;
  hhi += pad;
  const double tlo = -kTwoPi - pad, thi = 2 * kTwoPi + pad;
  const int NT = 768, NH = 256;
  double ct = (thi - tlo) / NT, ch = std::max(hhi - hlo, 1e-12) / NH;
  auto cell_range = [&](const Seg& s, int& i0, int& i1, int& j0, int& j1) {
    i0 = std::clamp(int((std::min(s.a.x(), s.b.x()) - pad - tlo) / ct), 0, NT - 1);
    i1 = std::clamp(int((std::max(s.a.x(), s.b.x()) + pad - tlo) / ct), 0, NT - 1);
    j0 = std::clamp(int((std::min(s.a.y(), s.b.y()) - pad - hlo) / ch), 0, NH - 1);
    j1 = std::clamp(int((std::max(s.a.y(), s.b.y()) + pad - hlo) / ch), 0, NH - 1);
  };
  std::vector<std::vector<int>> grid(NT * NH);
  for (size_t q = 0; q < sb.size(); ++q) {
    int i0, i1, j0, j1;
    cell_range(sb[q], i0, i1, j0, j1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) grid[i * NH + j].push_back(static_cast<int>(q));
  }

  auto cross = [](const V2& u, const V2& v) { return u.x() * v.y() - u.y() * v.x(); };
  auto pt_seg = [](const V2& p, const V2& a, const V2& b, V2& foot) {
    V2 d = b - a;
    double L = d.squaredNorm();
    double t = L > 0 ? std::clamp((p - a).dot(d) / L, 0.0, 1.0) : 0.0;
    foot = a + t * d;
    return (p - foot).norm();
  };

  struct Hit {
    V2 p;
    bool contact;
  };
  std::vector<Hit> hits;
  std::vector<int> stamp(sb.size(), -1);
  for (size_t pidx = 0; pidx < sa.size() && hits.size() < 20000; ++pidx) {
    const Seg& s = sa[pidx];
    int i0, i1, j0, j1;
    cell_range(s, i0, i1, j0, j1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j)
        for (int q : grid[i * NH + j]) {
          if (stamp[q] == static_cast<int>(pidx)) continue;
          stamp[q] = static_cast<int>(pidx);
          const Seg& t = sb[q];
          V2 r = s.b - s.a, w = t.b - t.a;
          double den = cross(r, w);
          bool found = false;
          if (den != 0) {
            double a = cross(t.a - s.a, w) / den, b = cross(t.a - s.a, r) / den;
            if (a >= 0 && a <= 1 && b >= 0 && b <= 1) {
              hits.push_back({s.a + a * r, false});
              found = true;
            }
          }
          if (!found && opt.contacts) {
            V2 f1, f2, f3, f4;
            double d1 = pt_seg(s.a, t.a, t.b, f1), d2 = pt_seg(s.b, t.a, t.b, f2);
            double d3 = pt_seg(t.a, s.a, s.b, f3), d4 = pt_seg(t.b, s.a, s.b, f4);
            double dm = std::min({d1, d2, d3, d4});
            if (dm < opt.contact_tol) {
              V2 p = dm == d1 ? 0.5 * (s.a + f1) : dm == d2 ? 0.5 * (s.b + f2) : dm == d3 ? 0.5 * (t.a + f3)
                                                                                              : 0.5 * (t.b + f4);
              hits.push_back({p, true});
            }
          }
        }
  }
  // Cluster with periodic theta.
  size_t m = hits.size();
  std::vector<size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a + 1; b < m; ++b) {
      double dt = std::abs(wrap_pi(hits[a].p.x() - hits[b].p.x()));
      if (std::hypot(dt, hits[a].p.y() - hits[b].p.y()) < opt.merge_radius) parent[find(a)] = find(b);
    }
  std::vector<int> index(m, -1);
  for (size_t a = 0; a < m; ++a) {
    size_t r = find(a);
    if (index[r] < 0) {
      index[r] = static_cast<int>(result.size());
      CrossingCluster c;
      c.theta = canon(hits[a].p.x());
      c.h = hits[a].p.y();
      c.contact = true;
      result.push_back(c);
    }
    auto& c = result[index[r]];
    c.hits++;
    if (!hits[a].contact) c.contact = false;
  }
  return result;
}

bool SectorRegion::theta_inside(double theta, double tol) const {
  double t = lift(theta);
  return t >= theta_lo - tol && t <= theta_hi + tol;
}

double SectorRegion::lift(double theta) const {
  double mid = 0.5 * (theta_lo + theta_hi);
  return unwrap_near(theta, mid);
}

SectorRegion build_sector(const GraphFunction& g, const ElevationCurve& Q, bool top, const std::string& name) {
  SectorRegion R;
  R.name = name;
  R.top = top;
  size_t iq = top ? Q.argmax_h() : Q.argmax_h();
  if (!top) iq = Q.argmin_h();
  R.h_edge = Q.pts[iq].h;
  double ts = Q.pts[iq].canonical();
  double H = R.h_edge;
  auto inside = [&](double th) { return top ? g(th) < H : g(th) > H; };
  if (!inside(ts)) throw Error(ErrorKind::Construction, name + ": extreme point of Q is not off the graph");
  // Walk along the graph samples to bracket both edges, then bisect.
  const double step = kTwoPi / 1024;
  auto edge = [&](double dir) {
    double a = ts;
    for (int k = 1; k <= 1024; ++k) {
      double b = ts + dir * step * k;
      if (!inside(b)) {
        auto F = [&](double th) { return g(th) - H; };
        return bisect(F, std::min(a, b), std::max(a, b));
      }
      a = b;
    }
    throw Error(ErrorKind::Construction, name + ": sector does not close");
  };
  R.theta_hi = edge(1.0);
  R.theta_lo = edge(-1.0);
  R.closure_gap = std::max(std::abs(g(R.theta_lo) - H), std::abs(g(R.theta_hi) - H));
  if (R.closure_gap > 1e-6) throw Error(ErrorKind::SamplingResolution, name + ": boundary fails to close");
  // Extremum of the graph inside the interval.
  const auto& C = g.curve();
  double best = top ? 1e300 : -1e300, tb = 0.5 * (R.theta_lo + R.theta_hi);
  for (const auto& p : C.pts) {
    if (!R.theta_inside(p.theta)) continue;
    if (top ? p.h < best : p.h > best) {
      best = p.h;
      tb = R.lift(p.theta);
    }
  }
  double w = kTwoPi / C.size() * 2;
  double a = std::max(R.theta_lo, tb - w), b = std::min(R.theta_hi, tb + w);
  R.theta_extremum = golden_search([&](double th) { return g(th); }, a, b, top ? 1.0 : -1.0);
  R.marked.push_back({"extremum", ElevationPoint(R.theta_extremum, g(R.theta_extremum))});
  R.marked.push_back({"edge", ElevationPoint(Q.pts[iq].theta, H)});
  return R;
}

ArcCheck check_arc(const ElevationCurve& arc, const GraphFunction& g, const SectorRegion& R) {
  ArcCheck A;
  A.min_inside = std::numeric_limits<double>::infinity();
  A.min_graph_gap = std::numeric_limits<double>::infinity();
  int prev = 0;
  size_t n = arc.pts.size();
  for (size_t k = 1; k + 1 < n; ++k) {
    const auto& p = arc.pts[k];
    double t = R.lift(p.theta);
    double gap = p.h - g(p.theta);
    double m;
    if (t < R.theta_lo || t > R.theta_hi) {
      m = -std::min(std::abs(t - R.theta_lo), std::abs(t - R.theta_hi));
    } else {
      m = R.top ? std::min(gap, R.h_edge - p.h) : std::min(-gap, p.h - R.h_edge);
    }
    A.min_inside = std::min(A.min_inside, m);
    A.min_graph_gap = std::min(A.min_graph_gap, std::abs(gap));
    int sg = gap > 0 ? 1 : gap < 0 ? -1 : 0;
    if (sg != 0) {
      if (prev != 0 && sg != prev) A.graph_crossings++;
      prev = sg;
    } else {
      A.graph_crossings++;
    }
  }
  int dir = 0;
  for (size_t k = 0; k + 1 < n; ++k) {
    double d = arc.pts[k + 1].h - arc.pts[k].h;
    int sg = d > 0 ? 1 : d < 0 ? -1 : 0;
    if (sg == 0 || (dir != 0 && sg != dir)) {
      A.rising = false;
      break;
    }
    dir = sg;
  }
  return A;
}

namespace {

// Fiber endpoint on Q0 for each sample of a circle.
std::vector<Vec3> q0_ends(const Elevation& E, const std::function<Vec3(double)>& f, int n, double phi0) {
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vec3 X = f(phi0 + kTwoPi * k / n);
    out.push_back(E.fiber_element(E.psi_siegel(X)) * Vec3(1.0, 0.0, 0.0));
  }
  return out;
}

void assign_regions(const Elevation& E, int i, const ConeDisk& D, const AxisData& ax, double phi0,
                    const std::array<SectorRegion, 2>& R, std::vector<int>& out) {
  const Vec3& polar = E.rep().Cp[i];
  double pa = phi0 + canon(E.circle_phase(polar, ax.on_circle[0]) - phi0);
  double pb = phi0 + canon(E.circle_phase(polar, ax.on_circle[1]) - phi0);
  if (pa > pb) std::swap(pa, pb);
  auto f = E.circle_param(polar);
  // Region of each half, from the theta of its middle point.
  int half_region[2];
  double mids[2] = {0.5 * (pa + pb), 0.5 * (pb + pa + kTwoPi)};
  for (int hf = 0; hf < 2; ++hf) {
    double th = E.psi_siegel(f(mids[hf])).theta;
    bool in0 = R[0].theta_inside(th), in1 = R[1].theta_inside(th);
    if (in0 == in1) throw Error(ErrorKind::Labeling, "half of Sigma cannot be matched to a sector");
    half_region[hf] = in0 ? 0 : 1;
  }
  if (half_region[0] == half_region[1]) throw Error(ErrorKind::Labeling, "both halves map to one sector");
  out.clear();
  for (double phi : D.phis) {
    double p = phi0 + canon(phi - phi0);
    out.push_back(half_region[(p > pa && p < pb) ? 0 : 1]);
  }
}

}  // namespace

PictureData sector_regions(const Elevation& E, const PictureConfig& cfg) {
  PictureData P;
  const RepInstance& rep = E.rep();
  Vec3 p0 = E.to_siegel(rep.p[0]);
  p0 /= p0(2);
  P.p0 = E.psi_siegel(p0);
  double phi1 = E.circle_phase(rep.Cp[1], p0), phi2 = E.circle_phase(rep.Cp[2], p0);
  auto f1 = E.circle_param(rep.Cp[1]), f2 = E.circle_param(rep.Cp[2]);
  P.psi1 = GraphFunction(E, f1, cfg.n_curve, phi1, "C1");
  P.psi2 = GraphFunction(E, f2, cfg.n_curve, phi2, "C2");
  P.E2 = E.image(E.circle_samples(rep.Ep[2], cfg.n_curve), true, "E2");

  P.Q01 = q0_ends(E, f1, cfg.n_curve, phi1);
  P.Q02 = q0_ends(E, f2, cfg.n_curve, phi2);
  P.u_prime = std::numeric_limits<double>::infinity();
  for (const auto& v : P.Q01) {
    HeisPoint q = heis_chart(v);
    if (!q.inf) P.u_prime = std::min(P.u_prime, std::abs(q.t));
  }
  std::vector<Vec3> q21, q12;
  for (const auto& v : P.Q01) q21.push_back(E.I(1) * v);
  for (const auto& v : P.Q02) q12.push_back(E.I(2) * v);
  P.Q21 = E.image(q21, true, "Q21");
  P.Q12 = E.image(q12, true, "Q12");

  P.S12 = E.cone_disk(1, 2, cfg.n_arcs, cfg.n_pts, phi1);
  P.S21 = E.cone_disk(2, 1, cfg.n_arcs, cfg.n_pts, phi2);
  for (const auto& a : P.S12.arcs) P.arcs12.push_back(E.image(a, false, "Sigma12"));
  for (const auto& a : P.S21.arcs) P.arcs21.push_back(E.image(a, false, "Sigma21"));

  P.regions12 = {build_sector(P.psi1, P.Q21, true, "S12A"), build_sector(P.psi1, P.Q21, false, "S12B")};
  P.regions21 = {build_sector(P.psi2, P.Q12, true, "S21A"), build_sector(P.psi2, P.Q12, false, "S21B")};
  P.axis1 = E.r_axis(1);
  P.axis2 = E.r_axis(2);
  for (auto* R : {&P.regions12[0], &P.regions12[1]}) {
    R->marked.push_back({"axis0", P.axis1.psi[0]});
    R->marked.push_back({"axis1", P.axis1.psi[1]});
    R->marked.push_back({"max", ElevationPoint(P.psi1.theta_of_max(), P.psi1.h_max())});
    R->marked.push_back({"min", ElevationPoint(P.psi1.theta_of_min(), P.psi1.h_min())});
  }
  for (auto* R : {&P.regions21[0], &P.regions21[1]}) {
    R->marked.push_back({"axis0", P.axis2.psi[0]});
    R->marked.push_back({"axis1", P.axis2.psi[1]});
    R->marked.push_back({"max", ElevationPoint(P.psi2.theta_of_max(), P.psi2.h_max())});
    R->marked.push_back({"min", ElevationPoint(P.psi2.theta_of_min(), P.psi2.h_min())});
  }
  // Grey companion: Q-end of the arc through the extremum of the graph.
  auto grey = [&](SectorRegion& R, const GraphFunction& g, int i) {
    Vec3 X = g.point(g.param_at(R.theta_extremum));
    Vec3 end = E.I(i) * (E.fiber_element(E.psi_siegel(X)) * Vec3(1.0, 0.0, 0.0));
    R.marked.push_back({"grey", E.psi_siegel(end)});
  };
  grey(P.regions12[0], P.psi1, 1);
  grey(P.regions12[1], P.psi1, 1);
  grey(P.regions21[0], P.psi2, 2);
  grey(P.regions21[1], P.psi2, 2);

  assign_regions(E, 1, P.S12, P.axis1, phi1, P.regions12, P.region12);
  assign_regions(E, 2, P.S21, P.axis2, phi2, P.regions21, P.region21);
  return P;
}

double pairing_residual(const Elevation& E, const PictureData& P, double frac) {
  const SectorRegion& R = P.regions12[0];
  const GraphFunction& g = P.psi1;
  double hx = g(R.theta_extremum);
  double level = hx + frac * (R.h_edge - hx);
  auto F = [&](double th) { return g(th) - level; };
  double tl = bisect(F, R.theta_lo, R.theta_extremum);
  double tr = bisect(F, R.theta_extremum, R.theta_hi);
  auto end = [&](double th) {
    Vec3 X = g.point(g.param_at(th));
    return E.psi_siegel(Vec3(E.I(1) * (E.fiber_element(E.psi_siegel(X)) * Vec3(1.0, 0.0, 0.0))));
  };
  ElevationPoint a = end(tl), b = end(tr);
  return std::hypot(theta_distance(a.theta, b.theta), a.h - b.h);
}

}  // namespace crgeo
