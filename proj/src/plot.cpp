#include "crgeo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "crgeo/elevation.hpp"
#include "crgeo/rep.hpp"
#include "crgeo/sectors.hpp"
#include "crgeo/verifier.hpp"

namespace crgeo {

using json = nlohmann::json;

namespace {

struct ViewInfo {
  ViewKind kind;
  const char* name;
  std::vector<std::string> layers;
};

const std::vector<ViewInfo>& views() {
  static const std::vector<ViewInfo> v = {
      {ViewKind::Elevation,
       "Elevation",
       {"regions", "E1", "E2", "Q1", "Q2", "Q12", "Q21", "arcs12", "arcs21", "C1", "C2", "marks"}},
      {ViewKind::ElevationAffiliate, "ElevationAffiliate", {"E2", "C1", "affiliate", "arc", "marks"}},
      {ViewKind::HeisProjection, "HeisProjection", {"E0", "E1", "E2", "Q0", "Q1", "Q2", "C0", "C1", "C2", "marks"}},
      {ViewKind::EtaDisk, "EtaDisk", {"boundary", "E1", "E2", "Q1", "Q2", "C0", "C1", "C2", "marks"}},
      {ViewKind::EtaHalfPlane, "EtaHalfPlane", {"E1", "E2", "Q1", "Q2", "C0", "C1", "C2", "marks"}},
      {ViewKind::ArgArgTorus, "ArgArgTorus", {"C0", "C1", "C2", "rho0", "marks"}},
  };
  return v;
}

const char* default_color(const std::string& layer) {
  static const std::map<std::string, const char*> c = {
      {"E0", "#888888"},     {"E1", "#888888"},   {"E2", "#888888"},     {"Q0", "#555555"},
      {"Q1", "#555555"},     {"Q2", "#555555"},   {"Q12", "#000000"},    {"Q21", "#000000"},
      {"arcs12", "#000000"}, {"arcs21", "#444444"}, {"regions", "#b03030"}, {"affiliate", "#999999"},
      {"rho0", "#3050b0"},   {"boundary", "#888888"}};
  auto it = c.find(layer);
  return it == c.end() ? "#000000" : it->second;
}

double wrap_pi(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - kPi;
}

// Splits a sequence of 2-d points wherever a coordinate jumps by more than
// `jump` (a wrap on the cylinder or torus) or a point is missing.
class Splitter {
 public:
  explicit Splitter(double jump) : jump_(jump) {}
  void add(std::optional<std::array<double, 2>> p, bool cusp = false) {
    if (!p) {
      broken_ = true;
      cut();
      return;
    }
    if (!cur_.pts.empty()) {
      const auto& q = cur_.pts.back();
      if (std::abs((*p)[0] - q[0]) > jump_ || std::abs((*p)[1] - q[1]) > jump_) cut();
    }
    if (cusp) cur_.cusps.push_back(static_cast<int>(cur_.pts.size()));
    cur_.pts.push_back(*p);
  }
  // Closes the curve: a single unbroken run becomes a closed polyline.
  std::vector<Polyline> finish(bool closed) {
    cut();
    if (closed && out_.size() == 1 && !broken_) out_[0].closed = true;
    if (closed && out_.size() > 1) {
      // Join the wrap-free tail to the head when the seam falls inside a run.
      auto& head = out_.front();
      auto& tail = out_.back();
      if (!broken_ && std::abs(head.pts.front()[0] - tail.pts.back()[0]) <= jump_ &&
          std::abs(head.pts.front()[1] - tail.pts.back()[1]) <= jump_) {
        int off = static_cast<int>(tail.pts.size());
        for (int& c : head.cusps) c += off;
        tail.pts.insert(tail.pts.end(), head.pts.begin(), head.pts.end());
        tail.cusps.insert(tail.cusps.end(), head.cusps.begin(), head.cusps.end());
        out_.erase(out_.begin());
      }
    }
    return std::move(out_);
  }

 private:
  void cut() {
    if (!cur_.pts.empty()) out_.push_back(std::move(cur_));
    cur_ = Polyline{};
  }
  double jump_;
  Polyline cur_;
  std::vector<Polyline> out_;
  bool broken_ = false;
};

struct Builder {
  const FigureSpec& spec;
  Figure fig;

  explicit Builder(const FigureSpec& s) : spec(s) { fig.spec = s; }

  bool on(const std::string& name) const { return spec.enabled(name); }

  void layer(const std::string& name, std::vector<Polyline> lines) {
    if (!on(name)) return;
    Layer L;
    L.name = name;
    auto it = spec.style.find(name);
    L.color = it != spec.style.end() ? it->second : default_color(name);
    for (auto& l : lines)
      if (!l.pts.empty()) L.lines.push_back(std::move(l));
    fig.layers.push_back(std::move(L));
  }

  void mark(const std::string& name, double x0, double x1) {
    if (on("marks") && std::isfinite(x0) && std::isfinite(x1)) fig.marks.push_back({name, x0, x1});
  }
};

// ---------------------------------------------------------------- elevation

struct CylinderMap {
  double center = 0;
  std::array<double, 2> operator()(const ElevationPoint& p) const {
    return {center + wrap_pi(p.theta - center), p.h};
  }
};

std::vector<Polyline> cylinder_lines(const ElevationCurve& c, const CylinderMap& m) {
  Splitter sp(kPi);
  std::vector<char> cusp(c.size(), 0);
  for (int k : c.cusps)
    if (k >= 0 && k < static_cast<int>(c.size())) cusp[k] = 1;
  for (size_t k = 0; k < c.size(); ++k) sp.add(m(c.pts[k]), cusp[k]);
  return sp.finish(c.closed);
}

std::vector<Polyline> cylinder_lines(const std::vector<ElevationCurve>& cs, const CylinderMap& m) {
  std::vector<Polyline> out;
  for (const auto& c : cs)
    for (auto& l : cylinder_lines(c, m)) out.push_back(std::move(l));
  return out;
}

std::vector<Polyline> segment(double th0, double th1, double h, const CylinderMap& m, int n = 64) {
  ElevationCurve c;
  for (int k = 0; k <= n; ++k) c.pts.emplace_back(th0 + (th1 - th0) * k / n, h);
  return cylinder_lines(c, m);
}

void build_elevation(Builder& B, const RepInstance& rep) {
  const FigureSpec& s = B.spec;
  Elevation E(rep);
  PictureData P = sector_regions(E, {s.n_curve, s.n_arcs, s.n_pts});
  CylinderMap m{P.p0.canonical()};
  B.fig.x_label = "theta";
  B.fig.y_label = "h";

  if (B.on("regions")) {
    std::vector<Polyline> lines;
    for (const auto* regs : {&P.regions12, &P.regions21})
      for (const auto& R : *regs)
        for (auto& l : segment(R.theta_lo, R.theta_hi, R.h_edge, m)) lines.push_back(std::move(l));
    B.layer("regions", std::move(lines));
  }
  auto curve = [&](const std::string& name, const std::function<ElevationCurve()>& f) {
    if (B.on(name)) B.layer(name, cylinder_lines(f(), m));
  };
  curve("E1", [&] { return E.image(E.circle_samples(rep.Ep[1], s.n_curve), true, "E1"); });
  curve("E2", [&] { return P.E2; });
  auto qj = [&](int j) {
    std::vector<Vec3> pts;
    for (const auto& v : E.q0_samples(s.n_curve)) pts.push_back(E.I(3 - j) * v);
    return E.image(pts, false, j == 1 ? "Q1" : "Q2");
  };
  curve("Q1", [&] { return qj(1); });
  curve("Q2", [&] { return qj(2); });
  curve("Q12", [&] { return P.Q12; });
  curve("Q21", [&] { return P.Q21; });
  if (B.on("arcs12")) B.layer("arcs12", cylinder_lines(P.arcs12, m));
  if (B.on("arcs21")) B.layer("arcs21", cylinder_lines(P.arcs21, m));
  curve("C1", [&] { return P.psi1.curve(); });
  curve("C2", [&] { return P.psi2.curve(); });

  auto mk = [&](const std::string& n, const ElevationPoint& p) {
    auto q = m(p);
    B.mark(n, q[0], q[1]);
  };
  mk("p0", P.p0);
  for (int k = 0; k < 2; ++k) {
    mk("axis1." + std::to_string(k), P.axis1.psi[k]);
    mk("axis2." + std::to_string(k), P.axis2.psi[k]);
  }
  for (const auto* regs : {&P.regions12, &P.regions21})
    for (const auto& R : *regs)
      for (const auto& [n, p] : R.marked) mk(R.name + "." + n, p);
}

void build_affiliate(Builder& B, const RepInstance& rep) {
  const FigureSpec& s = B.spec;
  Elevation E(rep);
  double phi = s.affiliate_theta.value_or(1.0);
  auto f1 = E.circle_param(rep.Cp[1]);
  AxisData ax = E.r_axis(1);
  bool on_axis = false;
  for (const auto& X : ax.on_circle)
    if (theta_distance(phi, E.circle_phase(rep.Cp[1], X)) < 1e-3) on_axis = true;
  if (on_axis) B.fig.notice = "base point lies on the R-axis; no cusp claim";

  Vec3 p0 = E.to_siegel(rep.p[0]);
  double th0 = E.psi_siegel(p0).canonical();
  CylinderMap m{th0};
  B.fig.x_label = "theta";
  B.fig.y_label = "h";
  if (B.on("E2")) B.layer("E2", cylinder_lines(E.image(E.circle_samples(rep.Ep[2], s.n_curve), true, "E2"), m));
  if (B.on("C1"))
    B.layer("C1", cylinder_lines(E.image(E.circle_samples(rep.Cp[1], s.n_curve, E.circle_phase(rep.Cp[1], p0)),
                                         true, "C1"),
                                 m));
  if (B.on("affiliate")) {
    auto g = E.fiber_circle(f1(phi));
    const Mat3& I1 = E.I(1);
    auto gam = [&](double t) { return Vec3(I1 * g(t)); };
    ElevationCurve C = E.image_param(gam, 0.0, kPi, s.n_curve, true, "affiliate", !on_axis);
    B.layer("affiliate", cylinder_lines(C, m));
  }
  if (B.on("arc")) {
    ConeDisk D = E.cone_disk(1, 2, 1, std::max(s.n_pts, 8) * 4, phi);
    B.layer("arc", cylinder_lines(E.image(D.arcs[0], false, "arc"), m));
  }
  ElevationPoint b = E.psi_siegel(f1(phi));
  auto q = m(b);
  B.mark("base", q[0], q[1]);
}

// ---------------------------------------------------------------- planar views

using Proj = std::function<std::optional<std::array<double, 2>>(const Vec3& ball)>;

std::vector<Polyline> circle_lines(const Vec3& polar, int n, const Proj& f, double jump) {
  Splitter sp(jump);
  for (const auto& v : CCircle(polar).sample(n)) sp.add(f(v));
  return sp.finish(true);
}

// Ball points along the arc Q_j of E_j.
std::vector<Vec3> arc_points(const Elevation& E, const Vec3& polar, const ArcDescriptor& Q, int n) {
  if (Q.degenerate) return {};
  auto f = E.circle_param(polar);
  double a = E.circle_phase(polar, E.to_siegel(Q.end1));
  double b = E.circle_phase(polar, E.to_siegel(Q.end2));
  double m = E.circle_phase(polar, E.to_siegel(Q.interior));
  auto fwd = [](double from, double to) {
    double d = std::fmod(to - from, kTwoPi);
    return d < 0 ? d + kTwoPi : d;
  };
  // Go from end1 towards end2 in the direction that passes the interior point.
  double span = fwd(a, b), dir = 1;
  if (fwd(a, m) > span) {
    span = kTwoPi - span;
    dir = -1;
  }
  std::vector<Vec3> out;
  for (int k = 0; k <= n; ++k) out.push_back(E.frame().to_ball(f(a + dir * span * k / n)));
  return out;
}

std::vector<Polyline> arc_lines(const std::vector<Vec3>& pts, const Proj& f, double jump) {
  Splitter sp(jump);
  for (const auto& v : pts) sp.add(f(v));
  return sp.finish(false);
}

void build_planar(Builder& B, const RepInstance& rep, const Proj& f, double jump, bool with_e0) {
  const FigureSpec& s = B.spec;
  Elevation E(rep);
  for (const auto& name : view_layers(s.view)) {
    if (!B.on(name) || name == "marks" || name == "boundary") continue;
    int j = name[1] - '0';
    if (name[0] == 'C') B.layer(name, circle_lines(rep.Cp[j], s.n_curve, f, jump));
    if (name[0] == 'E' && (j != 0 || with_e0)) B.layer(name, circle_lines(rep.Ep[j], s.n_curve, f, jump));
    if (name[0] == 'Q') B.layer(name, arc_lines(arc_points(E, rep.Ep[j], rep.Q[j], s.n_curve / 2), f, jump));
  }
  for (int k = 0; k < 3; ++k)
    if (auto q = f(rep.p[k])) B.mark("p" + std::to_string(k), (*q)[0], (*q)[1]);
}

std::optional<std::array<double, 2>> finite(cplx w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > 1e6) return std::nullopt;
  return std::array<double, 2>{w.real(), w.imag()};
}

void build_heis(Builder& B, const RepInstance& rep) {
  HeisMap H = build_normalization(normalization_from_name(B.spec.normalization), rep);
  B.fig.x_label = "Re z";
  B.fig.y_label = "Im z";
  Proj f = [&](const Vec3& v) -> std::optional<std::array<double, 2>> {
    HeisPoint p = H.apply(v);
    if (p.inf) return std::nullopt;
    return finite(p.z);
  };
  build_planar(B, rep, f, std::numeric_limits<double>::infinity(), true);
}

void build_eta_disk(Builder& B, const RepInstance& rep) {
  SliceFrame F = slice_frame(HVec3(rep.Ep[0]));
  B.fig.x_label = "Re w";
  B.fig.y_label = "Im w";
  if (B.on("boundary")) {
    Polyline l;
    l.closed = true;
    for (int k = 0; k < 256; ++k) l.pts.push_back({std::cos(kTwoPi * k / 256), std::sin(kTwoPi * k / 256)});
    B.layer("boundary", {l});
  }
  Proj f = [&](const Vec3& v) -> std::optional<std::array<double, 2>> {
    try {
      return finite(eta_project(HVec3(v), F).w);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  build_planar(B, rep, f, std::numeric_limits<double>::infinity(), false);
}

void build_eta_half(Builder& B, const RepInstance& rep) {
  HeisMap H = build_normalization(NormalizationKind::N3_AxisUnitRadius, rep);
  B.fig.x_label = "Re eta";
  B.fig.y_label = "Im eta";
  Proj f = [&](const Vec3& v) -> std::optional<std::array<double, 2>> {
    try {
      return finite(eta_halfplane(v, H));
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  build_planar(B, rep, f, std::numeric_limits<double>::infinity(), false);
}

void build_torus(Builder& B, const RepInstance& rep) {
  B.fig.x_label = "arg z1";
  B.fig.y_label = "arg z2";
  Proj f = [](const Vec3& v) -> std::optional<std::array<double, 2>> {
    cplx z1 = v(0) / v(2), z2 = v(1) / v(2);
    if (std::abs(std::norm(z1) - 0.5) > 1e-6 || std::abs(std::norm(z2) - 0.5) > 1e-6) return std::nullopt;
    return std::array<double, 2>{std::arg(z1), std::arg(z2)};
  };
  for (int j = 0; j < 3; ++j) {
    std::string n = "C" + std::to_string(j);
    if (B.on(n)) B.layer(n, circle_lines(rep.Cp[j], B.spec.n_curve, f, kPi));
  }
  if (B.on("rho0")) {
    Splitter sp(kPi);
    int n = B.spec.n_curve;
    for (int k = 0; k < n; ++k) {
      double phi = -kPi + kTwoPi * k / n;
      sp.add(std::array<double, 2>{phi, -phi});
    }
    B.layer("rho0", sp.finish(false));
  }
  B.mark("q0", std::arg(rep.a), -std::arg(rep.a));
  B.mark("q0'", std::arg(rep.b), -std::arg(rep.b));
}

// ---------------------------------------------------------------- SVG helpers

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

// ---------------------------------------------------------------- spec

const char* view_name(ViewKind v) {
  for (const auto& i : views())
    if (i.kind == v) return i.name;
  return "?";
}

ViewKind view_from_name(const std::string& s) {
  for (const auto& i : views())
    if (s == i.name) return i.kind;
  throw Error(ErrorKind::InvalidArgument, "unknown view '" + s + "'");
}

const std::vector<std::string>& view_layers(ViewKind v) {
  for (const auto& i : views())
    if (i.kind == v) return i.layers;
  throw Error(ErrorKind::InvalidArgument, "unknown view");
}

bool FigureSpec::enabled(const std::string& layer) const {
  auto it = layers.find(layer);
  return it == layers.end() || it->second;
}

void FigureSpec::validate() const {
  if (!(s >= 0 && s <= kSBar)) throw Error(ErrorKind::InvalidArgument, "s must lie in [0, s-bar]");
  if (n_curve < 16 || n_curve > 1 << 16) throw Error(ErrorKind::InvalidArgument, "n_curve out of range");
  if (n_arcs < 1 || n_arcs > 4096 || n_pts < 4 || n_pts > 4096)
    throw Error(ErrorKind::InvalidArgument, "arc sampling out of range");
  if (width < 16 || height < 16) throw Error(ErrorKind::InvalidArgument, "figure too small");
  normalization_from_name(normalization);
  const auto& known = view_layers(view);
  for (const auto& [k, v] : layers)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw Error(ErrorKind::InvalidArgument, "unknown layer '" + k + "' for view " + view_name(view));
}

json FigureSpec::to_json() const {
  json j;
  j["view"] = view_name(view);
  j["s"] = s;
  j["layers"] = layers;
  j["style"] = style;
  j["affiliate_theta"] = affiliate_theta ? json(*affiliate_theta) : json(nullptr);
  j["normalization"] = normalization;
  j["n_curve"] = n_curve;
  j["n_arcs"] = n_arcs;
  j["n_pts"] = n_pts;
  j["width"] = width;
  j["height"] = height;
  return j;
}

FigureSpec FigureSpec::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "figure spec must be a JSON object");
  FigureSpec f;
  try {
    if (j.contains("view")) f.view = view_from_name(j.at("view").get<std::string>());
    if (j.contains("s")) f.s = j.at("s").get<double>();
    if (j.contains("layers")) f.layers = j.at("layers").get<std::map<std::string, bool>>();
    if (j.contains("style")) f.style = j.at("style").get<std::map<std::string, std::string>>();
    if (j.contains("affiliate_theta") && !j.at("affiliate_theta").is_null())
      f.affiliate_theta = j.at("affiliate_theta").get<double>();
    if (j.contains("normalization")) f.normalization = j.at("normalization").get<std::string>();
    if (j.contains("n_curve")) f.n_curve = j.at("n_curve").get<int>();
    if (j.contains("n_arcs")) f.n_arcs = j.at("n_arcs").get<int>();
    if (j.contains("n_pts")) f.n_pts = j.at("n_pts").get<int>();
    if (j.contains("width")) f.width = j.at("width").get<int>();
    if (j.contains("height")) f.height = j.at("height").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("figure spec: ") + e.what());
  }
  f.validate();
  return f;
}

// ---------------------------------------------------------------- figure

size_t Layer::sample_count() const {
  size_t n = 0;
  for (const auto& l : lines) n += l.pts.size();
  return n;
}

const Layer* Figure::find(const std::string& name) const {
  for (const auto& l : layers)
    if (l.name == name) return &l;
  return nullptr;
}

json Figure::to_json() const {
  json j;
  j["spec"] = spec.to_json();
  j["view"] = view_name(spec.view);
  j["axes"] = {{"x", x_label}, {"y", y_label}};
  j["layers"] = json::array();
  for (const auto& L : layers) {
    json lines = json::array();
    for (const auto& l : L.lines) {
      json pts = json::array();
      for (const auto& p : l.pts) pts.push_back({p[0], p[1]});
      lines.push_back({{"points", pts}, {"closed", l.closed}, {"cusps", l.cusps}});
    }
    j["layers"].push_back({{"name", L.name}, {"color", L.color}, {"polylines", lines}});
  }
  j["marks"] = json::array();
  for (const auto& m : marks) j["marks"].push_back({{"name", m.name}, {"x", m.x0}, {"y", m.x1}});
  if (!notice.empty()) j["notice"] = notice;
  return j;
}

Figure build_figure(const FigureSpec& spec) {
  spec.validate();
  Builder B(spec);
  RepInstance rep = build_rep(spec.s);
  switch (spec.view) {
    case ViewKind::Elevation: build_elevation(B, rep); break;
    case ViewKind::ElevationAffiliate: build_affiliate(B, rep); break;
    case ViewKind::HeisProjection: build_heis(B, rep); break;
    case ViewKind::EtaDisk: build_eta_disk(B, rep); break;
    case ViewKind::EtaHalfPlane: build_eta_half(B, rep); break;
    case ViewKind::ArgArgTorus: build_torus(B, rep); break;
  }
  return std::move(B.fig);
}

// ---------------------------------------------------------------- SVG

std::string error_svg(const std::string& message, int width, int height) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
    << "<text id=\"error\" x=\"20\" y=\"40\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#b00000\">"
    << escape(message) << "</text>\n</svg>\n";
  return o.str();
}

std::string render_svg(const Figure& fig) {
  const int W = fig.spec.width, H = fig.spec.height;
  const double margin = 40;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& L : fig.layers)
    for (const auto& l : L.lines)
      for (const auto& p : l.pts) grow(p[0], p[1]);
  for (const auto& m : fig.marks) grow(m.x0, m.x1);
  if (xmin > xmax) {
    xmin = ymin = -1;
    xmax = ymax = 1;
  }
  double dx = std::max(xmax - xmin, 1e-12), dy = std::max(ymax - ymin, 1e-12);
  xmin -= 0.05 * dx;
  xmax += 0.05 * dx;
  ymin -= 0.05 * dy;
  ymax += 0.05 * dy;
  double sx = (W - 2 * margin) / (xmax - xmin), sy = (H - 2 * margin) / (ymax - ymin);
  // Elevation views scale the axes independently; planar views keep aspect.
  bool cylinder = fig.spec.view == ViewKind::Elevation || fig.spec.view == ViewKind::ElevationAffiliate;
  if (!cylinder) sx = sy = std::min(sx, sy);
  double tx = margin - xmin * sx, ty = H - margin + ymin * sy;
  auto X = [&](double x) { return tx + sx * x; };
  auto Y = [&](double y) { return ty - sy * y; };

  json meta = {{"view", view_name(fig.spec.view)},
               {"s", fig.spec.s},
               {"x_scale", sx},
               {"y_scale", sy},
               {"x_range", {xmin, xmax}},
               {"y_range", {ymin, ymax}},
               {"x_label", fig.x_label},
               {"y_label", fig.y_label}};

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
    << "<metadata id=\"scale\">" << escape(meta.dump()) << "</metadata>\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n"
    << "<g id=\"data\" transform=\"matrix(" << format_double(sx) << " 0 0 " << format_double(-sy) << ' '
    << format_double(tx) << ' ' << format_double(ty) << ")\">\n";
  for (const auto& L : fig.layers) {
    o << "<path id=\"" << escape(L.name) << "\" fill=\"none\" stroke=\"" << escape(L.color)
      << "\" stroke-width=\"1.2\" vector-effect=\"non-scaling-stroke\" d=\"";
    bool first = true;
    for (const auto& l : L.lines) {
      for (size_t k = 0; k < l.pts.size(); ++k) {
        if (!first) o << ' ';
        first = false;
        o << (k == 0 ? 'M' : 'L') << format_double(l.pts[k][0]) << ',' << format_double(l.pts[k][1]);
      }
      if (l.closed) o << " Z";
    }
    o << "\"/>\n";
  }
  o << "</g>\n<g id=\"markers\">\n";
  for (const auto& L : fig.layers) {
    int k = 0;
    for (const auto& l : L.lines)
      for (int c : l.cusps) {
        const auto& p = l.pts[c];
        o << "<rect id=\"cusp-" << escape(L.name) << '-' << k++ << "\" class=\"cusp\" x=\"" << px(X(p[0]) - 4)
          << "\" y=\"" << px(Y(p[1]) - 4) << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"#d00000\"/>\n";
      }
  }
  for (const auto& m : fig.marks)
    o << "<circle id=\"mark-" << escape(m.name) << "\" class=\"mark\" cx=\"" << px(X(m.x0)) << "\" cy=\""
      << px(Y(m.x1)) << "\" r=\"3\" fill=\"#000000\"/>\n";
  o << "</g>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" font-family=\"sans-serif\" font-size=\"12\" "
    << "text-anchor=\"middle\">" << escape(fig.x_label) << "</text>\n";
  o << "<text x=\"12\" y=\"" << H / 2 << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(fig.y_label)
    << "</text>\n";
  if (!fig.notice.empty())
    o << "<text id=\"notice\" x=\"20\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">" << escape(fig.notice)
      << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string render(const FigureSpec& spec) {
  try {
    return render_svg(build_figure(spec));
  } catch (const std::exception& e) {
    return error_svg(e.what(), spec.width >= 16 ? spec.width : 800, spec.height >= 16 ? spec.height : 600);
  }
}

// ---------------------------------------------------------------- CSV

std::string export_csv(const Figure& fig) {
  std::ostringstream o;
  o << "layer,sample_index,x0,x1,flags\n";
  for (const auto& L : fig.layers) {
    size_t idx = 0;
    for (const auto& l : L.lines)
      for (size_t k = 0; k < l.pts.size(); ++k, ++idx) {
        std::vector<std::string> fl;
        if (k == 0) fl.push_back("start");
        if (!l.closed && (k == 0 || k + 1 == l.pts.size())) fl.push_back("endpoint");
        if (std::find(l.cusps.begin(), l.cusps.end(), static_cast<int>(k)) != l.cusps.end()) fl.push_back("cusp");
        std::string f;
        for (size_t q = 0; q < fl.size(); ++q) f += (q ? "|" : "") + fl[q];
        o << L.name << ',' << idx << ',' << format_double(l.pts[k][0]) << ',' << format_double(l.pts[k][1]) << ','
          << f << '\n';
      }
  }
  return o.str();
}

std::string export_csv(const FigureSpec& spec) { return export_csv(build_figure(spec)); }

std::vector<Layer> import_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  if (line != "layer,sample_index,x0,x1,flags") throw Error(ErrorKind::InvalidArgument, "unexpected CSV header");
  std::vector<Layer> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() == 4) f.push_back("");
    if (f.size() != 5) throw Error(ErrorKind::InvalidArgument, "malformed CSV row: " + line);
    if (out.empty() || out.back().name != f[0]) out.push_back(Layer{f[0], "", {}});
    Layer& L = out.back();
    if (f[4].find("start") != std::string::npos || L.lines.empty()) {
      L.lines.emplace_back();
      L.lines.back().closed = true;  // until an endpoint flag shows up
    }
    Polyline& p = L.lines.back();
    if (f[4].find("endpoint") != std::string::npos) p.closed = false;
    if (f[4].find("cusp") != std::string::npos) p.cusps.push_back(static_cast<int>(p.pts.size()));
    p.pts.push_back({std::stod(f[2]), std::stod(f[3])});
  }
  return out;
}

}  // namespace crgeo
