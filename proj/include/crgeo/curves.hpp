#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crgeo/coords.hpp"

namespace crgeo {

// C-circle held by its polar vector.
struct CCircle {
  Vec3 polar = Vec3::Zero();
  Form form = Form::Ball;

  CCircle() = default;
  explicit CCircle(const Vec3& p, Form f = Form::Ball) : polar(p), form(f) {}

  // n null lifts f- + e^{i phi} f+, phi = 2 pi (k + offset) / n.
  std::vector<Vec3> sample(int n, double offset = 0.0) const;
  // Point at angle phi on the same parametrization.
  Vec3 point(double phi) const;
  // Heisenberg data under a chart.
  CircleData data(const HeisMap& B) const { return circle_from_polar(B.M * polar); }
};

struct AspectValue {
  double value;        // +inf when the slices are perpendicular
  bool perpendicular;
};
AspectValue aspect_invariant(const HVec3& E_polar, const HVec3& C_polar);
bool linked(const CCircle& C, const CCircle& E);

double f_graph(double A, double t);
double f_graph_dd(double A, double t);

struct CircleFit {
  cplx center;
  double radius;
  double residual;  // max |dist - radius|
};
CircleFit fit_circle(const std::vector<cplx>& pts);

struct CircleSample {
  std::vector<HeisPoint> points;
  bool vertical = false;       // circle through the chart's pole
  CircleFit fit{};             // of the projection to C
  CircleData data{};           // from the polar
  double contact_residual = 0; // max |t - t_plane| against the contact plane at the center
  double fitted_aspect() const { return fit.radius * fit.radius / std::norm(fit.center); }
};
CircleSample ccircle_sample(const CCircle& C, const HeisMap& B, int n);

struct DeltaValue {
  double value;
  bool infinite;
};
DeltaValue delta_invariant(const HVec3& V1, const HVec3& V2, const HVec3& V3);

// Extended complex number for cross ratios.
struct XC {
  cplx v = 0.0;
  bool inf = false;
  XC() = default;
  XC(cplx z) : v(z) {}
  static XC infinity() {
    XC x;
    x.inf = true;
    return x;
  }
};
cplx cross_ratio(const XC& z1, const XC& z2, const XC& z3, const XC& z4);

// Spinal sphere from its two poles (null Siegel vectors).
struct SpinalSphere {
  Vec3 pole1, pole2;  // Siegel lifts
  Mat3 g;             // Siegel isometry taking the unit sphere with poles (0,+-1) to this one

  static SpinalSphere from_poles(const Vec3& p1, const Vec3& p2);
  // Siegel lifts on a latitude/longitude grid, poles excluded.
  std::vector<Vec3> sample(int nlat, int nlon) const;
  Vec3 spine_polar() const;
};

enum class ArcKind { HarmonicFiber, ConeArc, Axis, Affiliate, Boundary };
const char* arc_kind_name(ArcKind k);

// Sampled R-arc with provenance. Points are ball lifts.
struct RArc {
  std::vector<Vec3> pts;
  ArcKind kind = ArcKind::ConeArc;
  std::string start_on;  // object holding the first sample
  std::string end_on;    // object holding the last sample
};

// Max |contact form| along consecutive chart samples, normalized by step length.
double contact_tangency_residual(const std::vector<HeisPoint>& pts);

}  // namespace crgeo
