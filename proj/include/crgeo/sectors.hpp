#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crgeo/elevation.hpp"

namespace crgeo {

// Psi(C) for a C-circle linking E0, as a function of theta.
class GraphFunction {
 public:
  GraphFunction() = default;
  GraphFunction(const Elevation& E, std::function<Vec3(double)> f, int n, double phi0 = 0, std::string source = "");

  // Height over theta (any real; reduced periodically).
  double operator()(double theta) const;
  // Curve parameter whose image has this theta.
  double param_at(double theta) const;
  const ElevationCurve& curve() const { return curve_; }
  double theta_of_min() const { return theta_min_; }
  double theta_of_max() const { return theta_max_; }
  double h_min() const { return h_min_; }
  double h_max() const { return h_max_; }
  Vec3 point(double phi) const { return f_(phi); }

 private:
  double solve(double theta) const;
  const Elevation* E_ = nullptr;
  std::function<Vec3(double)> f_;
  ElevationCurve curve_;
  std::vector<double> th_, ph_;  // increasing theta over one period, matching parameters
  double theta_min_ = 0, theta_max_ = 0, h_min_ = 0, h_max_ = 0;
};

struct CrossingCluster {
  double theta = 0, h = 0;  // canonical theta
  int hits = 0;
  bool contact = false;     // only near-contacts, no transverse crossing
};

struct CrossingOptions {
  double contact_tol = 1e-9;    // segment distance counted as contact
  double merge_radius = 1e-3;   // cluster radius in (theta, h)
  int trim = 0;                 // segments skipped at both ends of open curves
  bool contacts = true;
};

// Intersections between two families of curves on the cylinder.
std::vector<CrossingCluster> find_crossings(const std::vector<const ElevationCurve*>& A,
                                            const std::vector<const ElevationCurve*>& B, const CrossingOptions& opt);

struct SectorRegion {
  std::string name;
  bool top = true;         // above the graph, closed by the line through the highest point of Psi(Q)
  double h_edge = 0;
  double theta_lo = 0, theta_hi = 0;  // unwound, theta_lo < theta_hi
  double theta_extremum = 0;          // min of the graph (top) or max (bottom) inside
  double closure_gap = 0;
  std::vector<std::pair<std::string, ElevationPoint>> marked;

  bool theta_inside(double theta, double tol = 0) const;
  // theta lifted into [theta_lo - pi, theta_lo + 2 pi - pi) near the interval.
  double lift(double theta) const;
};

struct ArcCheck {
  double min_inside = 0;   // min over interior samples of the signed distance to the boundary
  int graph_crossings = 0; // sign changes of h - psi(theta) along the interior
  double min_graph_gap = 0;
  bool rising = true;      // height monotone along the arc
};

struct PictureConfig {
  int n_curve = 2048;
  int n_arcs = 96;
  int n_pts = 48;
};

struct PictureData {
  GraphFunction psi1, psi2;
  ElevationCurve E2, Q21, Q12;
  ConeDisk S12, S21;
  std::vector<ElevationCurve> arcs12, arcs21;
  std::vector<int> region12, region21;  // index into regions12 / regions21
  std::array<SectorRegion, 2> regions12, regions21;  // [top, bottom]
  AxisData axis1, axis2;
  ElevationPoint p0;
  double u_prime = 0;  // Q01 endpoints at (0, +-u')
  std::vector<Vec3> Q01, Q02;
};

PictureData sector_regions(const Elevation& E, const PictureConfig& cfg = {});

SectorRegion build_sector(const GraphFunction& g, const ElevationCurve& Q, bool top, const std::string& name);
ArcCheck check_arc(const ElevationCurve& arc, const GraphFunction& g, const SectorRegion& R);

// Residual of the equal-height pairing: arcs starting at height level on
// both sides of the extremum end at one point of Psi(Q).
double pairing_residual(const Elevation& E, const PictureData& P, double frac);

}  // namespace crgeo
