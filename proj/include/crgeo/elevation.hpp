#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "crgeo/coords.hpp"
#include "crgeo/curves.hpp"
#include "crgeo/rep.hpp"

namespace crgeo {

// Point of the elevation cylinder. theta is unwound along the curve it came
// from; canonical() reduces it to [0, 2 pi).
struct ElevationPoint {
  double theta = 0;
  double h = 0;
  int winding = 0;  // floor(theta / 2 pi)

  ElevationPoint() = default;
  ElevationPoint(double th, double hh);
  double canonical() const;
};

// Periodic distance between two theta values.
double theta_distance(double a, double b);

struct ElevationCurve {
  std::vector<ElevationPoint> pts;
  std::vector<double> params;  // curve parameter of each sample
  std::string source;
  bool closed = false;
  int winding = 0;             // closed curves: (theta_end - theta_start) / 2 pi
  bool graph = false;          // theta strictly monotone along the samples
  int extrema = 0;             // sign changes of the discrete height slope
  std::vector<int> cusps;      // sample indices
  std::vector<double> cusp_params;

  size_t size() const { return pts.size(); }
  double h_min() const;
  double h_max() const;
  size_t argmin_h() const;
  size_t argmax_h() const;
};

struct SlopeData {
  double sigma = 0;     // dh/dtheta of the image of the contact plane
  bool infinite = false;
  bool remote = false;  // inside S0, i.e. S0 separates x from Q0
  double s0_level = 0;  // (|z|^4 + t^2) / u^2 at x
};

struct FiberArc {
  std::vector<Vec3> pts;  // Siegel lifts, open arc from the lower endpoint to Q0
  Vec3 lower, upper;      // endpoint lifts on E0 - Q0 and on Q0
  double t_lower = 0, t_upper = 0;
  double base = 0;        // s with x = g(s, 0)
  ElevationPoint psi;
};

struct ConeDisk {
  int i = 1, j = 0;
  std::vector<double> phis;            // parameters of the base points on C_i
  std::vector<Vec3> base;              // Siegel lifts of the base points
  std::vector<std::vector<Vec3>> arcs; // Siegel lifts from C_i (first) to Q_j (last)
  std::vector<Vec3> ends;              // last sample of each arc
  std::vector<double> fold_t;          // N3 height of the lower E0 endpoint of each fiber
  int fold_turns = 0;                  // turning points of the folding map
};

struct AxisData {
  int i = 1;
  std::array<Vec3, 2> on_circle;        // C_i n R_i, Siegel
  std::array<ElevationPoint, 2> psi;    // Psi(R_i - E_0)
  std::vector<Vec3> samples;            // R_i, Siegel
};

struct Predicates {
  bool interlaced = false, remote = false, asymmetric = false;
  double interlace_margin = 0;   // min |sin theta| of the two minima, signed by separation
  double theta_min_E2 = 0, theta_min_C1 = 0;
  // Lemma-style remoteness criteria in the N3 chart.
  double aspect = 0, u = 0, r2 = 0, center_im = 0, center_t = 0;
  bool criteria_ok = false;
  double s0_level_max = 0;       // max (|z|^4+t^2)/u^2 over sampled Sigma_12
  double slope_min = 0;          // min sigma over sampled Sigma_12 interiors
  // Three-circle test in the half-plane picture.
  double theta2_offset = 0;      // min | |+-iu - m| - rho | / u
  double extremum_gap = 0;       // distance from extrema of Psi(E2) to the Psi(Q2) endpoints
};

struct VerticalRadius {
  double psi = 0;            // half the height spread of Psi(X)
  double prime = 0;          // half the t-slab width in N3
  double bracket_prime = 0;  // half the t-spread of the lower endpoints [X]
  double eq_log = 0;         // same spread through log((u - x)/(u + x))
};

class Elevation {
 public:
  explicit Elevation(const RepInstance& rep);

  const RepInstance& rep() const { return rep_; }
  const HeisMap& frame() const { return B_; }
  const HeisMap& frame_n2() const { return B2_; }
  double u() const { return B_.u; }
  double c() const { return c_; }
  // C-reflections I_j in N3 Siegel coordinates.
  const Mat3& I(int j) const { return Is_[j]; }
  Vec3 to_siegel(const Vec3& ball) const { return B_.M * ball; }
  // The C1 <-> C2 swapping R-reflection, in N3 Siegel coordinates.
  Vec3 swap_symmetry(const Vec3& X) const;

  // Psi on a Siegel (N3) lift. Throws Pole on E0.
  ElevationPoint psi_siegel(const Vec3& X) const;
  ElevationPoint psi(const HVec3& x) const;

  // g in G(E0, Q0) with Psi(g(s, 0)) = p for s > 0.
  Mat3 fiber_element(const ElevationPoint& p) const;
  FiberArc fiber_through(const Vec3& X, int n = 64) const;
  // Cone arc from X (first sample) to its Q0 endpoint (last sample).
  std::vector<Vec3> cone_arc(const Vec3& X, int n) const;
  // Full R-circle through the fiber of X: g(R u inf), phi in [0, pi).
  std::function<Vec3(double)> fiber_circle(const Vec3& X) const;

  // Siegel parametrization of the C-circle with ball polar P, phi -> f- + e^{i phi} f+.
  std::function<Vec3(double)> circle_param(const Vec3& ball_polar) const;
  // Parameter of a point on that circle.
  double circle_phase(const Vec3& ball_polar, const Vec3& siegel_pt) const;
  std::vector<Vec3> circle_samples(const Vec3& ball_polar, int n, double phi0 = 0) const;

  // Sigma_ij = Sigma(E_j, Q_j; C_i) for (i, j) in {(1,0), (2,0), (1,2), (2,1)}.
  ConeDisk cone_disk(int i, int j, int n_arcs, int n_pts, double phi0 = 0) const;
  AxisData r_axis(int i, int n = 256) const;

  ElevationCurve image(const std::vector<Vec3>& siegel, bool closed, const std::string& source) const;
  ElevationCurve image_param(const std::function<Vec3(double)>& f, double a, double b, int n, bool closed,
                             const std::string& source, bool detect_cusps = false) const;

  SlopeData slope_at(const Vec3& X) const;
  Predicates predicates(int n_curve = 2048, int n_arcs = 64, int n_pts = 48) const;
  VerticalRadius vertical_radius(const std::vector<Vec3>& X) const;
  // Same on a closed curve f over [0, 2 pi): n samples, then every extremum
  // refined by golden-section search on the parameter.
  VerticalRadius vertical_radius(const std::function<Vec3(double)>& f, int n) const;

  // Q_0 as I-images: (i u, 0, sigma), sigma in [-1, 1], then mapped by m.
  std::vector<Vec3> q0_samples(int n) const;

 private:
  RepInstance rep_;
  HeisMap B_, B2_;
  std::array<Mat3, 3> Is_;
  Mat3 F_, Finv_;
  Mat3 swap_;  // M3 M2^{-1}; symmetry is X -> swap_ conj(swap_^{-1} X)
  Mat3 swap_inv_;
  double c_ = 0;
};

// Golden-section search for an extremum of f on [a, b]; sign = +1 for a
// minimum, -1 for a maximum. Returns the argument.
double golden_search(const std::function<double(double)>& f, double a, double b, double sign);

// Cusp detection on a sampled image: indices where the bbox-normalized
// direction reverses (dot < 0) within a 3-sample window, merged.
std::vector<int> cusp_candidates(const std::vector<ElevationPoint>& pts, bool closed);

}  // namespace crgeo
