#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "crgeo/hermitian.hpp"

namespace crgeo {

struct RepInstance;

struct HeisPoint {
  cplx z = 0.0;
  double t = 0.0;
  bool inf = false;

  HeisPoint() = default;
  HeisPoint(cplx zz, double tt) : z(zz), t(tt) {}
  static HeisPoint infinity() {
    HeisPoint p;
    p.inf = true;
    return p;
  }
};

// Cayley transfer K with K^* J_Siegel K = J_Ball.
const Mat3& cayley();
HVec3 ball_to_siegel(const HVec3& v);
HVec3 siegel_to_ball(const HVec3& v);

// mu(w1, w2) = (w2 / sqrt2, Im w1) on the affine chart w3 = 1; (1,0,0) is infinity.
HeisPoint heis_chart(const Vec3& siegel);
HeisPoint heis_chart(const HVec3& siegel);
Vec3 heis_lift(const HeisPoint& p);

HeisPoint heis_mul(const HeisPoint& p, const HeisPoint& q);
HeisPoint heis_inv(const HeisPoint& p);

// Siegel matrices of Heisenberg similarities.
Mat3 heis_translation(const HeisPoint& g);  // acts as p -> heis_mul(p, g)
Mat3 heis_rotation(double theta);           // z -> e^{i theta} z
Mat3 heis_dilation(double r);               // (z,t) -> (r z, r^2 t)

enum class NormalizationKind { N1_StandardPair, N2_SwapSymmetric, N3_AxisUnitRadius };
const char* normalization_name(NormalizationKind k);
NormalizationKind normalization_from_name(const std::string& s);

// Heisenberg stereographic projection: M takes ball lifts to Siegel lifts.
struct HeisMap {
  Mat3 M = Mat3::Identity();
  Mat3 Minv = Mat3::Identity();
  NormalizationKind kind = NormalizationKind::N1_StandardPair;
  double u = 0;          // |t| of the Q0 endpoints (1 for N1)
  double residual = 0;   // worst constraint residual at construction

  Vec3 to_siegel(const Vec3& ball) const { return M * ball; }
  Vec3 to_ball(const Vec3& siegel) const { return Minv * siegel; }
  HeisPoint apply(const Vec3& ball) const { return heis_chart(Vec3(M * ball)); }
  Vec3 lift(const HeisPoint& p) const { return Minv * heis_lift(p); }
  // Conjugate a ball-model matrix into Siegel coordinates of this chart.
  Mat3 conj(const Mat3& g) const { return M * g * Minv; }
};

HeisMap build_normalization(NormalizationKind kind, const RepInstance& rep);

// Circle data of a C-circle from its Siegel polar normalized to X3 = 1:
// center (zeta, v) and squared projected radius r2.
struct CircleData {
  cplx center_z;
  double center_t;
  double r2;
  bool vertical;  // polar has X3 = 0: the circle passes through infinity
  double aspect() const { return r2 / std::norm(center_z); }
};
CircleData circle_from_polar(const Vec3& siegel_polar);

// Contact plane: kernel of dt + 2(x dy - y dx) at p.
struct ContactPlane {
  HeisPoint p;
  std::array<Eigen::Vector3d, 2> span;  // (dx, dy, dt)
  Eigen::Vector3d normal;
};
ContactPlane contact_plane(const HeisPoint& p);
double contact_form(const HeisPoint& p, const Eigen::Vector3d& dir);

// Signed area of the projected polygon (closed by its chord).
double projected_signed_area(const std::vector<HeisPoint>& pts);
// Integrate dt = -2(x dy - y dx) along the projected loop starting at t0.
std::vector<HeisPoint> contact_lift(const std::vector<cplx>& zs, double t0);

// Orthogonal projection onto the complex slice bounded by E0, disk model.
struct SlicePoint {
  cplx w;
};
struct SliceFrame {
  Vec3 E0;         // polar
  Vec3 fplus;      // <f+,f+> = 1
  Vec3 fminus;     // <f-,f-> = -1
  Form form = Form::Ball;
};
SliceFrame slice_frame(const HVec3& E0_polar);
SlicePoint eta_project(const HVec3& x, const HVec3& E0_polar);
SlicePoint eta_project(const HVec3& x, const SliceFrame& F);
// Half-plane variant for an N1/N3 chart: eta(z,t) = -|z|^2 + i t, identity on E0.
cplx eta_halfplane(const Vec3& ball, const HeisMap& B);
double hyperbolic_distance_disk(cplx w1, cplx w2);

}  // namespace crgeo
