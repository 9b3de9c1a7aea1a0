#pragma once

#include <array>
#include <string>
#include <vector>

#include "crgeo/hermitian.hpp"

namespace crgeo {

enum class RepClass { Loxodromic, Parabolic, Elliptic };
const char* rep_class_name(RepClass c);

// Arc of a C-circle given by its two endpoints and one interior point.
struct ArcDescriptor {
  Vec3 end1 = Vec3::Zero();
  Vec3 end2 = Vec3::Zero();
  Vec3 interior = Vec3::Zero();
  bool degenerate = false;  // endpoints coincide (parabolic limit)
};

// Everything determined by the parameter s. All vectors are ball-model lifts.
struct RepInstance {
  double s = 0;
  cplx beta, A1, A2;
  std::array<Vec3, 3> p;   // p0 = C1 n C2, p1 = C2 n C0, p2 = C0 n C1
  std::array<Mat3, 3> I;   // C-reflections in C0, C1, C2
  Mat3 g0;                 // I1 I0 I2
  std::array<cplx, 3> eigenvalues;
  cplx e, lambda;
  double x = 0;
  cplx a, b;
  Vec3 qa, qb;             // (a, conj a, 1), (b, conj b, 1): q0 and q0'
  double k = 0;            // <qa, qb>, real
  std::array<Vec3, 3> Cp;  // polars of C0, C1, C2
  std::array<Vec3, 3> Ep;  // polars of E0, E1 = I2 E0, E2 = I1 E0
  std::array<ArcDescriptor, 3> Q;  // Q0, Q1 = I2 Q0, Q2 = I1 Q0
  double r = 0;            // harmonic parameter; +inf at the parabolic endpoint
  Vec3 Pr, Pmr;            // r qa + i qb, -r qa + i qb
  cplx c, d;               // Q0 endpoints (c, d) and (conj d, conj c)
  RepClass cls = RepClass::Loxodromic;
  bool certified = false;  // s within the certified interval
  bool elliptic_warning = false;
  std::vector<std::string> warnings;

  bool q0_degenerate() const { return Q[0].degenerate; }
};

RepInstance build_rep(double s);

struct EigenDatum {
  cplx e;
  cplx lambda;
  cplx raw_eigenvalue;
  double shape_residual;
};
EigenDatum eigen_e(const RepInstance& rep);

double x_of(cplx e);
double x_of(const RepInstance& rep);

std::pair<cplx, cplx> clifford_points(cplx e);
std::pair<cplx, cplx> clifford_points(const RepInstance& rep);

struct Q0Endpoints {
  cplx c, d;
  Vec3 end1, end2;
  std::array<cplx, 3> cubic_roots;
  double match_residual;
};
Q0Endpoints q0_endpoints(const RepInstance& rep);

struct HarmonicR {
  double r;
  bool infinite;
  Vec3 Pr, Pmr;
};
HarmonicR r_harmonic(const RepInstance& rep);

struct ScalarEntry {
  std::string name;
  double direct;
  double closed;
  double tol;
  bool sign_conflict = false;  // published closed form has the opposite sign
  double error() const { return std::abs(direct - closed); }
  bool ok() const { return error() <= tol; }
};

struct ScalarPanel {
  double s = 0, x = 0;
  std::vector<ScalarEntry> entries;
  const ScalarEntry& get(const std::string& name) const;
  double max_error() const;
  bool all_ok() const;
};

// Throws IdentityViolation if any entry disagrees beyond 1e-7 and strict is set.
ScalarPanel scalar_panel(const RepInstance& rep, bool strict = true);

// (1 - 2Re(a conj b))(1 + 2Re(a conj beta)) / (1 - 2Re(b conj beta))
double item3_quantity(const RepInstance& rep);

}  // namespace crgeo
