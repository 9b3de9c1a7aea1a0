#pragma once

#include <vector>

#include "crgeo/types.hpp"

namespace crgeo {

enum class Form { Ball, Siegel };

// Homogeneous vector in C^{2,1} tagged with the form it lives under.
struct HVec3 {
  Vec3 v = Vec3::Zero();
  Form form = Form::Ball;

  HVec3() = default;
  HVec3(const Vec3& vv, Form f = Form::Ball) : v(vv), form(f) {}
  HVec3(cplx a, cplx b, cplx c, Form f = Form::Ball) : form(f) { v << a, b, c; }

  cplx operator[](int i) const { return v(i); }
  // Rescaled so the last nonzero coordinate is 1.
  HVec3 normalized() const;
};

enum class VectorClass { Negative, Null, Positive };

struct Classification {
  VectorClass cls;
  double value;  // <v,v>
  double tol;    // absolute band used
};

struct IsometryMatrix {
  Mat3 m = Mat3::Identity();
  Form form = Form::Ball;

  IsometryMatrix() = default;
  IsometryMatrix(const Mat3& mm, Form f = Form::Ball) : m(mm), form(f) {}

  HVec3 operator()(const HVec3& x) const;
  IsometryMatrix operator*(const IsometryMatrix& o) const;
  // max |M^* J M - J|
  double form_residual() const;
  cplx det() const { return m.determinant(); }
};

struct EigenPair {
  cplx value;
  HVec3 vector;
  double residual;
};

const Mat3& form_matrix(Form f);

// Raw inner product without tag checks.
cplx inner(const Vec3& u, const Vec3& v, Form f);
cplx herm_inner(const HVec3& u, const HVec3& v);

// |<v,v>| < rel_tol * |v|^2 counts as null.
Classification classify(const HVec3& v, double rel_tol = 1e-9);
const char* class_name(VectorClass c);

IsometryMatrix c_reflection(const HVec3& polar);
Mat3 c_reflection_matrix(const Vec3& polar, Form f);

HVec3 polar_of_span(const HVec3& p, const HVec3& q);

// Sorted by |lambda| descending.
std::vector<EigenPair> eigensystem(const IsometryMatrix& m, double tol = 1e-9);

}  // namespace crgeo
