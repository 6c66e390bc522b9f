#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cap4/pfister.hpp"

namespace cap4 {

enum class ShapeKind { Orthogonal, Unitary, Symplectic, Generic };
std::string to_string(ShapeKind k);

// read from the tensor factors of an instance, never from raw structure constants
struct Cap4Shape {
  ShapeKind kind = ShapeKind::Generic;
  InvolutionPtr B;  // the degree-4 orthogonal part
  std::optional<Fe> d;
  std::optional<Fe> z;                      // Z = F[t]/(t^2 - z)
  std::optional<std::pair<Fe, Fe>> quat;    // Q = (a, b)
};

Cap4Shape recognize_shape(const std::vector<InvolutionPtr>& factors);

// <1, -d>; characteristic not 2
QuadForm formula_orthogonal(const Involution& tau);
// <1, -d> (x) N_Z
QuadForm formula_unitary(const Cap4Shape& shape);
// <1, -d> (x) Nrd_Q
QuadForm formula_symplectic(const Cap4Shape& shape);
QuadForm norm_form_quaternion(const FieldPtr& F, const Fe& a, const Fe& b);

struct UnitaryW {
  Vec w;
  Fe nrd;    // N_{K/F}(w^2)
  Fe delta;  // N = F[t]/(t^2 - delta)
  QuadForm form;
};
// w symmetric invertible with w l = gamma1(l) w on L; form <1, -Nrd(w)> (x) N_N
std::optional<UnitaryW> formula_unitary_w(const Involution& s, const BiquadraticL& L, int height_bound, uint64_t seed);

// binary norm form of F + F e
QuadForm quadratic_norm_form(const Algebra& A, const Vec& e);
// whether the norm form of E = F[e] represents the discriminant of tau
bool neat_norm_represents_disc(const Involution& tau, const Vec& e);

struct TwoFoldShape {
  bool ok = false;
  bool represents_one = false;
  std::optional<std::pair<Fe, Fe>> quaternion;
  PfisterForm pfister;
};
TwoFoldShape unitary_two_fold_shape(const Involution& s, int height_bound = 200);

struct Crosscheck {
  Cap4Shape shape;
  std::optional<QuadForm> formula;
  std::optional<UnitaryW> w_variant;
  QuadForm pipeline;
  bool agree = false;
  std::string detail;
};
Crosscheck crosscheck(const std::vector<InvolutionPtr>& factors, const Involution& s, const PfisterOptions& opt = {});

}  // namespace cap4
