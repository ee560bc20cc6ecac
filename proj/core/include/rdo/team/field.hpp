#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace rdo {

inline constexpr double kMu0 = 4e-7 * std::numbers::pi;

/// Circular turn of rectangular cross-section [R1, R2] x [Z1, Z2] carrying
/// current I (A). Lengths in metres.
struct Turn {
  double r_inner = 0.0;
  double r_outer = 0.0;
  double z_lower = 0.0;
  double z_upper = 0.0;
  double current = 0.0;

  void validate() const;
  double thickness() const noexcept { return r_outer - r_inner; }
  // True when (|R|, Z) lies in the closed conductor cross-section.
  bool contains(double R, double Z) const noexcept;
  // Distance from (|R|, Z) to the cross-section in the meridian plane.
  double distance(double R, double Z) const noexcept;
};

struct FieldValue {
  double br = 0.0;
  double bz = 0.0;

  double magnitude() const noexcept { return std::hypot(br, bz); }
};

/// Flux density of one turn at P(R, Z):
///   B_r = C [g(R2,R,Z2-Z) - g(R2,R,Z1-Z) - g(R1,R,Z2-Z) + g(R1,R,Z1-Z)]
///   B_z = C [h(R2,R,Z2-Z) - h(R2,R,Z1-Z) - h(R1,R,Z2-Z) + h(R1,R,Z1-Z)]
///   C   = mu0 I / (4 pi (Z2 - Z1) ln(R2/R1))
/// with g = int ln(Ri - R cos(phi) + d) cos(phi), h = -int ln(a + d) over
/// [0, 2 pi], a = Zj - Z, d = sqrt(Ri^2 + R^2 - 2 Ri R cos(phi) + a^2),
/// integrated by an order-q Gauss-Legendre rule. On the axis B_r is exactly 0.
/// Throws DomainError for points inside the cross-section.
FieldValue turn_field(const Turn& turn, double R, double Z, std::size_t order = 64);

struct FieldOptions {
  std::size_t order = 64;
  // Double the order for turns closer than one turn thickness to the point.
  bool refine_near = true;
};

// Component-wise superposition over turns.
FieldValue total_field(std::span<const Turn> turns, double R, double Z, const FieldOptions& opt = {});

// Building blocks of turn_field, exposed for testing.
double g_term(double ri, double R, double a, std::size_t order);
double h_term(double ri, double R, double a, std::size_t order);

} // namespace rdo
