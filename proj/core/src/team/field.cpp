#include "rdo/team/field.hpp"

#include <algorithm>
#include <sstream>

#include "rdo/errors.hpp"
#include "rdo/team/quadrature.hpp"

namespace rdo {

void Turn::validate() const {
  if (!(r_inner > 0.0 && r_inner < r_outer)) throw DomainError("Turn: need 0 < R1 < R2");
  if (!(z_lower < z_upper)) throw DomainError("Turn: need Z1 < Z2");
}

bool Turn::contains(double R, double Z) const noexcept {
  const double r = std::abs(R);
  return r >= r_inner && r <= r_outer && Z >= z_lower && Z <= z_upper;
}

double Turn::distance(double R, double Z) const noexcept {
  const double r = std::abs(R);
  const double dr = std::max({r_inner - r, 0.0, r - r_outer});
  const double dz = std::max({z_lower - Z, 0.0, Z - z_upper});
  return std::hypot(dr, dz);
}

double g_term(double ri, double R, double a, std::size_t order) {
  return quad_phi(
      [&](double phi) {
        const double c = std::cos(phi);
        const double b = ri - R * c;
        const double d = std::sqrt(ri * ri + R * R - 2.0 * ri * R * c + a * a);
        // b + d loses all digits when b < 0 and |b| ~ d; use the conjugate form.
        const double s = std::sin(phi);
        const double arg = b >= 0.0 ? b + d : (R * R * s * s + a * a) / (d - b);
        return std::log(arg) * c;
      },
      order);
}

double h_term(double ri, double R, double a, std::size_t order) {
  return -quad_phi(
      [&](double phi) {
        const double rho2 = ri * ri + R * R - 2.0 * ri * R * std::cos(phi);
        const double d = std::sqrt(rho2 + a * a);
        const double arg = a >= 0.0 ? a + d : rho2 / (d - a);
        return std::log(arg);
      },
      order);
}

namespace {

// ln(A(a2) / A(a1)) for A(a) = a + sqrt(rho2 + a^2), a1 < a2, computed
// without forming the two logarithms when they nearly cancel.
double log_ratio_axial(double rho2, double a1, double a2) {
  const double d1 = std::sqrt(rho2 + a1 * a1);
  const double d2 = std::sqrt(rho2 + a2 * a2);
  const double q = (a1 + a2) / (d1 + d2);
  if (a1 >= 0.0) return std::log1p((a2 - a1) * (1.0 + q) / (a1 + d1));
  if (a2 <= 0.0) return -std::log1p((a2 - a1) * (q - 1.0) / (d1 - a1));
  return std::log(a2 + d2) - std::log(rho2 / (d1 - a1));
}

// ln(G(a2) / G(a1)) for G(a) = b + sqrt(rho2 + a^2), b = ri - R cos(phi).
double log_ratio_radial(double b, double rho2, double R2s2, double a1, double a2) {
  const double d1 = std::sqrt(rho2 + a1 * a1);
  const double d2 = std::sqrt(rho2 + a2 * a2);
  const double g1 = b >= 0.0 ? b + d1 : (R2s2 + a1 * a1) / (d1 - b);
  return std::log1p((a2 - a1) * (a2 + a1) / (d1 + d2) / g1);
}

} // namespace

FieldValue turn_field(const Turn& turn, double R, double Z, std::size_t order) {
  turn.validate();
  if (turn.contains(R, Z)) {
    std::ostringstream os;
    os << "turn_field: point (" << R << ", " << Z << ") lies inside the conductor cross-section";
    throw DomainError(os.str());
  }
  const double r1 = turn.r_inner;
  const double r2 = turn.r_outer;
  const double a2 = turn.z_upper - Z;
  const double a1 = turn.z_lower - Z;
  const double C = kMu0 * turn.current /
                   (4.0 * std::numbers::pi * (turn.z_upper - turn.z_lower) * std::log(r2 / r1));

  // The four g (h) terms are combined under one integral, axial pairs first,
  // so the cancellation between them happens per node.
  auto rho2 = [&](double ri, double c) { return ri * ri + R * R - 2.0 * ri * R * c; };
  FieldValue b;
  if (R != 0.0) {
    b.br = C * quad_phi(
                   [&](double phi) {
                     const double c = std::cos(phi);
                     const double s = std::sin(phi);
                     const double R2s2 = R * R * s * s;
                     return (log_ratio_radial(r2 - R * c, rho2(r2, c), R2s2, a1, a2) -
                             log_ratio_radial(r1 - R * c, rho2(r1, c), R2s2, a1, a2)) *
                            c;
                   },
                   order);
  }
  b.bz = -C * quad_phi(
                  [&](double phi) {
                    const double c = std::cos(phi);
                    return log_ratio_axial(rho2(r2, c), a1, a2) - log_ratio_axial(rho2(r1, c), a1, a2);
                  },
                  order);
  return b;
}

FieldValue total_field(std::span<const Turn> turns, double R, double Z, const FieldOptions& opt) {
  FieldValue sum;
  for (const auto& t : turns) {
    std::size_t order = opt.order;
    if (opt.refine_near && t.distance(R, Z) < t.thickness()) order *= 2;
    const auto b = turn_field(t, R, Z, order);
    sum.br += b.br;
    sum.bz += b.bz;
  }
  return sum;
}

} // namespace rdo
