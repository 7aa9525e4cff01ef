#pragma once

#include "asl/fields.hpp"

namespace asl {

/// det of the bordered matrix [[psi_ss, psi_st, psi_s],
///                             [psi_st, psi_tt, psi_t],
///                             [psi_s,  psi_t,  3 psi]].
double bordered_det(double val, Vec2 grad, Sym2 hess);

/// Cofactor expansion of the same determinant,
/// 3 psi det Hess(psi) - (psi_s^2 psi_tt - 2 psi_s psi_t psi_st + psi_t^2 psi_ss).
double bordered_det_expanded(double val, Vec2 grad, Sym2 hess);

/// det Hess h - e^{-h}
double residual_eq21(const Field2& h, Vec2 xy);

/// det [[H_vv - u^2/3, H_uv + uv/3], [., H_uu - v^2/3]] - (H - u H_u - v H_v)
double residual_eq211(const Field2& H, Vec2 uv);

/// bordered determinant of psi plus 3
double residual_eq13(const Field2& psi, Vec2 st);

/// (-phi)^(2+k) det Hess phi - 1; phi must be negative at the point.
double residual_eq11(const Field2& phi, double k, Vec2 st);

/// u H_u + v H_v - H - psi for the closed forms (j = 1, 2); vanishes
/// identically.
double legendre_identity_gap(int j, Vec2 uv);

} // namespace asl
