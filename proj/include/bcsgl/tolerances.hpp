#pragma once

// Central tolerance table shared by the verification suite and the acceptance
// test. Changing a value here changes what "pass" means everywhere.

namespace bcsgl::tol {

inline constexpr double resolvent_l1 = 1e-6;       // closed form vs quadrature, relative
inline constexpr double matsubara = 1e-8;          // truncated sum vs closed form, absolute
inline constexpr double matsubara_tail = 1e-9;     // certified truncation bound used for the sums
inline constexpr double contour = 1e-6;            // contour representation vs K_T, relative
inline constexpr double contour_radius = 50.0;
inline constexpr double lt_diagonal = 1e-12;       // L_T(p, p) K_T(p^2 - mu) - 1
inline constexpr double kt_bound = 1e-14;          // K_T >= max(2T, |x|), relative slack

inline constexpr double eta_residual = 1e-10;
inline constexpr double gap_residual = 1e-8;
inline constexpr double alpha_norm = 1e-10;
inline constexpr double ground_energy = 1e-8;      // |e0| of K_Tc - V
inline constexpr double psd = 1e-10;               // lowest Birman-Schwinger eigenvalue >= -psd
inline constexpr double tc_refinement = 1e-5;      // relative change under grid doubling
inline constexpr double moment_tail = 1e-10;

inline constexpr double lambda2_fd = 1e-5;
inline constexpr double lambda0_hessian = 1e-4;
inline constexpr double lambda0_cross = 1e-8;
inline constexpr double lambda3_routes = 1e-8;
inline constexpr double coeff_refinement = 1e-5;

inline constexpr double landau_lowest = 1e-2;      // |lambda0 - 2| at B = 1
inline constexpr double landau_order = 0.2;        // |observed order - 2|
inline constexpr double hermitian = 0.0;
inline constexpr double gauge_shift = 1e-10;
inline constexpr double translation = 1e-12;
inline constexpr double gradient_fd = 1e-6;
inline constexpr double phase_invariance = 1e-12;
inline constexpr double gl_zero = 1e-6;            // |E| for D <= Dc
inline constexpr double gl_negative = -1e-6;       // E(1.1 Dc) must lie below this
inline constexpr double gl_exponent = 0.1;
inline constexpr double gl_scaling = 1e-3;
inline constexpr double gl_rescaled = 1e-10;

}  // namespace bcsgl::tol
