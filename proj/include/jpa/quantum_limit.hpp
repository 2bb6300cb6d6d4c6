#pragma once

#include <Eigen/Core>
#include <vector>

#include "jpa/physics.hpp"

// Bandwidth-dependent quantum limit on the added noise of a nondegenerate
// parametric amplifier. Two independent routes are provided: the arctangent
// closed form (valid for g0 >> 1) and an adaptive quadrature of the underlying
// bound integral with the exact Lorentzian gain, which serves as the oracle.
namespace jpa {

struct LimitQuery {
  AmplifierParams params;
  double b_s = 0.0;  // single-side signal bandwidth [Hz]

  // Reduced variables: bandwidths in units of the gain-bandwidth product.
  double beta() const { return params.b_meas / params.tau(); }
  double beta_s() const { return b_s / params.tau(); }
  double delta_r() const { return params.delta / params.tau(); }

  void validate() const;
};

enum class BandRegime { below_B, narrowband, transition, broadband };

const char* to_string(BandRegime r);

struct LimitCurve {
  Eigen::ArrayXd b_s_grid;
  Eigen::ArrayXd n_ql;
  Eigen::ArrayXd eta_ql;
  std::vector<BandRegime> regime;
  Eigen::ArrayXd n_ql_oracle;  // size 0 unless requested
};

// 1 iff omega lies in the idler image band [2*omega0 - omega_s - b_s,
// 2*omega0 - omega_s + b_s] (closed interval).
int idler_indicator(double omega, const LimitQuery& q);

// Closed-form n_ql. Continuous across the b_s = B, b1, b2 boundaries, exactly
// zero for b_s >= b2, and equal to the analytic branch-1 limit at b_s = 0.
// Every arctangent is evaluated as atan2(numerator, denominator) mapped to
// [0, pi), which keeps the expression single-valued where the printed
// denominators change sign.
double nql_closed_form(const LimitQuery& q);

// The g0 >> 1 assumption behind the closed form; callers may warn below this.
bool closed_form_high_gain(const AmplifierParams& p);

// Independent oracle: adaptive quadrature of the bound integral with the
// exact finite-g0 gain profile, absolute tolerance 1e-9 photons. Panels are
// seeded at the idler-indicator discontinuities. Throws NumericError with the
// achieved error estimate if refinement is exhausted.
double nql_quadrature(const LimitQuery& q, double abs_tol = 1e-9);

BandRegime classify_regime(const AmplifierParams& p, double b_s);

// Sweeps nql_closed_form over a strictly increasing bandwidth grid.
LimitCurve limit_curve(const AmplifierParams& p, const Eigen::ArrayXd& b_s_grid,
                       bool with_oracle = false);

}  // namespace jpa
