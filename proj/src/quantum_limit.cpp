#include "jpa/quantum_limit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jpa/errors.hpp"
#include "jpa/quadrature.hpp"

namespace jpa {
namespace {

// arctan(a) - arctan(b) for a >= b, evaluated branch-safely in [0, pi).
double atan_diff(double a, double b) { return std::atan2(a - b, 1.0 + a * b); }

}  // namespace

void LimitQuery::validate() const {
  params.validate();
  if (!(b_s >= 0.0)) throw ValidationError("limit query: b_s must be >= 0");
}

const char* to_string(BandRegime r) {
  switch (r) {
    case BandRegime::below_B: return "below_B";
    case BandRegime::narrowband: return "narrowband";
    case BandRegime::transition: return "transition";
    case BandRegime::broadband: return "broadband";
  }
  return "?";
}

int idler_indicator(double omega, const LimitQuery& q) {
  q.validate();
  const double center = 2.0 * q.params.omega0 - q.params.omega_signal();
  return std::abs(omega - center) <= q.b_s ? 1 : 0;
}

bool closed_form_high_gain(const AmplifierParams& p) { return p.g0 >= 100.0; }

double nql_closed_form(const LimitQuery& q) {
  q.validate();
  const double d = q.delta_r();
  const double bs = q.beta_s();
  if (bs == 0.0) return 0.5 / (1.0 + d * d);  // branch-1 limit of an ideal tone

  // Integration half-width in reduced units; measurement band caps the range.
  const double w = std::min(bs, q.beta());

  // Signal-band integral of the normalized Lorentzian tail, minus the part
  // shadowed by the idler image band [-d-bs, -d+bs].
  const double lo = d - w;
  const double hi = d + w;
  const double shadow_hi = std::min(hi, bs - d);
  const double signal = atan_diff(hi, lo);
  const double shadow = shadow_hi > lo ? atan_diff(shadow_hi, lo) : 0.0;
  return std::max(signal - shadow, 0.0) / (4.0 * w);
}

double nql_quadrature(const LimitQuery& q, double abs_tol) {
  q.validate();
  const AmplifierParams& p = q.params;
  const double ws = p.omega_signal();
  if (q.b_s == 0.0)  // analytic tone limit, same convention as the closed form
    return 0.5 * (1.0 - 1.0 / lorentzian_gain(p, ws));

  const double w = std::min(q.b_s, p.b_meas);
  const double a = ws - w, b = ws + w;
  const double idler_lo = 2.0 * p.omega0 - ws - q.b_s;
  const double idler_hi = 2.0 * p.omega0 - ws + q.b_s;

  const auto integrand = [&](double omega) {
    const double in_idler = (omega >= idler_lo && omega <= idler_hi) ? 1.0 : 0.0;
    return (1.0 - in_idler) * (1.0 - 1.0 / lorentzian_gain(p, omega));
  };

  std::vector<double> seeds;
  for (double s : {idler_lo, idler_hi})
    if (s > a && s < b) seeds.push_back(s);

  const auto res = quad::integrate_adaptive(integrand, a, b, abs_tol * 4.0 * w, seeds);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "nql_quadrature: refinement exhausted, achieved error estimate "
        << res.error_estimate / (4.0 * w) << " photons (tolerance " << abs_tol << ")";
    throw NumericError(msg.str());
  }
  return res.value / (4.0 * w);
}

BandRegime classify_regime(const AmplifierParams& p, double b_s) {
  const auto th = bandwidth_thresholds(p);
  if (b_s >= th.b2) return BandRegime::broadband;
  if (b_s > th.b1) return BandRegime::transition;
  if (b_s < p.b_meas) return BandRegime::below_B;
  return BandRegime::narrowband;
}

LimitCurve limit_curve(const AmplifierParams& p, const Eigen::ArrayXd& b_s_grid,
                       bool with_oracle) {
  p.validate();
  if (b_s_grid.size() == 0) throw ValidationError("limit_curve: empty bandwidth grid");
  for (Eigen::Index i = 0; i < b_s_grid.size(); ++i) {
    if (!(b_s_grid[i] >= 0.0)) throw ValidationError("limit_curve: grid must be non-negative");
    if (i > 0 && !(b_s_grid[i] > b_s_grid[i - 1]))
      throw ValidationError("limit_curve: grid must be strictly increasing");
  }

  LimitCurve curve;
  curve.b_s_grid = b_s_grid;
  curve.n_ql.resize(b_s_grid.size());
  curve.eta_ql.resize(b_s_grid.size());
  curve.regime.reserve(b_s_grid.size());
  if (with_oracle) curve.n_ql_oracle.resize(b_s_grid.size());

  for (Eigen::Index i = 0; i < b_s_grid.size(); ++i) {
    const LimitQuery query{p, b_s_grid[i]};
    curve.n_ql[i] = nql_closed_form(query);
    curve.eta_ql[i] = quantum_efficiency(curve.n_ql[i]);
    curve.regime.push_back(classify_regime(p, b_s_grid[i]));
    if (with_oracle) curve.n_ql_oracle[i] = nql_quadrature(query);
  }
  return curve;
}

}  // namespace jpa
