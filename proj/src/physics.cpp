#include "jpa/physics.hpp"

#include <cmath>

#include "jpa/constants.hpp"
#include "jpa/errors.hpp"

namespace jpa {

double AmplifierParams::tau() const { return b_j * std::sqrt(g0); }

AmplifierParams AmplifierParams::from_tau(double omega0, double g0, double tau,
                                          double delta, double b_meas) {
  if (!(g0 > 0.0)) throw ValidationError("amplifier: g0 must be > 0");
  if (!(tau > 0.0)) throw ValidationError("amplifier: tau must be > 0");
  AmplifierParams p{omega0, g0, tau / std::sqrt(g0), delta, b_meas};
  p.validate();
  return p;
}

AmplifierParams AmplifierParams::with_signal_gain(double gain_at_signal) const {
  validate();
  if (!(gain_at_signal > 1.0))
    throw ValidationError("amplifier: gain at signal frequency must be > 1");
  const double t = tau();
  const double excess = gain_at_signal - 1.0;
  const double denom = t * t - delta * delta * excess;
  if (!(denom > 0.0))
    throw ValidationError(
        "amplifier: requested signal gain not reachable at this detuning; "
        "needs gain - 1 < (tau/delta)^2");
  const double new_g0 = t * t * excess / denom;
  return from_tau(omega0, new_g0, t, delta, b_meas);
}

void AmplifierParams::validate() const {
  if (!(omega0 > 0.0)) throw ValidationError("amplifier: omega0 must be > 0");
  if (!(g0 > 0.0)) throw ValidationError("amplifier: g0 must be > 0");
  if (!(b_j > 0.0)) throw ValidationError("amplifier: b_j must be > 0");
  if (!(b_meas > 0.0)) throw ValidationError("amplifier: b_meas must be > 0");
  if (!(delta >= 0.0))
    throw ValidationError("amplifier: delta must be >= 0 (signal above resonance)");
}

void SignalSpec::validate() const {
  if (!(center > 0.0)) throw ValidationError("signal: center frequency must be > 0");
  if (!(b_s >= 0.0)) throw ValidationError("signal: b_s must be >= 0");
  if (kind == Kind::coherent && !(n_in >= 0.0))
    throw ValidationError("signal: coherent n_in must be >= 0");
  if (kind == Kind::thermal && !(temperature > 0.0))
    throw ValidationError("signal: thermal temperature must be > 0");
}

void NoiseBudget::validate() const {
  if (!(n_hemt >= 0.0)) throw ValidationError("noise: n_hemt must be >= 0");
  if (!(n_idler >= 0.5))
    throw ValidationError("noise: n_idler must be >= 0.5 (vacuum floor)");
  if (!(pump.n_jprime >= 0.0)) throw ValidationError("noise: n_jprime must be >= 0");
}

double lorentzian_gain(const AmplifierParams& p, double omega) {
  const double x = omega - p.omega0;
  return 1.0 + p.g0 * p.b_j * p.b_j / (p.b_j * p.b_j + x * x);
}

double quantum_efficiency(double n_f) {
  if (!(n_f >= 0.0)) throw ValidationError("quantum_efficiency: n_f must be >= 0");
  return 1.0 / (1.0 + 2.0 * n_f);
}

double sql_added_noise(double g_n, double n_i) {
  if (!(g_n >= 1.0)) throw ValidationError("sql_added_noise: gain must be >= 1");
  if (!(n_i >= 0.0)) throw ValidationError("sql_added_noise: n_i must be >= 0");
  return n_i * (g_n - 1.0) / g_n;
}

double sql_efficiency_bound(double g_n) {
  if (!(g_n >= 1.0)) throw ValidationError("sql_efficiency_bound: gain must be >= 1");
  return g_n / (2.0 * g_n - 1.0);
}

double broadband_gain(double g_n) {
  if (!(g_n >= 1.0)) throw ValidationError("broadband_gain: gain must be >= 1");
  return 2.0 * g_n - 1.0;
}

double planck_occupation(double frequency, double temperature) {
  if (!(frequency > 0.0)) throw ValidationError("planck_occupation: frequency must be > 0");
  if (!(temperature > 0.0)) throw ValidationError("planck_occupation: temperature must be > 0");
  const double x = constants::planck_h * frequency / (constants::boltzmann_k * temperature);
  const double n = 1.0 / std::expm1(x);
  return std::isnormal(n) ? n : 0.0;
}

BandwidthThresholds bandwidth_thresholds(const AmplifierParams& p) {
  p.validate();
  BandwidthThresholds t;
  const double raw_b1 = 2.0 * p.delta - p.b_meas;
  t.idler_in_measurement_band = raw_b1 < 0.0;
  t.b1 = std::max(raw_b1, 0.0);
  t.b2 = 2.0 * p.delta + p.b_meas;
  return t;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double g) {
  if (!(g > 0.0)) throw ValidationError("linear_to_db: gain must be > 0");
  return 10.0 * std::log10(g);
}

}  // namespace jpa
