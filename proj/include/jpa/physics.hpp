#pragma once

#include <string>

// Elementary amplifier-chain formulas and the parameter types shared by the
// rest of the library. Conventions: ordinary frequencies in Hz everywhere,
// power gains linear (dB only at I/O boundaries), photon numbers per mode.
namespace jpa {

// Lorentzian parametric amplifier profile G(w) = 1 + g0*b_j^2/(b_j^2+(w-w0)^2).
// The gain-bandwidth product tau = b_j*sqrt(g0) is the invariant scale of the
// profile and is always derived, never stored.
struct AmplifierParams {
  double omega0 = 0.0;  // resonance frequency [Hz]
  double g0 = 0.0;      // maximal linear power gain (at omega0)
  double b_j = 0.0;     // half width at half maximum of the gain profile [Hz]
  double delta = 0.0;   // signal detuning from omega0 [Hz], >= 0 (signal above resonance)
  double b_meas = 0.0;  // single-side measurement bandwidth [Hz]

  double tau() const;                                  // b_j*sqrt(g0)
  double omega_signal() const { return omega0 + delta; }
  double omega_idler() const { return omega0 - delta; }
  double omega_pump() const { return 2.0 * omega0; }

  // Same amplifier specified through its gain-bandwidth product.
  static AmplifierParams from_tau(double omega0, double g0, double tau, double delta,
                                  double b_meas);

  // Re-pumped amplifier with the given gain at omega_signal, at fixed tau.
  // Raising the pump trades bandwidth for peak gain along constant tau.
  AmplifierParams with_signal_gain(double gain_at_signal) const;

  void validate() const;
};

struct SignalSpec {
  enum class Kind { vacuum, coherent, thermal };

  Kind kind = Kind::vacuum;
  double center = 0.0;       // carrier / band center [Hz]
  double b_s = 0.0;          // single-side signal bandwidth [Hz]; 0 = ideal tone
  double n_in = 0.0;         // mean photon number (coherent)
  double temperature = 0.0;  // source temperature [K] (thermal)

  void validate() const;
};

struct PumpNoiseParams {
  double n_jprime = 0.0;  // power-law prefactor [photons]
  double epsilon = 0.0;   // power-law exponent
};

struct NoiseBudget {
  double n_hemt = 0.0;   // HEMT added photons referred to the HEMT input
  double n_idler = 0.5;  // idler-mode photon content incl. vacuum half photon
  PumpNoiseParams pump;

  void validate() const;
};

struct BandwidthThresholds {
  double b1 = 0.0;  // 2*delta - b_meas, clamped at 0
  double b2 = 0.0;  // 2*delta + b_meas
  bool idler_in_measurement_band = false;  // set when 2*delta < b_meas
};

// G(w) in [1, 1+g0], symmetric about omega0.
double lorentzian_gain(const AmplifierParams& p, double omega);

// eta = 1/(1+2*n_f) for n_f >= 0 additive photons referred to the input.
double quantum_efficiency(double n_f);

// Idler contribution n_i*(g_n-1)/g_n added by narrowband parametric gain.
double sql_added_noise(double g_n, double n_i);

// eta <= g_n/(2*g_n-1); 1/2 in the high-gain limit.
double sql_efficiency_bound(double g_n);

// Total gain 2*g_n-1 seen by signals covering both signal and idler modes.
double broadband_gain(double g_n);

// Bose-Einstein occupation 1/(exp(h f / k T) - 1). Returns exactly 0 instead
// of subnormal noise when h f >> k T.
double planck_occupation(double frequency, double temperature);

// Signal-bandwidth thresholds b1 = 2*delta - B and b2 = 2*delta + B separating
// the narrowband, transition, and broadband amplification regimes.
BandwidthThresholds bandwidth_thresholds(const AmplifierParams& p);

// dB <-> linear power gain, I/O boundary use only.
double db_to_linear(double db);
double linear_to_db(double g);

}  // namespace jpa
