#pragma once

#include <cstdint>
#include <vector>

#include "jpa/spectral_state.hpp"

// Frequency-resolved simulation of the amplification chain: the two-mode
// parametric stage couples every sample to its image at 2*omega0 - omega, the
// HEMT and pump-noise stages add broadband occupation on top. Sweep outputs
// are reported at the reconstruction point, i.e. relative to the chain's own
// amplified-vacuum response, so that the recorded value is (mode gain) x
// (input-referred photon number).
namespace jpa {

struct ChainConfig {
  AmplifierParams amp;
  NoiseBudget noise;
  std::uint64_t seed = 0;
  double meas_noise_rel = 0.0;  // relative std dev of multiplicative scatter
  GridSpec grid;

  void validate() const;
};

enum class SweepKind { planck, coherent };

const char* to_string(SweepKind k);

struct SweepDataset {
  Eigen::ArrayXd x;    // temperature [K] or input photon number
  Eigen::ArrayXd y;    // photon number at the reconstruction point
  SweepKind kind = SweepKind::planck;
  double gain_label = 1.0;  // broadband gain for planck sweeps, narrowband for coherent
  std::uint64_t seed = 0;

  void validate() const;
};

// Two-mode squeezing transformation of per-mode variances,
//   v_out(w) = G(w) v_in(w) + (G(w)-1) v_in(2*omega0 - w),   v = n + 1/2,
// and the same map for per-sample displacement powers. Pure stage: no
// additive noise term.
SpectralState propagate(const SpectralState& in, const AmplifierParams& amp);

// Variance of pump power fluctuations for a coherent pump of n_p photons
// carrying n_th thermal noise photons: n_p*(2*n_th+1) + 2*n_th^2 + n_th.
double pump_power_variance(double n_p, double n_th);

// Gain-dependent pump-induced JPA noise n_J' * (g-1)^epsilon, referred to the
// amplifier input.
double jpa_pump_noise(double g, const NoiseBudget& noise);

// Band average of the occupation over [omega_s - B, omega_s + B] plus the sum
// of coherent sample powers in the band. include_vacuum adds the half photon
// of vacuum variance.
double reconstruction_photon_number(const SpectralState& s, const AmplifierParams& amp,
                                    bool include_vacuum = false);

// n_f = (n_out - g_total*n_in + n_hemt)/g_total, photon numbers in the
// amplified-vacuum-relative convention used by the sweep outputs.
double added_noise_referred(double n_out, double n_in, double g_total, double n_hemt);

// Planck spectroscopy sweep: broadband thermal input at each temperature,
// y(T) = <G_b> n_planck(T) + G_b n_J(G_b) + n_H, multiplicative scatter.
SweepDataset simulate_planck_sweep(const ChainConfig& cfg, const std::vector<double>& temps_k,
                                   double g_n);

// Coherent tone sweep at omega_s: y = G_n n_in + (G_n - 1) n_i + G_n n_J(G_n) + n_H.
SweepDataset simulate_coherent_sweep(const ChainConfig& cfg,
                                     const std::vector<double>& n_in_list, double g_n);

// Product moment <I^m Q^n> of uncorrelated Gaussian quadratures with the given
// means and common per-quadrature variance; m + n <= 4.
double gaussian_quadrature_moments(double mean_i, double mean_q, double var, int m, int n);

// Input-referred added noise of the ideal (pump-noise-free, no HEMT) chain for
// a flat signal of single-side bandwidth b_s, band-averaged over the
// measurement window. Computed from the propagated state on a midpoint grid;
// saturates the quantum limit of nql_quadrature. The spacing (default
// b_meas/50) must subdivide b_s, delta, and b_meas for exact band alignment.
double ideal_chain_added_noise(const AmplifierParams& amp, double b_s, double spacing = 0.0);

}  // namespace jpa
