#pragma once

#include <Eigen/Core>

#include "jpa/physics.hpp"

namespace jpa {

// Frequency grid for spectral states. Node grids place a sample at omega0 and
// at integer multiples of the spacing around it; midpoint grids offset all
// samples by half a bin so that band edges fall exactly between samples.
struct GridSpec {
  double half_span = 0.0;  // [Hz]; 0 = default 5*tau
  double spacing = 0.0;    // [Hz]; 0 = default b_meas/50
  bool midpoint = false;

  Eigen::ArrayXd build(const AmplifierParams& amp) const;
};

// Per-mode second-moment description of a (phase-averaged) Gaussian field on a
// symmetric frequency grid. `occupation` is the thermal/noise photon number
// per mode (vacuum excluded, variance = occupation + 1/2); `coherent` is the
// displacement photon number carried by each sample, a discrete per-sample
// power rather than a density.
struct SpectralState {
  Eigen::ArrayXd grid;
  Eigen::ArrayXd occupation;
  Eigen::ArrayXd coherent;
  double omega0 = 0.0;

  static SpectralState vacuum(Eigen::ArrayXd grid, double omega0);

  Eigen::Index size() const { return grid.size(); }
  Eigen::Index image_index(Eigen::Index i) const { return grid.size() - 1 - i; }
  Eigen::ArrayXd variance() const { return occupation + 0.5; }

  // Requires: strictly increasing grid, symmetric about omega0 (the image
  // 2*omega0 - w of every sample w is itself a sample), non-negative moments.
  void validate() const;
};

// Realizes a SignalSpec on the given grid: thermal specs fill the Planck
// occupation over [center - b_s, center + b_s], coherent specs place the full
// displacement power on the sample nearest to the carrier.
SpectralState make_input_state(const SignalSpec& sig, Eigen::ArrayXd grid, double omega0);

}  // namespace jpa
