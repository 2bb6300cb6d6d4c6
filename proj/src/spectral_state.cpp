#include "jpa/spectral_state.hpp"

#include <cmath>

#include "jpa/errors.hpp"

namespace jpa {

Eigen::ArrayXd GridSpec::build(const AmplifierParams& amp) const {
  amp.validate();
  const double h = spacing > 0.0 ? spacing : amp.b_meas / 50.0;
  const double span = half_span > 0.0 ? half_span : 5.0 * amp.tau();
  if (!(span >= h)) throw ValidationError("grid: half_span must be >= spacing");

  if (midpoint) {
    const auto n = static_cast<Eigen::Index>(std::ceil(span / h - 0.5));
    Eigen::ArrayXd grid(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double x = (static_cast<double>(k) + 0.5) * h;
      grid[n + k] = amp.omega0 + x;
      grid[n - 1 - k] = amp.omega0 - x;
    }
    return grid;
  }
  const auto n = static_cast<Eigen::Index>(std::ceil(span / h));
  Eigen::ArrayXd grid(2 * n + 1);
  for (Eigen::Index k = -n; k <= n; ++k)
    grid[k + n] = amp.omega0 + static_cast<double>(k) * h;
  return grid;
}

SpectralState SpectralState::vacuum(Eigen::ArrayXd grid, double omega0) {
  SpectralState s;
  s.omega0 = omega0;
  s.occupation = Eigen::ArrayXd::Zero(grid.size());
  s.coherent = Eigen::ArrayXd::Zero(grid.size());
  s.grid = std::move(grid);
  s.validate();
  return s;
}

void SpectralState::validate() const {
  const Eigen::Index n = grid.size();
  if (n == 0) throw ValidationError("spectral state: empty grid");
  if (occupation.size() != n || coherent.size() != n)
    throw ValidationError("spectral state: field sizes do not match grid");

  const double h = n > 1 ? grid[1] - grid[0] : 1.0;
  const double tol = 1e-6 * std::abs(h);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ValidationError("spectral state: grid must be strictly increasing");
    const double image = 2.0 * omega0 - grid[i];
    if (std::abs(image - grid[n - 1 - i]) > tol)
      throw ValidationError("spectral state: grid not symmetric about omega0");
    if (!(occupation[i] >= 0.0))
      throw ValidationError("spectral state: negative occupation");
    if (!(coherent[i] >= 0.0))
      throw ValidationError("spectral state: negative coherent power");
  }
}

SpectralState make_input_state(const SignalSpec& sig, Eigen::ArrayXd grid, double omega0) {
  sig.validate();
  SpectralState s = SpectralState::vacuum(std::move(grid), omega0);
  switch (sig.kind) {
    case SignalSpec::Kind::vacuum:
      break;
    case SignalSpec::Kind::coherent: {
      Eigen::Index best = 0;
      (s.grid - sig.center).abs().minCoeff(&best);
      s.coherent[best] = sig.n_in;
      break;
    }
    case SignalSpec::Kind::thermal: {
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (std::abs(s.grid[i] - sig.center) <= sig.b_s)
          s.occupation[i] = planck_occupation(s.grid[i], sig.temperature);
      break;
    }
  }
  return s;
}

}  // namespace jpa
