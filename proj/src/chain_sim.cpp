#include "jpa/chain_sim.hpp"

#include <cmath>

#include "jpa/errors.hpp"
#include "jpa/random.hpp"

namespace jpa {
namespace {

void check_ascending(const std::vector<double>& xs, const char* what) {
  if (xs.empty()) throw ValidationError(std::string(what) + ": empty sweep grid");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ValidationError(std::string(what) + ": grid must be strictly ascending");
}

Eigen::ArrayXd to_array(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double apply_scatter(double y, const ChainConfig& cfg, std::uint64_t counter) {
  if (cfg.meas_noise_rel == 0.0) return y;
  return y * (1.0 + cfg.meas_noise_rel * rng::normal(cfg.seed, counter));
}

}  // namespace

void ChainConfig::validate() const {
  amp.validate();
  noise.validate();
  if (!(meas_noise_rel >= 0.0))
    throw ValidationError("chain config: meas_noise_rel must be >= 0");
}

const char* to_string(SweepKind k) {
  return k == SweepKind::planck ? "planck" : "coherent";
}

void SweepDataset::validate() const {
  if (x.size() == 0 || x.size() != y.size())
    throw ValidationError("sweep dataset: x and y must be non-empty and equally sized");
  for (Eigen::Index i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw ValidationError("sweep dataset: x must be strictly increasing");
  if (!(gain_label >= 1.0))
    throw ValidationError("sweep dataset: gain_label must be >= 1");
}

SpectralState propagate(const SpectralState& in, const AmplifierParams& amp) {
  in.validate();
  amp.validate();

  const Eigen::ArrayXd gain = 1.0 + amp.g0 * amp.b_j * amp.b_j /
                                        (amp.b_j * amp.b_j + (in.grid - amp.omega0).square());
  SpectralState out;
  out.grid = in.grid;
  out.omega0 = in.omega0;
  const Eigen::ArrayXd v = in.variance();
  out.occupation = gain * v + (gain - 1.0) * v.reverse() - 0.5;
  out.coherent = gain * in.coherent + (gain - 1.0) * in.coherent.reverse();
  return out;
}

double pump_power_variance(double n_p, double n_th) {
  if (!(n_p >= 0.0) || !(n_th >= 0.0))
    throw ValidationError("pump_power_variance: photon numbers must be >= 0");
  return n_p * (2.0 * n_th + 1.0) + 2.0 * n_th * n_th + n_th;
}

double jpa_pump_noise(double g, const NoiseBudget& noise) {
  if (!(g >= 1.0)) throw ValidationError("jpa_pump_noise: gain must be >= 1");
  if (!(noise.pump.n_jprime >= 0.0))
    throw ValidationError("jpa_pump_noise: n_jprime must be >= 0");
  return noise.pump.n_jprime * std::pow(g - 1.0, noise.pump.epsilon);
}

double reconstruction_photon_number(const SpectralState& s, const AmplifierParams& amp,
                                    bool include_vacuum) {
  s.validate();
  amp.validate();
  const double lo = amp.omega_signal() - amp.b_meas;
  const double hi = amp.omega_signal() + amp.b_meas;
  const Eigen::Index n = s.size();
  if (lo < s.grid[0] || hi > s.grid[n - 1])
    throw ValidationError("reconstruction: measurement band exceeds the grid extent");

  // Occupation is a per-mode density: integrate it piecewise-linearly over the
  // band and normalize by the band measure.
  double integral = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double a = std::max(s.grid[i], lo);
    const double b = std::min(s.grid[i + 1], hi);
    if (b <= a) continue;
    const double width = s.grid[i + 1] - s.grid[i];
    const double fa = s.occupation[i] +
                      (s.occupation[i + 1] - s.occupation[i]) * (a - s.grid[i]) / width;
    const double fb = s.occupation[i] +
                      (s.occupation[i + 1] - s.occupation[i]) * (b - s.grid[i]) / width;
    integral += 0.5 * (fa + fb) * (b - a);
  }
  double result = integral / (hi - lo);

  // Coherent powers are per-sample: sum every tone inside the (closed) band.
  const double edge_tol = 1e-6 * (n > 1 ? s.grid[1] - s.grid[0] : 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    if (s.grid[i] >= lo - edge_tol && s.grid[i] <= hi + edge_tol) result += s.coherent[i];

  return include_vacuum ? result + 0.5 : result;
}

double added_noise_referred(double n_out, double n_in, double g_total, double n_hemt) {
  if (!(g_total >= 1.0))
    throw ValidationError("added_noise_referred: gain must be >= 1");
  return (n_out - g_total * n_in + n_hemt) / g_total;
}

SweepDataset simulate_planck_sweep(const ChainConfig& cfg, const std::vector<double>& temps_k,
                                   double g_n) {
  cfg.validate();
  check_ascending(temps_k, "planck sweep temperatures");
  if (!(temps_k.front() > 0.0))
    throw ValidationError("planck sweep: temperatures must be positive");

  const AmplifierParams amp = cfg.amp.with_signal_gain(g_n);
  const Eigen::ArrayXd grid = cfg.grid.build(amp);
  const double g_b = broadband_gain(g_n);

  // The reconstruction reference: the chain's own amplified-vacuum response.
  const double baseline =
      reconstruction_photon_number(propagate(SpectralState::vacuum(grid, amp.omega0), amp), amp);
  const double noise_floor =
      g_b * jpa_pump_noise(g_b, cfg.noise) + cfg.noise.n_hemt;

  SweepDataset ds;
  ds.kind = SweepKind::planck;
  ds.gain_label = g_b;
  ds.seed = cfg.seed;
  ds.x = to_array(temps_k);
  ds.y.resize(ds.x.size());

  SignalSpec sig;
  sig.kind = SignalSpec::Kind::thermal;
  sig.center = amp.omega0;
  sig.b_s = grid[grid.size() - 1] - grid[0];  // broadband source covers the grid
  for (Eigen::Index k = 0; k < ds.x.size(); ++k) {
    sig.temperature = ds.x[k];
    const SpectralState out = propagate(make_input_state(sig, grid, amp.omega0), amp);
    const double y = reconstruction_photon_number(out, amp) - baseline + noise_floor;
    ds.y[k] = apply_scatter(y, cfg, static_cast<std::uint64_t>(k));
  }
  return ds;
}

SweepDataset simulate_coherent_sweep(const ChainConfig& cfg,
                                     const std::vector<double>& n_in_list, double g_n) {
  cfg.validate();
  check_ascending(n_in_list, "coherent sweep input photons");
  if (!(n_in_list.front() >= 0.0))
    throw ValidationError("coherent sweep: n_in must be >= 0");
  if (bandwidth_thresholds(cfg.amp).idler_in_measurement_band)
    throw ValidationError(
        "coherent sweep: idler image falls inside the measurement band (2*delta < B); "
        "no narrowband regime exists for these parameters");

  const AmplifierParams amp = cfg.amp.with_signal_gain(g_n);
  const Eigen::ArrayXd grid = cfg.grid.build(amp);

  // Narrowband convention: only the signal-mode vacuum amplification is part
  // of the reference response; the idler-port half photon stays in the data.
  const double baseline =
      0.5 * reconstruction_photon_number(propagate(SpectralState::vacuum(grid, amp.omega0), amp), amp);
  const double noise_floor = g_n * jpa_pump_noise(g_n, cfg.noise) + cfg.noise.n_hemt;

  SweepDataset ds;
  ds.kind = SweepKind::coherent;
  ds.gain_label = g_n;
  ds.seed = cfg.seed;
  ds.x = to_array(n_in_list);
  ds.y.resize(ds.x.size());

  SignalSpec tone;
  tone.kind = SignalSpec::Kind::coherent;
  tone.center = amp.omega_signal();
  for (Eigen::Index k = 0; k < ds.x.size(); ++k) {
    tone.n_in = ds.x[k];
    SpectralState in = make_input_state(tone, grid, amp.omega0);
    // Excess idler-port occupation beyond vacuum, covering the image band.
    const double idler_excess = cfg.noise.n_idler - 0.5;
    if (idler_excess > 0.0)
      for (Eigen::Index i = 0; i < in.size(); ++i)
        if (std::abs(in.grid[i] - amp.omega_idler()) <= amp.b_meas)
          in.occupation[i] = idler_excess;
    const SpectralState out = propagate(in, amp);
    const double y = reconstruction_photon_number(out, amp) - baseline + noise_floor;
    ds.y[k] = apply_scatter(y, cfg, static_cast<std::uint64_t>(k));
  }
  return ds;
}

double gaussian_quadrature_moments(double mean_i, double mean_q, double var, int m, int n) {
  if (!(var > 0.0)) throw ValidationError("gaussian moments: variance must be > 0");
  if (m < 0 || n < 0 || m + n > 4)
    throw ValidationError("gaussian moments: unsupported order (need m,n >= 0, m+n <= 4)");
  const auto moment_1d = [](double mu, double v, int k) {
    switch (k) {
      case 0: return 1.0;
      case 1: return mu;
      case 2: return mu * mu + v;
      case 3: return mu * mu * mu + 3.0 * mu * v;
      default: return mu * mu * mu * mu + 6.0 * mu * mu * v + 3.0 * v * v;
    }
  };
  return moment_1d(mean_i, var, m) * moment_1d(mean_q, var, n);
}

double ideal_chain_added_noise(const AmplifierParams& amp, double b_s, double spacing) {
  amp.validate();
  const double h = spacing > 0.0 ? spacing : amp.b_meas / 50.0;
  if (!(b_s >= h))
    throw ValidationError("ideal_chain_added_noise: b_s must be at least one grid spacing");

  GridSpec gs;
  gs.spacing = h;
  gs.half_span = amp.delta + b_s + amp.b_meas + 4.0 * h;
  gs.midpoint = true;
  const Eigen::ArrayXd grid = gs.build(amp);

  SpectralState in = SpectralState::vacuum(grid, amp.omega0);
  const double ws = amp.omega_signal();
  for (Eigen::Index i = 0; i < in.size(); ++i)
    if (std::abs(in.grid[i] - ws) <= b_s) in.occupation[i] = 1.0;

  const SpectralState out = propagate(in, amp);

  // Band average of the per-frequency input-referred added noise. Where the
  // input carries signal at the image frequency, the idler port is a signal
  // port and the effective gain is 2G-1; elsewhere it is a noise port.
  const double w = std::min(b_s, amp.b_meas);
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    if (std::abs(in.grid[i] - ws) >= w) continue;
    const bool image_has_signal = in.occupation[in.image_index(i)] > 0.0;
    const double g = lorentzian_gain(amp, in.grid[i]);
    const double g_eff = image_has_signal ? 2.0 * g - 1.0 : g;
    sum += (out.occupation[i] + 0.5 - g_eff * (in.occupation[i] + 0.5)) / g_eff;
    ++count;
  }
  if (count == 0)
    throw ValidationError("ideal_chain_added_noise: no grid samples in the measurement window");
  return sum / static_cast<double>(count);
}

}  // namespace jpa
