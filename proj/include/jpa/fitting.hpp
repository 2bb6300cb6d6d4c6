#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "jpa/chain_sim.hpp"

// Least-squares engines and the three calibration analyses: Planck
// spectroscopy fits, coherent-sweep linear fits, and power-law fits of the
// gain-dependent quantum efficiency.
namespace jpa {

struct FitResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;   // (J^T J)^-1 scaled by residual variance
  double residual_norm = 0.0;   // sum of squared (weighted) residuals
  bool converged = false;
  int iterations = 0;
  double r_squared = 0.0;       // plain (unweighted) coefficient of determination

  Eigen::VectorXd std_errors() const;
};

using ModelFn = std::function<double(double x, const Eigen::VectorXd& p)>;

struct FitOptions {
  Eigen::VectorXd lower;   // box bounds, empty = unbounded
  Eigen::VectorXd upper;
  Eigen::VectorXd sigma;   // per-point standard deviations; empty = unweighted
  double gradient_tol = 1e-10;
  int max_iterations = 200;
};

// Damped Gauss-Newton (Levenberg) iteration with numerical Jacobians.
// Converges on gradient norm <= gradient_tol * max(1, cost) or on cost/step
// stagnation; converged=false after max_iterations otherwise. Throws
// NumericError if the normal equations are singular at the solution and
// ValidationError for underdetermined problems.
FitResult least_squares(const ModelFn& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& init,
                        const FitOptions& opt = {});

// Planck spectroscopy: y(T) = G_b * (n_planck(T, f_signal) + n_off) with
// n_off >= 0. params = [G_b, n_off]. Needs >= 3 temperatures spanning at
// least a factor 3.
FitResult fit_planck(const SweepDataset& ds, double f_signal,
                     const Eigen::VectorXd& sigma = {});

// Coherent response: closed-form weighted linear regression y = G_n*n_in + c.
// params = [G_n, c]. r_squared doubles as the linearity diagnostic.
FitResult fit_coherent(const SweepDataset& ds, const Eigen::VectorXd& sigma = {});

// Linear-amplifier check used by fit reports on coherent data.
bool is_linear_response(const FitResult& fit);

enum class GainMode { narrowband, broadband };

const char* to_string(GainMode m);

struct EfficiencyPoint {
  double gain = 1.0;       // G_n (narrowband) or G_b (broadband), linear
  double eta = 1.0;
  double sigma_eta = 0.0;
  GainMode mode = GainMode::broadband;

  void validate() const;
};

// Converts a converged calibration fit into a quantum-efficiency point.
// Broadband (Planck) fits: n_f = n_off + n_hemt/G_b; narrowband (coherent)
// fits: n_f = c/G_n + n_hemt/G_n. Pass n_hemt = 0 when the fitted dataset
// already includes the HEMT stage. sigma_eta by first-order propagation.
EfficiencyPoint extract_efficiency(const FitResult& fit, GainMode mode, double n_hemt = 0.0);

// Model behind the efficiency-vs-gain fits: input-referred noise
//   n_f(G) = n_jprime*(G-1)^epsilon + n_hemt/G [+ (1 - 1/G)/2 narrowband],
// eta = 1/(1+2 n_f). The idler half photon is fixed physics in narrowband
// mode; only the pump-noise parameters are fitted.
double eta_curve_model(double gain, double n_jprime, double epsilon, double n_hemt,
                       GainMode mode);

// Fits (n_jprime, epsilon) to measured efficiency points of a single mode.
// params = [n_jprime, epsilon], weighted by sigma_eta when all are positive.
FitResult fit_eta_curve(const std::vector<EfficiencyPoint>& points, double n_hemt);

}  // namespace jpa
