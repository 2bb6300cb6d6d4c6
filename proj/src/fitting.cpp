#include "jpa/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "jpa/errors.hpp"

namespace jpa {
namespace {

Eigen::VectorXd clamp_to_bounds(Eigen::VectorXd p, const FitOptions& opt) {
  if (opt.lower.size() == p.size())
    for (Eigen::Index j = 0; j < p.size(); ++j) p[j] = std::max(p[j], opt.lower[j]);
  if (opt.upper.size() == p.size())
    for (Eigen::Index j = 0; j < p.size(); ++j) p[j] = std::min(p[j], opt.upper[j]);
  return p;
}

Eigen::VectorXd residuals(const ModelFn& model, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                          const Eigen::VectorXd& p) {
  Eigen::VectorXd r(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = w[i] * (y[i] - model(x[i], p));
  return r;
}

// Central-difference Jacobian of the weighted model values, J_ij = w_i df/dp_j.
Eigen::MatrixXd jacobian(const ModelFn& model, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& w, const Eigen::VectorXd& p,
                         const FitOptions& opt) {
  Eigen::MatrixXd jac(x.size(), p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double step = 1e-6 * std::max(std::abs(p[j]), 1e-6);
    Eigen::VectorXd ph = clamp_to_bounds(p, opt), pl = clamp_to_bounds(p, opt);
    ph[j] = p[j] + step;
    pl[j] = p[j] - step;
    const double denom = ph[j] - pl[j];
    for (Eigen::Index i = 0; i < x.size(); ++i)
      jac(i, j) = w[i] * (model(x[i], ph) - model(x[i], pl)) / denom;
  }
  return jac;
}

double plain_r_squared(const ModelFn& model, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& p) {
  const double mean = y.mean();
  double ss_res = 0.0, ss_tot = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = y[i] - model(x[i], p);
    ss_res += d * d;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace

Eigen::VectorXd FitResult::std_errors() const {
  return covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
}

FitResult least_squares(const ModelFn& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& init,
                        const FitOptions& opt) {
  const Eigen::Index n = x.size(), np = init.size();
  if (n != y.size()) throw ValidationError("least_squares: x and y sizes differ");
  if (np == 0) throw ValidationError("least_squares: empty parameter vector");
  if (n < np)
    throw ValidationError("least_squares: fewer data points than parameters");
  if (!init.allFinite()) throw ValidationError("least_squares: init must be finite");

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  if (opt.sigma.size() != 0) {
    if (opt.sigma.size() != n)
      throw ValidationError("least_squares: sigma size does not match data");
    if (!(opt.sigma.minCoeff() > 0.0))
      throw ValidationError("least_squares: sigma entries must be > 0");
    w = opt.sigma.cwiseInverse();
  }

  FitResult out;
  Eigen::VectorXd p = clamp_to_bounds(init, opt);
  Eigen::VectorXd r = residuals(model, x, y, w, p);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool stationary = false;

  Eigen::MatrixXd jac;
  for (; out.iterations < opt.max_iterations; ++out.iterations) {
    jac = jacobian(model, x, w, p, opt);
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() <= opt.gradient_tol * std::max(1.0, cost)) {
      stationary = true;
      break;
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    bool stepped = false;
    for (int tries = 0; tries < 24; ++tries) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(grad);
      if (!step.allFinite()) {
        lambda *= 9.0;
        continue;
      }
      const Eigen::VectorXd trial = clamp_to_bounds(p + step, opt);
      const Eigen::VectorXd rt = residuals(model, x, y, w, trial);
      const double trial_cost = rt.squaredNorm();
      if (trial_cost < cost) {
        const double rel_drop = (cost - trial_cost) / std::max(cost, 1e-300);
        const double step_size = (trial - p).lpNorm<Eigen::Infinity>();
        p = trial;
        r = rt;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (rel_drop < 1e-14 || step_size < 1e-14 * std::max(1.0, p.lpNorm<Eigen::Infinity>()))
          stationary = true;
        break;
      }
      lambda *= 9.0;
    }
    if (stationary) break;
    if (!stepped) {
      stationary = true;  // no descent direction left at huge damping
      break;
    }
  }

  jac = jacobian(model, x, w, p, opt);
  out.params = p;
  out.residual_norm = cost;
  out.converged = stationary;
  out.r_squared = plain_r_squared(model, x, y, p);

  // Covariance: (J^T J)^-1 scaled by the residual variance. Rank-deficient
  // directions get a pseudo-inverse treatment instead of aborting the fit.
  const double dof = static_cast<double>(n - np);
  const double s2 = dof > 0.0 ? cost / dof : 0.0;
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jtj, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double rank_tol = 1e-14 * svd.singularValues().maxCoeff();
  if (!(svd.singularValues().maxCoeff() > 0.0))
    throw NumericError("least_squares: singular normal equations (zero Jacobian)");
  Eigen::VectorXd inv_sv = svd.singularValues();
  for (Eigen::Index k = 0; k < inv_sv.size(); ++k)
    inv_sv[k] = inv_sv[k] > rank_tol ? 1.0 / inv_sv[k] : 0.0;
  out.covariance =
      s2 * svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
  return out;
}

FitResult fit_planck(const SweepDataset& ds, double f_signal, const Eigen::VectorXd& sigma) {
  ds.validate();
  if (ds.kind != SweepKind::planck)
    throw ValidationError("fit_planck: dataset kind must be planck");
  if (ds.x.size() < 3)
    throw ValidationError("fit_planck: need at least 3 temperatures");
  if (!(ds.x[ds.x.size() - 1] >= 3.0 * ds.x[0]))
    throw ValidationError("fit_planck: temperature span must cover at least a factor 3");
  if (!(f_signal > 0.0)) throw ValidationError("fit_planck: f_signal must be > 0");

  const ModelFn model = [f_signal](double t, const Eigen::VectorXd& p) {
    return p[0] * (planck_occupation(f_signal, t) + p[1]);
  };

  // Seed the gain from the classical high-temperature slope and the offset
  // from the coldest point.
  const Eigen::Index n = ds.x.size();
  const double dn = planck_occupation(f_signal, ds.x[n - 1]) -
                    planck_occupation(f_signal, ds.x[n - 2]);
  double g0 = (ds.y[n - 1] - ds.y[n - 2]) / dn;
  if (!(g0 > 0.0) || !std::isfinite(g0)) g0 = 1.0;
  const double off0 =
      std::max(ds.y[0] / g0 - planck_occupation(f_signal, ds.x[0]), 0.0);

  FitOptions opt;
  opt.sigma = sigma;
  opt.lower = Eigen::Vector2d(1e-12, 0.0);  // n_off >= 0
  Eigen::VectorXd init(2);
  init << g0, off0;
  return least_squares(model, ds.x.matrix(), ds.y.matrix(), init, opt);
}

FitResult fit_coherent(const SweepDataset& ds, const Eigen::VectorXd& sigma) {
  ds.validate();
  if (ds.kind != SweepKind::coherent)
    throw ValidationError("fit_coherent: dataset kind must be coherent");
  const Eigen::Index n = ds.x.size();
  if (n < 2) throw ValidationError("fit_coherent: need at least 2 points");

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  if (sigma.size() != 0) {
    if (sigma.size() != n)
      throw ValidationError("fit_coherent: sigma size does not match data");
    if (!(sigma.minCoeff() > 0.0))
      throw ValidationError("fit_coherent: sigma entries must be > 0");
    w = sigma.cwiseInverse().array().square();
  }

  const double sw = w.sum();
  const double xm = (w.array() * ds.x).sum() / sw;
  const double ym = (w.array() * ds.y).sum() / sw;
  const double sxx = (w.array() * (ds.x - xm).square()).sum();
  if (!(sxx > 0.0))
    throw ValidationError("fit_coherent: all x equal, slope not identifiable");
  const double sxy = (w.array() * (ds.x - xm) * (ds.y - ym)).sum();

  FitResult out;
  out.params.resize(2);
  out.params << sxy / sxx, ym - sxy / sxx * xm;  // [slope, intercept]
  out.converged = true;
  out.iterations = 0;

  double ss_res = 0.0, ss_res_plain = 0.0, ss_tot_plain = 0.0;
  const double y_mean = ds.y.mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = ds.y[i] - (out.params[0] * ds.x[i] + out.params[1]);
    ss_res += w[i] * r * r;
    ss_res_plain += r * r;
    ss_tot_plain += (ds.y[i] - y_mean) * (ds.y[i] - y_mean);
  }
  out.residual_norm = ss_res;
  out.r_squared = ss_tot_plain > 0.0 ? 1.0 - ss_res_plain / ss_tot_plain : 1.0;

  const double s2 = n > 2 ? ss_res / static_cast<double>(n - 2) : 0.0;
  out.covariance.resize(2, 2);
  out.covariance(0, 0) = s2 / sxx;
  out.covariance(0, 1) = out.covariance(1, 0) = -s2 * xm / sxx;
  out.covariance(1, 1) = s2 * (1.0 / sw + xm * xm / sxx);
  return out;
}

bool is_linear_response(const FitResult& fit) { return fit.r_squared >= 0.999; }

const char* to_string(GainMode m) {
  return m == GainMode::narrowband ? "narrowband" : "broadband";
}

void EfficiencyPoint::validate() const {
  if (!(eta > 0.0 && eta <= 1.0))
    throw ValidationError("efficiency point: eta must be in (0, 1]");
  if (!(sigma_eta >= 0.0))
    throw ValidationError("efficiency point: sigma_eta must be >= 0");
  if (!(gain >= 1.0)) throw ValidationError("efficiency point: gain must be >= 1");
}

EfficiencyPoint extract_efficiency(const FitResult& fit, GainMode mode, double n_hemt) {
  if (!fit.converged)
    throw ValidationError("extract_efficiency: fit did not converge");
  if (fit.params.size() != 2)
    throw ValidationError("extract_efficiency: expected a two-parameter calibration fit");
  const double gain = fit.params[0];
  if (!(gain >= 1.0))
    throw NumericError("extract_efficiency: fitted gain below unity");

  double n_f;
  Eigen::Vector2d grad;  // d n_f / d params
  if (mode == GainMode::broadband) {
    n_f = fit.params[1] + n_hemt / gain;
    grad << -n_hemt / (gain * gain), 1.0;
  } else {
    n_f = (fit.params[1] + n_hemt) / gain;
    grad << -(fit.params[1] + n_hemt) / (gain * gain), 1.0 / gain;
  }
  n_f = std::max(n_f, 0.0);  // scatter can push a noiseless offset slightly negative

  EfficiencyPoint pt;
  pt.mode = mode;
  pt.gain = gain;
  pt.eta = quantum_efficiency(n_f);
  const double var_nf = grad.dot(fit.covariance * grad);
  pt.sigma_eta = 2.0 * pt.eta * pt.eta * std::sqrt(std::max(var_nf, 0.0));
  pt.validate();
  return pt;
}

double eta_curve_model(double gain, double n_jprime, double epsilon, double n_hemt,
                       GainMode mode) {
  double n_f = n_jprime * std::pow(gain - 1.0, epsilon) + n_hemt / gain;
  if (mode == GainMode::narrowband) n_f += 0.5 * (1.0 - 1.0 / gain);
  return 1.0 / (1.0 + 2.0 * n_f);
}

FitResult fit_eta_curve(const std::vector<EfficiencyPoint>& points, double n_hemt) {
  if (points.size() < 3)
    throw ValidationError("fit_eta_curve: need at least 3 gain points");
  const GainMode mode = points.front().mode;
  Eigen::VectorXd x(points.size()), y(points.size()), sigma(points.size());
  bool weighted = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].validate();
    if (points[i].mode != mode)
      throw ValidationError("fit_eta_curve: mixed narrowband/broadband point set");
    if (!(points[i].gain > 1.0))
      throw ValidationError("fit_eta_curve: gains must be > 1");
    x[i] = points[i].gain;
    y[i] = points[i].eta;
    sigma[i] = points[i].sigma_eta;
    weighted = weighted && points[i].sigma_eta > 0.0;
  }

  const ModelFn model = [n_hemt, mode](double g, const Eigen::VectorXd& p) {
    return eta_curve_model(g, p[0], p[1], n_hemt, mode);
  };

  // Seed epsilon at 1/2 and the prefactor from the highest-gain point.
  const EfficiencyPoint& top = *std::max_element(
      points.begin(), points.end(),
      [](const EfficiencyPoint& a, const EfficiencyPoint& b) { return a.gain < b.gain; });
  const double idler = mode == GainMode::narrowband ? 0.5 * (1.0 - 1.0 / top.gain) : 0.0;
  const double nf_top = (1.0 / top.eta - 1.0) / 2.0 - n_hemt / top.gain - idler;
  Eigen::VectorXd init(2);
  init << std::max(nf_top, 1e-6) / std::sqrt(top.gain - 1.0), 0.5;

  FitOptions opt;
  if (weighted) opt.sigma = sigma;
  opt.lower.resize(2);
  opt.lower << 0.0, -std::numeric_limits<double>::infinity();
  return least_squares(model, x, y, init, opt);
}

}  // namespace jpa
