#include "tvvecm/imputation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

// State layout for period s > 1: (level, g_t, g_{t-1}, ..., g_{t-s+2}),
// dimension m = s.  The seasonal recursion g_t = -(g_{t-1}+...+g_{t-s+1}) + w
// keeps the pattern summing to ~zero over any full cycle.  For s == 1 the
// state is the level alone.
struct ModelShape {
  int m;
  int period;
};

struct FilterPass {
  double log_f_sum = 0.0;   // sum of log prediction variances (scaled)
  double v2_f_sum = 0.0;    // sum of squared scaled innovations
  int used = 0;             // likelihood terms after the diffuse burn-in
  double sigma2 = 0.0;      // concentrated observation variance
  double log_likelihood = -std::numeric_limits<double>::infinity();
  // stored for smoothing
  std::vector<Eigen::VectorXd> a_pred, a_filt;
  std::vector<Eigen::MatrixXd> p_pred, p_filt;
};

Eigen::VectorXd apply_transition(const ModelShape& shape, const Eigen::VectorXd& a) {
  Eigen::VectorXd out(shape.m);
  out[0] = a[0];
  if (shape.m > 1) {
    out[1] = -a.segment(1, shape.m - 1).sum();
    for (int i = 2; i < shape.m; ++i) out[i] = a[i - 1];
  }
  return out;
}

Eigen::MatrixXd transition_matrix(const ModelShape& shape) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(shape.m, shape.m);
  t(0, 0) = 1.0;
  if (shape.m > 1) {
    t.row(1).segment(1, shape.m - 1).setConstant(-1.0);
    for (int i = 2; i < shape.m; ++i) t(i, i - 1) = 1.0;
  }
  return t;
}

// One filter pass with the observation variance concentrated to 1 and the
// state innovations at q_level, q_seas (relative variances).  keep_states
// controls whether the smoother inputs are stored.
FilterPass run_filter(const Eigen::VectorXd& y,
                      const Eigen::Array<bool, Eigen::Dynamic, 1>& observed,
                      const ModelShape& shape, double q_level, double q_seas,
                      double prior_scale, bool keep_states) {
  const auto t_total = y.size();
  const int m = shape.m;
  const Eigen::MatrixXd trans = transition_matrix(shape);

  FilterPass pass;
  if (keep_states) {
    pass.a_pred.resize(static_cast<std::size_t>(t_total));
    pass.a_filt.resize(static_cast<std::size_t>(t_total));
    pass.p_pred.resize(static_cast<std::size_t>(t_total));
    pass.p_filt.resize(static_cast<std::size_t>(t_total));
  }

  // diffuse-ish prior: level at the first observed value, wide covariance
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  for (Eigen::Index t = 0; t < t_total; ++t) {
    if (observed[t]) {
      a[0] = y[t];
      break;
    }
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m, m) * (1e7 * prior_scale);

  const int burn = m;  // likelihood terms dropped while the prior washes out
  int observed_seen = 0;
  for (Eigen::Index t = 0; t < t_total; ++t) {
    if (t > 0) {
      a = apply_transition(shape, a);
      p = trans * p * trans.transpose();
      p(0, 0) += q_level;
      if (m > 1) p(1, 1) += q_seas;
    }
    if (keep_states) {
      pass.a_pred[static_cast<std::size_t>(t)] = a;
      pass.p_pred[static_cast<std::size_t>(t)] = p;
    }
    if (observed[t]) {
      // scalar observation: signal = level + current seasonal
      Eigen::VectorXd pz = p.col(0);
      if (m > 1) pz += p.col(1);
      double f = pz[0] + 1.0;  // Z P Z' + concentrated obs variance
      if (m > 1) f += pz[1];
      const double v = y[t] - (m > 1 ? a[0] + a[1] : a[0]);
      const Eigen::VectorXd gain = pz / f;
      a += gain * v;
      p -= gain * pz.transpose();
      p = ((p + p.transpose()) * 0.5).eval();
      ++observed_seen;
      if (observed_seen > burn) {
        pass.log_f_sum += std::log(f);
        pass.v2_f_sum += v * v / f;
        ++pass.used;
      }
    }
    if (keep_states) {
      pass.a_filt[static_cast<std::size_t>(t)] = a;
      pass.p_filt[static_cast<std::size_t>(t)] = p;
    }
  }

  if (pass.used > 0) {
    const double floor = 1e-12 * std::max(prior_scale, 1e-8);
    pass.sigma2 = std::max(pass.v2_f_sum / pass.used, floor);
    pass.log_likelihood = -0.5 * (pass.used * std::log(2.0 * M_PI) + pass.log_f_sum +
                                  pass.used * std::log(pass.sigma2) + pass.used);
  }
  return pass;
}

// Nelder-Mead on the negative concentrated log-likelihood over the log
// relative innovation variances.  Dimension is 1 (level only) or 2.
Eigen::VectorXd maximise_likelihood(const Eigen::VectorXd& y,
                                    const Eigen::Array<bool, Eigen::Dynamic, 1>& observed,
                                    const ModelShape& shape, double prior_scale) {
  const int dim = shape.m > 1 ? 2 : 1;
  const double lo = -16.0, hi = 8.0;
  auto objective = [&](const Eigen::VectorXd& psi) {
    for (int i = 0; i < dim; ++i) {
      if (psi[i] < lo || psi[i] > hi) return 1e12 + psi.cwiseAbs().sum();
    }
    const double q_level = std::exp(psi[0]);
    const double q_seas = dim > 1 ? std::exp(psi[1]) : 0.0;
    const auto pass = run_filter(y, observed, shape, q_level, q_seas, prior_scale, false);
    return -pass.log_likelihood;
  };

  // deterministic start: moderate level noise, small seasonal noise
  Eigen::VectorXd start(dim);
  start[0] = std::log(0.1);
  if (dim > 1) start[1] = std::log(0.01);

  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(dim) + 1, start);
  for (int i = 0; i < dim; ++i) simplex[static_cast<std::size_t>(i) + 1][i] += 2.0;
  std::vector<double> value(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) value[i] = objective(simplex[i]);

  const int max_iter = 400;
  for (int iter = 0; iter < max_iter; ++iter) {
    // order the simplex
    std::vector<std::size_t> order(simplex.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return value[a] < value[b];
    });
    std::vector<Eigen::VectorXd> s2;
    std::vector<double> v2;
    for (auto idx : order) {
      s2.push_back(simplex[idx]);
      v2.push_back(value[idx]);
    }
    simplex = s2;
    value = v2;
    if (std::abs(value.back() - value.front()) < 1e-9 * (1.0 + std::abs(value.front()))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex.back());
    const double f_ref = objective(reflected);
    if (f_ref < value.front()) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex.back());
      const double f_exp = objective(expanded);
      if (f_exp < f_ref) {
        simplex.back() = expanded;
        value.back() = f_exp;
      } else {
        simplex.back() = reflected;
        value.back() = f_ref;
      }
    } else if (f_ref < value[value.size() - 2]) {
      simplex.back() = reflected;
      value.back() = f_ref;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (simplex.back() - centroid);
      const double f_con = objective(contracted);
      if (f_con < value.back()) {
        simplex.back() = contracted;
        value.back() = f_con;
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          simplex[i] = simplex.front() + 0.5 * (simplex[i] - simplex.front());
          value[i] = objective(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < simplex.size(); ++i) {
    if (value[i] < value[best]) best = i;
  }
  return simplex[best];
}

}  // namespace

SeasonalSmootherFit fit_seasonal_smoother(const Eigen::VectorXd& y,
                                          const Eigen::Array<bool, Eigen::Dynamic, 1>& observed,
                                          int period) {
  if (period < 1) throw ParameterError("seasonal period must be >= 1");
  if (y.size() != observed.size()) throw ShapeError("series and mask lengths differ");
  Eigen::Index observed_count = 0;
  double sum = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (!observed[t]) continue;
    if (!std::isfinite(y[t])) {
      throw DomainError("non-finite observed value at index " + std::to_string(t));
    }
    sum += y[t];
    ++observed_count;
  }
  if (observed_count < 3 * static_cast<Eigen::Index>(period)) {
    throw InsufficientDataError("seasonal smoother needs at least 3 full cycles of data");
  }

  const double mean = sum / static_cast<double>(observed_count);
  double var = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (observed[t]) var += (y[t] - mean) * (y[t] - mean);
  }
  var /= static_cast<double>(observed_count);
  const double prior_scale = std::max(var, 1e-8);

  const ModelShape shape{period > 1 ? period : 1, period};
  const Eigen::VectorXd psi = maximise_likelihood(y, observed, shape, prior_scale);
  const double q_level = std::exp(psi[0]);
  const double q_seas = shape.m > 1 ? std::exp(psi[1]) : 0.0;

  auto pass = run_filter(y, observed, shape, q_level, q_seas, prior_scale, true);

  // fixed-interval smoothing of the state means
  const auto t_total = y.size();
  const Eigen::MatrixXd trans = transition_matrix(shape);
  std::vector<Eigen::VectorXd> a_smooth(static_cast<std::size_t>(t_total));
  a_smooth.back() = pass.a_filt.back();
  const double jitter = 1e-12 * prior_scale;
  for (Eigen::Index t = t_total - 2; t >= 0; --t) {
    const auto ti = static_cast<std::size_t>(t);
    Eigen::MatrixXd p_pred_next = pass.p_pred[ti + 1];
    p_pred_next.diagonal().array() += jitter;
    const Eigen::MatrixXd gain =
        pass.p_filt[ti] * trans.transpose() * p_pred_next.ldlt().solve(
            Eigen::MatrixXd::Identity(shape.m, shape.m));
    a_smooth[ti] = pass.a_filt[ti] + gain * (a_smooth[ti + 1] - pass.a_pred[ti + 1]);
  }

  SeasonalSmootherFit fit;
  fit.level_var = q_level * pass.sigma2;
  fit.seasonal_var = q_seas * pass.sigma2;
  fit.obs_var = pass.sigma2;
  fit.log_likelihood = pass.log_likelihood;
  fit.smoothed.resize(t_total);
  for (Eigen::Index t = 0; t < t_total; ++t) {
    const auto& a = a_smooth[static_cast<std::size_t>(t)];
    fit.smoothed[t] = shape.m > 1 ? a[0] + a[1] : a[0];
  }
  return fit;
}

}  // namespace tvvecm
