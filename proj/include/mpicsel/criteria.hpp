#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "mpicsel/regression.hpp"

namespace mpicsel {

/// Smooth component of the mixture prior, or Approx for the prior-free
/// approximation of the mixture criterion.
enum class PriorKind { Normal, Uniform, Approx };

inline std::string to_string(PriorKind p) {
  switch (p) {
    case PriorKind::Normal: return "normal";
    case PriorKind::Uniform: return "uniform";
    case PriorKind::Approx: return "approx";
  }
  return "?";
}

/// How the mixture weight w_j is computed from (n, p, k_j) and, for the
/// posterior-mean variant, from the fitted model itself.
struct WeightScheme {
  enum class Kind {
    RatioPower,    ///< w = p^{eps k} / (n^{eps k} + p^{eps k})
    InversePower,  ///< w = n^{-eps k}
    BetaPosterior  ///< posterior mean of w under a Beta(alpha_j, beta_j) prior
  };
  struct Alpha {
    enum class Kind { Constant, PowerP };
    Kind kind = Kind::PowerP;
    double constant = 1.0;   ///< Constant: alpha_j = constant
    double epsilon = 0.499;  ///< PowerP: alpha_j = p^{epsilon k_j}
  };

  Kind kind = Kind::RatioPower;
  double epsilon = 0.499;  ///< RatioPower / InversePower exponent
  // BetaPosterior only:
  Alpha alpha;
  double beta_epsilon = 0.499;          ///< beta_j = n^{beta_epsilon * k_j}
  PriorKind prior = PriorKind::Approx;  ///< marginal used in the likelihood ratio

  static WeightScheme ratio_power(double eps = 0.499) {
    WeightScheme s;
    s.kind = Kind::RatioPower;
    s.epsilon = eps;
    return s;
  }
  static WeightScheme inverse_power(double eps = 0.499) {
    WeightScheme s;
    s.kind = Kind::InversePower;
    s.epsilon = eps;
    return s;
  }
  static WeightScheme beta_posterior(Alpha a = {}, double beta_eps = 0.499,
                                     PriorKind prior = PriorKind::Approx) {
    WeightScheme s;
    s.kind = Kind::BetaPosterior;
    s.alpha = a;
    s.beta_epsilon = beta_eps;
    s.prior = prior;
    return s;
  }

  std::string label() const {
    switch (kind) {
      case Kind::RatioPower: return "ratio(eps=" + std::to_string(epsilon) + ")";
      case Kind::InversePower: return "inverse(eps=" + std::to_string(epsilon) + ")";
      case Kind::BetaPosterior: return "beta-posterior(" + to_string(prior) + ")";
    }
    return "?";
  }
};

/// Which information criterion to score a fitted candidate model with.
struct CriterionSpec {
  enum class Kind { AIC, AICc, BIC, GIC, MPIC };

  Kind kind = Kind::AIC;
  std::optional<double> gic_beta;  ///< GIC only; empty = Auto: beta = (log n) p^{-1/2}
  PriorKind prior = PriorKind::Approx;               ///< MPIC only
  WeightScheme weight = WeightScheme::ratio_power();  ///< MPIC only

  static CriterionSpec aic() { return {}; }
  static CriterionSpec aicc() {
    CriterionSpec s;
    s.kind = Kind::AICc;
    return s;
  }
  static CriterionSpec bic() {
    CriterionSpec s;
    s.kind = Kind::BIC;
    return s;
  }
  static CriterionSpec gic(std::optional<double> beta = {}) {
    CriterionSpec s;
    s.kind = Kind::GIC;
    s.gic_beta = beta;
    return s;
  }
  static CriterionSpec mpic(PriorKind prior = PriorKind::Approx,
                            WeightScheme w = WeightScheme::ratio_power()) {
    CriterionSpec s;
    s.kind = Kind::MPIC;
    s.prior = prior;
    s.weight = w;
    return s;
  }

  std::string label() const {
    switch (kind) {
      case Kind::AIC: return "aic";
      case Kind::AICc: return "aicc";
      case Kind::BIC: return "bic";
      case Kind::GIC: return "gic";
      case Kind::MPIC: return "mpic_" + to_string(prior);
    }
    return "?";
  }
};

/// One criterion evaluation. value = neg2loglik + penalty holds exactly
/// (same floating path).
template <class Scalar>
struct Score {
  Scalar value = 0;
  Scalar neg2loglik = 0;
  Scalar penalty = 0;
  std::optional<Scalar> w_used;         ///< mixture weight, MPIC only
  std::optional<Scalar> mix_log_ratio;  ///< log{(1-w)e^A + w} - log w; 0 for Approx
};

using Scored = Score<double>;

namespace detail {

template <class Scalar>
Scalar log_add_exp(Scalar a, Scalar b) {
  if (a == -std::numeric_limits<Scalar>::infinity()) return b;
  if (b == -std::numeric_limits<Scalar>::infinity()) return a;
  const Scalar m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// log(1 + e^x), stable for any x.
template <class Scalar>
Scalar log1p_exp(Scalar x) {
  if (x > Scalar(0)) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

template <class Scalar>
struct WeightLogs {
  Scalar log_w;
  Scalar log_1mw;
  Scalar w;
};

/// log f_pi(Y | sigma_hat) - log f(Y | X_j theta_hat, sigma_hat) for the
/// smooth prior component. Approx has no smooth branch: -inf, which makes
/// the mixture bracket collapse to log w downstream.
template <class Scalar>
Scalar log_marginal_ratio(PriorKind prior, const Dataset<Scalar>& data, const ModelIndex& j,
                          const FitResult<Scalar>& f) {
  const Scalar p = Scalar(f.p);
  switch (prior) {
    case PriorKind::Normal: {
      const Scalar quad = quadform_smoothed(data, j, f);
      const Scalar cap = logdet_capacitance(data, j);
      return (Scalar(f.n) * p - quad) / Scalar(2) - (p / Scalar(2)) * cap;
    }
    case PriorKind::Uniform:
      return (Scalar(f.k_j) * p / Scalar(2)) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) -
             (p / Scalar(2)) * f.logdet_gram;
    case PriorKind::Approx:
      return -std::numeric_limits<Scalar>::infinity();
  }
  return -std::numeric_limits<Scalar>::infinity();
}

/// Mixture weight in log space. fit/data/j are required only by the
/// BetaPosterior variant (and only with a Normal/Uniform marginal).
template <class Scalar>
WeightLogs<Scalar> weight_logs(const WeightScheme& scheme, Index n, Index p, Index k_j,
                               const FitResult<Scalar>* fitres, const Dataset<Scalar>* data,
                               const ModelIndex* j) {
  if (n < 2 || p < 1 || k_j < 1) {
    throw std::invalid_argument("weight: requires n > 1, p >= 1, k_j >= 1");
  }
  const Scalar log_n = std::log(Scalar(n));
  const Scalar log_p = std::log(Scalar(p));
  const Scalar k = Scalar(k_j);

  WeightLogs<Scalar> out{};
  switch (scheme.kind) {
    case WeightScheme::Kind::RatioPower: {
      const Scalar a = Scalar(scheme.epsilon) * k * log_p;
      const Scalar b = Scalar(scheme.epsilon) * k * log_n;
      out.log_w = -log1p_exp(b - a);
      out.log_1mw = -log1p_exp(a - b);
      break;
    }
    case WeightScheme::Kind::InversePower: {
      out.log_w = -Scalar(scheme.epsilon) * k * log_n;
      out.log_1mw = std::log1p(-std::exp(out.log_w));
      break;
    }
    case WeightScheme::Kind::BetaPosterior: {
      const Scalar log_alpha = scheme.alpha.kind == WeightScheme::Alpha::Kind::Constant
                                   ? std::log(Scalar(scheme.alpha.constant))
                                   : Scalar(scheme.alpha.epsilon) * k * log_p;
      const Scalar log_beta = Scalar(scheme.beta_epsilon) * k * log_n;
      const Scalar log_apb1 = log_add_exp(log_add_exp(log_alpha, log_beta), Scalar(0));
      if (scheme.prior == PriorKind::Approx) {
        // Data-free limit of the posterior mean: (alpha + 1) / (alpha + beta + 1).
        out.log_w = log_add_exp(log_alpha, Scalar(0)) - log_apb1;
      } else {
        if (fitres == nullptr || data == nullptr || j == nullptr) {
          throw MissingFit("BetaPosterior weight needs the fitted model and data");
        }
        const Scalar A = log_marginal_ratio(scheme.prior, *data, *j, *fitres);
        // w = alpha/(alpha+beta+1) * (1 + 1/(beta e^A + alpha))
        const Scalar denom = log_add_exp(log_beta + A, log_alpha);
        out.log_w = log_alpha - log_apb1 + log1p_exp(-denom);
      }
      out.log_1mw = std::log1p(-std::exp(out.log_w));
      break;
    }
  }
  out.w = std::exp(out.log_w);
  return out;
}

}  // namespace detail

/// Mixture weight w_j in (0, 1) for the given scheme.
template <class Scalar = double>
Scalar weight(const WeightScheme& scheme, Index n, Index p, Index k_j,
              const FitResult<Scalar>* fitres = nullptr, const Dataset<Scalar>* data = nullptr,
              const ModelIndex* j = nullptr) {
  return detail::weight_logs<Scalar>(scheme, n, p, k_j, fitres, data, j).w;
}

/// Finite-sample bias of the plug-in predictive density:
/// n p (2 k_j + p + 1) / (n - p - k_j - 1).
template <class Scalar = double>
Scalar penalty_exact_aic(Index n, Index p, Index k_j) {
  if (n <= p + k_j + 1) {
    throw DimensionGuard("exact-AIC penalty undefined: n <= p + k_j + 1 (n=" +
                         std::to_string(n) + ", p=" + std::to_string(p) +
                         ", k_j=" + std::to_string(k_j) + ")");
  }
  return Scalar(n) * Scalar(p) * Scalar(2 * k_j + p + 1) / Scalar(n - p - k_j - 1);
}

/// The Auto rule for the GIC tuning sequence: beta = (log n) p^{-1/2}.
template <class Scalar = double>
Scalar gic_auto_beta(Index n, Index p) {
  return std::log(Scalar(n)) / std::sqrt(Scalar(p));
}

/// GIC penalty coefficient alpha = beta - n log(1 - p/n) / p.
template <class Scalar = double>
Scalar gic_alpha(std::optional<double> beta, Index n, Index p) {
  const Scalar b = beta ? Scalar(*beta) : gic_auto_beta<Scalar>(n, p);
  return b - Scalar(n) * std::log1p(-Scalar(p) / Scalar(n)) / Scalar(p);
}

/// Throws DimensionGuard when the criterion is undefined at (n, p, k_j).
/// Callers that skip models should run this before fitting.
inline void require_scoreable(const CriterionSpec& spec, Index n, Index p, Index k_j) {
  switch (spec.kind) {
    case CriterionSpec::Kind::AIC:
      break;
    case CriterionSpec::Kind::AICc:
    case CriterionSpec::Kind::MPIC:
      if (n <= p + k_j + 1) {
        throw DimensionGuard(spec.label() + " undefined: n <= p + k_j + 1 (n=" +
                             std::to_string(n) + ", p=" + std::to_string(p) +
                             ", k_j=" + std::to_string(k_j) + ")");
      }
      break;
    case CriterionSpec::Kind::BIC:
    case CriterionSpec::Kind::GIC:
      if (n < 2) throw DimensionGuard(spec.label() + " undefined: n < 2");
      if (spec.kind == CriterionSpec::Kind::GIC && p >= n) {
        throw DimensionGuard("gic undefined: p >= n");
      }
      break;
  }
}

/// Scores an already-fitted model. Lets callers share one fit across criteria.
template <class Scalar>
Score<Scalar> score_fit(const Dataset<Scalar>& data, const ModelIndex& j,
                        const FitResult<Scalar>& f, const CriterionSpec& spec) {
  require_scoreable(spec, f.n, f.p, f.k_j);
  const Scalar dim = Scalar(f.k_j) * Scalar(f.p) + Scalar(f.p) * Scalar(f.p + 1) / Scalar(2);

  Score<Scalar> s;
  s.neg2loglik = f.neg2loglik;
  switch (spec.kind) {
    case CriterionSpec::Kind::AIC:
      s.penalty = Scalar(2) * dim;
      break;
    case CriterionSpec::Kind::AICc:
      s.penalty = penalty_exact_aic<Scalar>(f.n, f.p, f.k_j);
      break;
    case CriterionSpec::Kind::BIC:
      s.penalty = std::log(Scalar(f.n)) * dim;
      break;
    case CriterionSpec::Kind::GIC:
      s.penalty = gic_alpha<Scalar>(spec.gic_beta, f.n, f.p) * dim;
      break;
    case CriterionSpec::Kind::MPIC: {
      const auto wl = detail::weight_logs<Scalar>(spec.weight, f.n, f.p, f.k_j, &f, &data, &j);
      const Scalar A = detail::log_marginal_ratio(spec.prior, data, j, f);
      const Scalar mix = A == -std::numeric_limits<Scalar>::infinity()
                             ? Scalar(0)
                             : detail::log1p_exp(wl.log_1mw + A - wl.log_w);
      s.penalty = penalty_exact_aic<Scalar>(f.n, f.p, f.k_j) -
                  Scalar(2) * wl.log_w - Scalar(2) * mix;
      s.w_used = wl.w;
      s.mix_log_ratio = mix;
      break;
    }
  }
  s.value = s.neg2loglik + s.penalty;
  return s;
}

/// Fits the candidate and scores it under the criterion.
template <class Scalar>
Score<Scalar> score(const Dataset<Scalar>& data, const ModelIndex& j, const CriterionSpec& spec) {
  require_scoreable(spec, data.n(), data.p(), j.k());
  const FitResult<Scalar> f = fit(data, j);
  return score_fit(data, j, f, spec);
}

}  // namespace mpicsel
