#include "taafs/taaf.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace taafs {

namespace {

// Solves the SPD system (B^T B) theta = B^T t by Cholesky. Retries with a
// small ridge if a pivot collapses (ill-conditioned high-order families).
std::vector<double> solve_normal_equations(const std::vector<double>& bmat,
                                           const std::vector<double>& target,
                                           int rows, int cols) {
  std::vector<double> ata(static_cast<std::size_t>(cols) * cols, 0.0);
  std::vector<double> atb(static_cast<std::size_t>(cols), 0.0);
  for (int r = 0; r < rows; ++r) {
    const double* row = &bmat[static_cast<std::size_t>(r) * cols];
    for (int i = 0; i < cols; ++i) {
      atb[i] += row[i] * target[r];
      for (int j = i; j < cols; ++j) {
        ata[static_cast<std::size_t>(i) * cols + j] += row[i] * row[j];
      }
    }
  }
  double trace = 0.0;
  for (int i = 0; i < cols; ++i) trace += ata[static_cast<std::size_t>(i) * cols + i];

  for (double ridge : {0.0, 1e-12 * trace, 1e-8 * trace}) {
    std::vector<double> chol(ata);
    for (int i = 0; i < cols; ++i) chol[static_cast<std::size_t>(i) * cols + i] += ridge;
    bool ok = true;
    for (int i = 0; i < cols && ok; ++i) {
      for (int j = i; j < cols; ++j) {
        double sum = chol[static_cast<std::size_t>(i) * cols + j];
        for (int k = 0; k < i; ++k) {
          sum -= chol[static_cast<std::size_t>(k) * cols + i] *
                 chol[static_cast<std::size_t>(k) * cols + j];
        }
        if (i == j) {
          if (sum <= 0.0) {
            ok = false;
            break;
          }
          chol[static_cast<std::size_t>(i) * cols + j] = std::sqrt(sum);
        } else {
          chol[static_cast<std::size_t>(i) * cols + j] =
              sum / chol[static_cast<std::size_t>(i) * cols + i];
        }
      }
    }
    if (!ok) continue;
    // forward then back substitution with the upper-triangular factor
    std::vector<double> y(atb);
    for (int i = 0; i < cols; ++i) {
      for (int k = 0; k < i; ++k) y[i] -= chol[static_cast<std::size_t>(k) * cols + i] * y[k];
      y[i] /= chol[static_cast<std::size_t>(i) * cols + i];
    }
    for (int i = cols - 1; i >= 0; --i) {
      for (int k = i + 1; k < cols; ++k) {
        y[i] -= chol[static_cast<std::size_t>(i) * cols + k] * y[k];
      }
      y[i] /= chol[static_cast<std::size_t>(i) * cols + i];
    }
    return y;
  }
  throw std::runtime_error("fit_theta_to_tanh: normal equations not positive definite");
}

}  // namespace

const char* normalizer_name(Normalizer n) {
  return n == Normalizer::Tanh ? "tanh" : "identity";
}

TaafUnit make_unit(const BasisSpec& spec, Normalizer normalizer,
                   bool bias_enabled, std::string id) {
  spec.validate();
  TaafUnit unit;
  unit.spec = spec;
  unit.theta.assign(static_cast<std::size_t>(spec.count()), 0.0);
  unit.bias_enabled = bias_enabled;
  unit.normalizer = normalizer;
  unit.id = std::move(id);
  if (spec.family == BasisFamily::BSpline) {
    unit.knots = make_knot_vector(spec);
  }
  return unit;
}

void fit_theta_to_tanh(TaafUnit& unit) {
  constexpr int kSamples = 64;
  const int cols = unit.spec.count();
  std::vector<double> bmat(static_cast<std::size_t>(kSamples) * cols);
  std::vector<double> target(kSamples);
  for (int r = 0; r < kSamples; ++r) {
    const double t = static_cast<double>(r) / (kSamples - 1);
    const double a = unit.spec.domain_lo + t * (unit.spec.domain_hi - unit.spec.domain_lo);
    basis_values(unit.spec, unit.knots, a,
                 {&bmat[static_cast<std::size_t>(r) * cols], static_cast<std::size_t>(cols)});
    target[r] = unit.normalizer == Normalizer::Tanh ? a : std::tanh(a);
  }
  unit.theta = solve_normal_equations(bmat, target, kSamples, cols);
  unit.bias = 0.0;
}

double taaf_forward(const TaafUnit& unit, double z, TaafCache& cache) {
  cache.input = z;
  if (unit.normalizer == Normalizer::Tanh) {
    const double a = std::tanh(z);
    cache.normalized = a;
    cache.norm_deriv = 1.0 - a * a;
  } else {
    cache.normalized = z;
    cache.norm_deriv = 1.0;
  }
  cache.basis.resize(unit.theta.size());
  basis_values(unit.spec, unit.knots, cache.normalized, cache.basis);
  double y = unit.bias;
  for (std::size_t i = 0; i < unit.theta.size(); ++i) {
    y += unit.theta[i] * cache.basis[i];
  }
  return y;
}

double taaf_backward(const TaafUnit& unit, TaafCache& cache, double upstream,
                     std::span<double> dtheta_accum, double& dbias_accum) {
  for (std::size_t i = 0; i < unit.theta.size(); ++i) {
    dtheta_accum[i] += upstream * cache.basis[i];
  }
  dbias_accum += upstream;
  cache.dbasis.resize(unit.theta.size());
  basis_derivatives(unit.spec, unit.knots, cache.normalized, cache.dbasis);
  double slope = 0.0;
  for (std::size_t i = 0; i < unit.theta.size(); ++i) {
    slope += unit.theta[i] * cache.dbasis[i];
  }
  return upstream * slope * cache.norm_deriv;
}

ActivationCurve export_curve(const TaafUnit& unit, int n_samples, int epoch) {
  if (n_samples < 2) {
    throw std::invalid_argument("export_curve: need at least two samples");
  }
  ActivationCurve curve;
  curve.epoch = epoch;
  curve.unit_id = unit.id;
  curve.xs.resize(static_cast<std::size_t>(n_samples));
  curve.ys.resize(static_cast<std::size_t>(n_samples));
  TaafCache cache;
  for (int i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) / (n_samples - 1);
    const double x = kCurveProbeLo + t * (kCurveProbeHi - kCurveProbeLo);
    curve.xs[static_cast<std::size_t>(i)] = x;
    curve.ys[static_cast<std::size_t>(i)] = taaf_forward(unit, x, cache);
  }
  return curve;
}

}  // namespace taafs
