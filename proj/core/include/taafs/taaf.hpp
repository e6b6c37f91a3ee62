#pragma once

#include <span>
#include <string>
#include <vector>

#include "taafs/basis.hpp"

namespace taafs {

enum class Normalizer { Tanh, Identity };

const char* normalizer_name(Normalizer n);

/// One trainable activation: a squashing normalizer followed by a trainable
/// linear combination of basis functions, plus an optional scalar bias.
struct TaafUnit {
  BasisSpec spec;
  std::vector<double> theta;  // one coefficient per basis function
  double bias = 0.0;
  bool bias_enabled = false;
  Normalizer normalizer = Normalizer::Tanh;
  std::string id;
  std::vector<double> knots;  // precomputed for the BSpline family

  int param_count() const {
    return static_cast<int>(theta.size()) + (bias_enabled ? 1 : 0);
  }
};

TaafUnit make_unit(const BasisSpec& spec, Normalizer normalizer,
                   bool bias_enabled, std::string id);

/// Least-squares fit of theta so the whole unit initially reproduces tanh:
/// with a Tanh normalizer the combination approximates the identity on the
/// basis domain, with an Identity normalizer it approximates tanh directly.
/// Bias starts at zero either way.
void fit_theta_to_tanh(TaafUnit& unit);

/// Per-evaluation state retained by the forward pass for backprop.
struct TaafCache {
  double input = 0.0;       // z
  double normalized = 0.0;  // a = normalizer(z)
  double norm_deriv = 0.0;  // da/dz
  std::vector<double> basis;
  std::vector<double> dbasis;  // backward scratch
};

/// y = theta . basis(normalizer(z)) + bias
double taaf_forward(const TaafUnit& unit, double z, TaafCache& cache);

/// Accumulates dtheta += upstream * basis(a) and dbias += upstream, and
/// returns dz = upstream * (theta . basis'(a)) * normalizer'(z). Repeated
/// calls with the same accumulators sum contributions, which is what unit
/// sharing across neurons and layers requires.
double taaf_backward(const TaafUnit& unit, TaafCache& cache, double upstream,
                     std::span<double> dtheta_accum, double& dbias_accum);

/// Samples of the unit response over a fixed probe range in pre-normalizer
/// space, tagged with the epoch they were taken at.
struct ActivationCurve {
  std::vector<double> xs;
  std::vector<double> ys;
  int epoch = 0;
  std::string unit_id;
};

inline constexpr double kCurveProbeLo = -3.0;
inline constexpr double kCurveProbeHi = 3.0;

ActivationCurve export_curve(const TaafUnit& unit, int n_samples, int epoch);

}  // namespace taafs
