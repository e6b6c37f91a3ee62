#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "taafs/taaf.hpp"
#include "taafs/topology.hpp"

namespace taafs {

enum class FixedActivation { Tanh, Sigmoid, Relu, LeakyRelu, Silu, None };

const char* fixed_activation_name(FixedActivation tag);
std::optional<FixedActivation> parse_fixed_activation(std::string_view name);

inline constexpr double kLeakyReluAlpha = 0.01;

double fixed_activation(FixedActivation tag, double z);
double fixed_activation_derivative(FixedActivation tag, double z);

/// Either a fixed activation tag or a trainable-unit family spec.
struct ActivationChoice {
  bool taaf = false;
  FixedActivation fixed = FixedActivation::Tanh;
  BasisSpec spec{};

  std::string text() const;
};

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // row-major, out x in
  std::vector<double> biases;   // out
  bool activated = false;
};

/// A full model: dense layers flattened across the named sub-networks of the
/// topology, the activation choice, and (for trainable activations) the unit
/// pool plus the neuron->unit binding.
struct Model {
  Topology topology;
  std::vector<DenseLayer> layers;
  ActivationChoice activation;
  GranularityScheme scheme = GranularityScheme::PerLayer;
  Normalizer normalizer = Normalizer::Tanh;
  bool unit_bias = false;
  std::vector<TaafUnit> units;
  std::vector<std::vector<int>> layer_units;  // [flat layer][neuron] -> unit

  int input_dim() const { return topology.input_dim; }
  const TaafUnit* find_unit(std::string_view id) const;
};

/// Builds the model with Glorot-uniform weights (seeded) and, when the
/// activation is trainable, units initialized to reproduce tanh.
Model build_model(const Topology& topo, const ActivationChoice& act,
                  GranularityScheme scheme, Normalizer normalizer,
                  bool unit_bias, std::uint64_t seed);

struct ParamCount {
  long total = 0;
  long taaf_added = 0;  // surplus over the fixed-activation baseline
};
ParamCount parameter_count(const Model& model);

struct LayerCache {
  std::vector<double> input;
  std::vector<double> z;
  std::vector<double> out;
  std::vector<TaafCache> taaf;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  double output = 0.0;
};

/// Runs the layers in order and returns the scalar output. The cache retains
/// everything backward needs; buffers are reused across calls.
double forward(const Model& model, std::span<const double> x, ForwardCache& cache);

/// Gradients for every trainable plus the input, shaped like the model.
/// backward() accumulates, so zero() between batches.
struct GradientBundle {
  std::vector<std::vector<double>> dweights;
  std::vector<std::vector<double>> dbiases;
  std::vector<std::vector<double>> dtheta;
  std::vector<double> dunit_bias;
  std::vector<double> dinput;

  void init_shapes(const Model& model);
  void zero();

 private:
  std::vector<double> delta_a_, delta_b_;  // backprop scratch
  friend void backward(const Model&, ForwardCache&, double, GradientBundle&);
};

void backward(const Model& model, ForwardCache& cache, double upstream,
              GradientBundle& grads);

/// Force convention: returns -dE/dx for the model output E at features x.
std::vector<double> input_gradient(const Model& model, std::span<const double> x);

/// Trainable parameter blocks in a fixed order (per-layer weights then
/// biases, then per-unit theta and enabled unit biases). grad_blocks yields
/// the matching order over a bundle.
std::vector<std::span<double>> param_blocks(Model& model);
std::vector<std::span<const double>> grad_blocks(const GradientBundle& grads,
                                                 const Model& model);

}  // namespace taafs
