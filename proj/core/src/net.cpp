#include "taafs/net.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "taafs/rng.hpp"

namespace taafs {

namespace {
constexpr std::uint64_t kWeightStream = 0x57454947;  // weight-init stream tag
}

const char* fixed_activation_name(FixedActivation tag) {
  switch (tag) {
    case FixedActivation::Tanh: return "tanh";
    case FixedActivation::Sigmoid: return "sigmoid";
    case FixedActivation::Relu: return "relu";
    case FixedActivation::LeakyRelu: return "lrelu";
    case FixedActivation::Silu: return "silu";
    case FixedActivation::None: return "none";
  }
  return "?";
}

std::optional<FixedActivation> parse_fixed_activation(std::string_view name) {
  for (FixedActivation t :
       {FixedActivation::Tanh, FixedActivation::Sigmoid, FixedActivation::Relu,
        FixedActivation::LeakyRelu, FixedActivation::Silu, FixedActivation::None}) {
    if (name == fixed_activation_name(t)) return t;
  }
  return std::nullopt;
}

double fixed_activation(FixedActivation tag, double z) {
  switch (tag) {
    case FixedActivation::Tanh: return std::tanh(z);
    case FixedActivation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case FixedActivation::Relu: return z > 0.0 ? z : 0.0;
    case FixedActivation::LeakyRelu: return z > 0.0 ? z : kLeakyReluAlpha * z;
    case FixedActivation::Silu: return z / (1.0 + std::exp(-z));
    case FixedActivation::None: return z;
  }
  return z;
}

double fixed_activation_derivative(FixedActivation tag, double z) {
  switch (tag) {
    case FixedActivation::Tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case FixedActivation::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case FixedActivation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case FixedActivation::LeakyRelu: return z > 0.0 ? 1.0 : kLeakyReluAlpha;
    case FixedActivation::Silu: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 + z * (1.0 - s));
    }
    case FixedActivation::None: return 1.0;
  }
  return 1.0;
}

std::string ActivationChoice::text() const {
  if (!taaf) return fixed_activation_name(fixed);
  return std::string("taaf:") + family_name(spec.family);
}

const TaafUnit* Model::find_unit(std::string_view id) const {
  for (const auto& u : units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

Model build_model(const Topology& topo, const ActivationChoice& act,
                  GranularityScheme scheme, Normalizer normalizer,
                  bool unit_bias, std::uint64_t seed) {
  topo.validate();
  Model model;
  model.topology = topo;
  model.activation = act;
  model.scheme = scheme;
  model.normalizer = normalizer;
  model.unit_bias = unit_bias;

  Rng rng(derive_seed(seed, kWeightStream));
  int in = topo.input_dim;
  for (const auto& net : topo.subnets) {
    for (const auto& layer : net.layers) {
      DenseLayer d;
      d.in = in;
      d.out = layer.width;
      d.activated = layer.activated;
      d.weights.resize(static_cast<std::size_t>(d.in) * d.out);
      d.biases.assign(static_cast<std::size_t>(d.out), 0.0);
      const double s = std::sqrt(6.0 / (d.in + d.out));
      for (auto& w : d.weights) w = rng.uniform(-s, s);
      model.layers.push_back(std::move(d));
      in = layer.width;
    }
  }

  if (act.taaf) {
    act.spec.validate();
    UnitBinding binding = instantiate_units(scheme, topo);
    model.layer_units = std::move(binding.layer_units);
    model.units.reserve(binding.unit_ids.size());
    for (auto& id : binding.unit_ids) {
      TaafUnit unit = make_unit(act.spec, normalizer, unit_bias, std::move(id));
      fit_theta_to_tanh(unit);
      model.units.push_back(std::move(unit));
    }
  }
  return model;
}

ParamCount parameter_count(const Model& model) {
  ParamCount pc;
  for (const auto& l : model.layers) {
    pc.total += static_cast<long>(l.weights.size()) + static_cast<long>(l.biases.size());
  }
  for (const auto& u : model.units) pc.taaf_added += u.param_count();
  pc.total += pc.taaf_added;
  return pc;
}

double forward(const Model& model, std::span<const double> x, ForwardCache& cache) {
  assert(static_cast<int>(x.size()) == model.input_dim());
  cache.layers.resize(model.layers.size());
  std::span<const double> cur = x;
  for (std::size_t li = 0; li < model.layers.size(); ++li) {
    const DenseLayer& layer = model.layers[li];
    LayerCache& lc = cache.layers[li];
    lc.input.assign(cur.begin(), cur.end());
    lc.z.resize(static_cast<std::size_t>(layer.out));
    for (int i = 0; i < layer.out; ++i) {
      const double* wrow = &layer.weights[static_cast<std::size_t>(i) * layer.in];
      double acc = layer.biases[static_cast<std::size_t>(i)];
      for (int j = 0; j < layer.in; ++j) acc += wrow[j] * lc.input[static_cast<std::size_t>(j)];
      lc.z[static_cast<std::size_t>(i)] = acc;
    }
    lc.out.resize(static_cast<std::size_t>(layer.out));
    if (!layer.activated) {
      lc.out = lc.z;
      lc.taaf.clear();
    } else if (model.activation.taaf) {
      lc.taaf.resize(static_cast<std::size_t>(layer.out));
      const auto& slots = model.layer_units[li];
      for (int i = 0; i < layer.out; ++i) {
        const TaafUnit& unit = model.units[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])];
        lc.out[static_cast<std::size_t>(i)] =
            taaf_forward(unit, lc.z[static_cast<std::size_t>(i)], lc.taaf[static_cast<std::size_t>(i)]);
      }
    } else {
      lc.taaf.clear();
      for (int i = 0; i < layer.out; ++i) {
        lc.out[static_cast<std::size_t>(i)] =
            fixed_activation(model.activation.fixed, lc.z[static_cast<std::size_t>(i)]);
      }
    }
    cur = lc.out;
  }
  cache.output = cur[0];
  return cache.output;
}

void GradientBundle::init_shapes(const Model& model) {
  dweights.resize(model.layers.size());
  dbiases.resize(model.layers.size());
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    dweights[i].assign(model.layers[i].weights.size(), 0.0);
    dbiases[i].assign(model.layers[i].biases.size(), 0.0);
  }
  dtheta.resize(model.units.size());
  dunit_bias.assign(model.units.size(), 0.0);
  for (std::size_t i = 0; i < model.units.size(); ++i) {
    dtheta[i].assign(model.units[i].theta.size(), 0.0);
  }
  dinput.assign(static_cast<std::size_t>(model.input_dim()), 0.0);
}

void GradientBundle::zero() {
  for (auto& v : dweights) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : dbiases) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : dtheta) std::fill(v.begin(), v.end(), 0.0);
  std::fill(dunit_bias.begin(), dunit_bias.end(), 0.0);
  std::fill(dinput.begin(), dinput.end(), 0.0);
}

void backward(const Model& model, ForwardCache& cache, double upstream,
              GradientBundle& grads) {
  assert(grads.dweights.size() == model.layers.size());
  std::vector<double>& delta = grads.delta_a_;
  std::vector<double>& next = grads.delta_b_;
  delta.assign(1, upstream);  // output layer is scalar
  for (std::size_t li = model.layers.size(); li-- > 0;) {
    const DenseLayer& layer = model.layers[li];
    LayerCache& lc = cache.layers[li];
    // delta currently holds dE/d(out of this layer); fold in the activation
    if (layer.activated) {
      if (model.activation.taaf) {
        const auto& slots = model.layer_units[li];
        for (int i = 0; i < layer.out; ++i) {
          const int u = slots[static_cast<std::size_t>(i)];
          delta[static_cast<std::size_t>(i)] = taaf_backward(
              model.units[static_cast<std::size_t>(u)], lc.taaf[static_cast<std::size_t>(i)],
              delta[static_cast<std::size_t>(i)], grads.dtheta[static_cast<std::size_t>(u)],
              grads.dunit_bias[static_cast<std::size_t>(u)]);
        }
      } else {
        for (int i = 0; i < layer.out; ++i) {
          delta[static_cast<std::size_t>(i)] *=
              fixed_activation_derivative(model.activation.fixed, lc.z[static_cast<std::size_t>(i)]);
        }
      }
    }
    // delta now holds dE/dz
    auto& dw = grads.dweights[li];
    auto& db = grads.dbiases[li];
    for (int i = 0; i < layer.out; ++i) {
      const double d = delta[static_cast<std::size_t>(i)];
      db[static_cast<std::size_t>(i)] += d;
      double* dwrow = &dw[static_cast<std::size_t>(i) * layer.in];
      for (int j = 0; j < layer.in; ++j) dwrow[j] += d * lc.input[static_cast<std::size_t>(j)];
    }
    next.assign(static_cast<std::size_t>(layer.in), 0.0);
    for (int i = 0; i < layer.out; ++i) {
      const double d = delta[static_cast<std::size_t>(i)];
      const double* wrow = &layer.weights[static_cast<std::size_t>(i) * layer.in];
      for (int j = 0; j < layer.in; ++j) next[static_cast<std::size_t>(j)] += d * wrow[j];
    }
    std::swap(delta, next);
  }
  for (std::size_t j = 0; j < delta.size(); ++j) grads.dinput[j] += delta[j];
}

std::vector<double> input_gradient(const Model& model, std::span<const double> x) {
  ForwardCache cache;
  GradientBundle grads;
  grads.init_shapes(model);
  forward(model, x, cache);
  backward(model, cache, 1.0, grads);
  std::vector<double> force(grads.dinput.size());
  for (std::size_t i = 0; i < force.size(); ++i) force[i] = -grads.dinput[i];
  return force;
}

std::vector<std::span<double>> param_blocks(Model& model) {
  std::vector<std::span<double>> blocks;
  for (auto& l : model.layers) {
    blocks.emplace_back(l.weights);
    blocks.emplace_back(l.biases);
  }
  for (auto& u : model.units) {
    blocks.emplace_back(u.theta);
    if (u.bias_enabled) blocks.emplace_back(&u.bias, 1);
  }
  return blocks;
}

std::vector<std::span<const double>> grad_blocks(const GradientBundle& grads,
                                                 const Model& model) {
  std::vector<std::span<const double>> blocks;
  for (std::size_t i = 0; i < grads.dweights.size(); ++i) {
    blocks.emplace_back(grads.dweights[i]);
    blocks.emplace_back(grads.dbiases[i]);
  }
  for (std::size_t i = 0; i < grads.dtheta.size(); ++i) {
    blocks.emplace_back(grads.dtheta[i]);
    if (model.units[i].bias_enabled) blocks.emplace_back(&grads.dunit_bias[i], 1);
  }
  return blocks;
}

}  // namespace taafs
