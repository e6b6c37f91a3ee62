#include "taafs/topology.hpp"

#include <stdexcept>

namespace taafs {

int Topology::layer_count() const {
  int n = 0;
  for (const auto& s : subnets) n += static_cast<int>(s.layers.size());
  return n;
}

int Topology::activated_layer_count() const {
  int n = 0;
  for (const auto& s : subnets) {
    for (const auto& l : s.layers) n += l.activated ? 1 : 0;
  }
  return n;
}

int Topology::activated_neuron_count() const {
  int n = 0;
  for (const auto& s : subnets) {
    for (const auto& l : s.layers) n += l.activated ? l.width : 0;
  }
  return n;
}

int Topology::output_dim() const {
  for (auto s = subnets.rbegin(); s != subnets.rend(); ++s) {
    if (!s->layers.empty()) return s->layers.back().width;
  }
  return 0;
}

void Topology::validate() const {
  if (input_dim < 1) throw std::invalid_argument("topology: input_dim must be >= 1");
  if (layer_count() == 0) throw std::invalid_argument("topology: no layers");
  for (const auto& s : subnets) {
    if (s.name.empty()) throw std::invalid_argument("topology: unnamed sub-network");
    for (const auto& l : s.layers) {
      if (l.width < 1) throw std::invalid_argument("topology: layer width must be >= 1");
    }
  }
  // find last layer overall
  const SubnetSpec* last_net = nullptr;
  for (const auto& s : subnets) {
    if (!s.layers.empty()) last_net = &s;
  }
  if (last_net != nullptr && last_net->layers.back().activated) {
    throw std::invalid_argument("topology: final layer must be unactivated");
  }
}

const char* scheme_name(GranularityScheme s) {
  switch (s) {
    case GranularityScheme::Global: return "global";
    case GranularityScheme::PerNetwork: return "per_network";
    case GranularityScheme::PerLayer: return "per_layer";
    case GranularityScheme::PerNeuron: return "per_neuron";
  }
  return "?";
}

UnitBinding instantiate_units(GranularityScheme scheme, const Topology& topo) {
  topo.validate();
  UnitBinding binding;
  binding.layer_units.resize(static_cast<std::size_t>(topo.layer_count()));

  auto add_unit = [&binding](const std::string& id) {
    binding.unit_ids.push_back(id);
    return static_cast<int>(binding.unit_ids.size()) - 1;
  };

  int global_unit = -1;
  int flat = 0;
  for (const auto& net : topo.subnets) {
    int net_unit = -1;
    int layer_no = 0;
    for (const auto& layer : net.layers) {
      ++layer_no;
      auto& slots = binding.layer_units[static_cast<std::size_t>(flat++)];
      if (!layer.activated) continue;
      slots.resize(static_cast<std::size_t>(layer.width));
      switch (scheme) {
        case GranularityScheme::Global:
          if (global_unit < 0) global_unit = add_unit("global");
          for (auto& s : slots) s = global_unit;
          break;
        case GranularityScheme::PerNetwork:
          if (net_unit < 0) net_unit = add_unit(net.name);
          for (auto& s : slots) s = net_unit;
          break;
        case GranularityScheme::PerLayer: {
          const int u = add_unit(net.name + ".L" + std::to_string(layer_no));
          for (auto& s : slots) s = u;
          break;
        }
        case GranularityScheme::PerNeuron:
          for (int k = 0; k < layer.width; ++k) {
            slots[static_cast<std::size_t>(k)] =
                add_unit(net.name + ".L" + std::to_string(layer_no) + ".N" +
                         std::to_string(k + 1));
          }
          break;
      }
    }
  }
  return binding;
}

}  // namespace taafs
