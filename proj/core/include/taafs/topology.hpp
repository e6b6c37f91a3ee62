#pragma once

#include <string>
#include <vector>

namespace taafs {

struct LayerSpec {
  int width = 0;
  bool activated = true;
};

/// One named sub-network (e.g. "embedding", "fitting"); sub-networks chain
/// sequentially, each consuming the previous one's output.
struct SubnetSpec {
  std::string name;
  std::vector<LayerSpec> layers;
};

struct Topology {
  int input_dim = 0;
  std::vector<SubnetSpec> subnets;

  int layer_count() const;
  int activated_layer_count() const;
  int activated_neuron_count() const;
  int output_dim() const;

  /// Throws std::invalid_argument if empty, any width < 1, input_dim < 1,
  /// or the final layer is activated (regression heads stay linear).
  void validate() const;
};

enum class GranularityScheme { Global, PerNetwork, PerLayer, PerNeuron };

const char* scheme_name(GranularityScheme s);

/// Which distinct trainable activation units exist and which unit each
/// activated neuron is bound to. Shared schemes repeat the same unit index,
/// so accumulating gradients by index realizes the sharing.
struct UnitBinding {
  std::vector<std::string> unit_ids;
  // [flat layer][neuron] -> unit index; empty vector for unactivated layers
  std::vector<std::vector<int>> layer_units;

  int unit_count() const { return static_cast<int>(unit_ids.size()); }
};

UnitBinding instantiate_units(GranularityScheme scheme, const Topology& topo);

}  // namespace taafs
