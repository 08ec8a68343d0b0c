#pragma once

#include <optional>

#include "json.hpp"

namespace jellium {

/// Energy with its additive breakdown. For periodic energies `background`
/// stays zero; finite-domain Jellium fills all three terms.
struct EnergyReport {
  double total = 0.0;
  double pairwise = 0.0;
  double background = 0.0;
  double self_term = 0.0;
  std::optional<double> gradient_norm;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const EnergyReport& r);

}  // namespace jellium
