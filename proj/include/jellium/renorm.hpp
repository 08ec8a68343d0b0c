#pragma once

#include <string>
#include <vector>

#include "jellium/periodic.hpp"

namespace jellium {

/// Renormalized energy of the periodic field generated by cfg, per point:
/// (2 pi / n) e_per(cfg).
double w_periodic(const PointConfiguration& cfg, const EwaldParams& p = {});

/// m (w - (1/4) log m): the density-m minimum quoted for the standard
/// rescaling of fields.
double w_scale(double w, double m);
/// m (w - (pi/2) log m): the rescaling law that holds for w_periodic with
/// the log-kernel normalization used throughout this library.
double w_scale_consistent(double w, double m);

/// w / pi + log(4 pi) / 2.
double c_log_from_w(double w);

/// Constant c_{d,s} linking the Riesz Jellium energy to the renormalized
/// energy, for max(0, d-2) <= s < d.
double c_ds(int d, double s);

struct BoundEntry {
  std::string name;
  double value = 0.0;
  std::string formula;
  std::string source;
  double reference = 0.0;  // published rounded value
};

struct BoundTable {
  std::vector<BoundEntry> entries;

  const BoundEntry& at(const std::string& name) const;
};

BoundTable bound_table();
nlohmann::json to_json(const BoundTable& t);

}  // namespace jellium
