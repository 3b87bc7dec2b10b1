#pragma once

#include "levytrim/levy_measure.hpp"

#include <map>
#include <string>
#include <vector>

namespace levytrim {

struct CatalogEntry {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;
};

/// Built-in measures. Unknown names or parameters raise ConfigError.
///
///   symmetric-stable            alpha ∈ (0,2), c > 0: Π̄±(x) = c x^{-α}
///   gamma-type                  Π̄±(x) = E1(x), density |y|^{-1} e^{-|y|}
///   gamma-subordinator          positive gamma-type half, γ = 1 − e^{-1}
///   log-doa                     density |y|^{-3} log(e/|y|)^{-2} on 0 < |y| < 1
///   relative-stable-subordinator density y^{-2} log(e/y)^{-2} on (0,1), γ = 1
///   atomic-comb                 atoms at 2^{-k}, k = 0..kmax, total mass c 2^k, a fraction p
///                               on the positive side (alternating = 1 puts even k up, odd down)
///   gaussian-plus-gamma         σ² plus gamma-type jumps
///   gaussian                    σ², γ, no jumps
LevyMeasureSpec catalog(const std::string& name, const std::map<std::string, double>& params = {});

const std::vector<CatalogEntry>& catalog_entries();

}  // namespace levytrim
