#pragma once

#include <memory>

#include "inflow/wave_profiles.hpp"

namespace inflow::test {

inline const GasParams kGas{2.0, 1.0};

/// v- = 1, u- = 0.5, v+ = 2, built once per process.
inline std::shared_ptr<const ShockProfile> standard_profile() {
  static const auto p =
      std::make_shared<const ShockProfile>(build_shock_profile(1.0, 0.5, 2.0, kGas));
  return p;
}

}  // namespace inflow::test
