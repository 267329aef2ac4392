// instance.hpp - a problem instance: boundary pair, potential and run options
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "fd_oracle.hpp"
#include "potential.hpp"

namespace halfline {

struct InstanceOptions {
  double eps_class = tolerance::angle_class;
  std::vector<Discretization> ladder = LadderOptions{}.rungs;
  std::vector<double> energies{-0.5};
  int nodes = 0;  ///< BS trapezoid nodes; 0 selects the default for the potential's support
  std::uint64_t seed = 0;
};

struct Instance {
  BoundaryPair pair;
  MatrixPotential potential;
  InstanceOptions options;
  std::vector<std::string> warnings;  ///< load-time notes; not part of the serialized instance
};

}  // namespace halfline
