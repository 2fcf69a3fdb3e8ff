#pragma once

#include "haptofv/grid.hpp"

namespace haptofv {

struct State {
  Field c1;
  Field c2;
  Field h;
  Field tau;
  double t = 0.0;

  State() = default;
  explicit State(const Grid& g, double fill = 0.0)
      : c1(g, fill), c2(g, fill), h(g, fill), tau(g, fill) {}

  const Grid& grid() const { return c1.grid; }

  // All four fields share one grid, are finite and nonnegative;
  // throws std::invalid_argument otherwise.
  void validate() const;
};

} // namespace haptofv
