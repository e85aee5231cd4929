#pragma once

#include <cstdint>
#include <vector>

#include "marchetype/sparse.hpp"

namespace marchetype {

// The bilinear saddle demo min_x max_y x*y, boxed to [-box, box] on both
// coordinates so projections stay inactive near the path. The unique saddle
// point is the origin; the one-loop averaged run approaches it at rate 1/t
// while the restarted two-loop run converges geometrically.
struct ToyConfig {
  double start_x = 5.0;
  double start_y = 5.0;
  double step = 0.2;          // eta = tau; needs step^2 < 1
  double box = 1e6;
  double tolerance = 1e-6;    // on |z_avg|_inf
  Index max_iterations = 5000000;
  bool restarts = true;
};

struct ToyPoint {
  Index iteration = 0;
  double x = 0.0;  // averaged iterate
  double y = 0.0;
};

struct ToyResult {
  bool converged = false;
  Index iterations = 0;
  Index restarts = 0;
  double final_x = 0.0;
  double final_y = 0.0;
  std::vector<ToyPoint> trajectory;        // averaged iterate per iteration
  std::vector<Index> restart_iterations;

  // First iteration whose averaged iterate lies within threshold of the
  // origin in l-inf, or -1 when never reached.
  Index iterations_to(double threshold) const;
};

ToyResult run_toy(const ToyConfig& config);

}  // namespace marchetype
