#include "marchetype/toy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marchetype {

namespace {

// Normalized duality gap for L(x, y) = x*y over the boxes; the maximizers of
// the radius-r ball problem sit at interval ends, so this is closed-form.
double toy_gap(double x, double y, double r, double box) {
  double y_best = x > 0.0 ? std::min(box, y + r) : std::max(-box, y - r);
  double x_best = y > 0.0 ? std::max(-box, x - r) : std::min(box, x + r);
  return (x * y_best - x_best * y) / r;
}

}  // namespace

Index ToyResult::iterations_to(double threshold) const {
  for (const ToyPoint& p : trajectory) {
    if (std::max(std::abs(p.x), std::abs(p.y)) <= threshold) return p.iteration;
  }
  return -1;
}

ToyResult run_toy(const ToyConfig& config) {
  if (!(config.step > 0.0 && config.step < 1.0)) {
    throw std::invalid_argument("toy: step must lie in (0, 1)");
  }
  const double eta = config.step;
  const double box = config.box;

  double x = std::clamp(config.start_x, -box, box);
  double y = std::clamp(config.start_y, -box, box);

  ToyResult result;

  double anchor_x = x, anchor_y = y;
  double anchor_norm = std::max(std::abs(x), std::abs(y));
  if (anchor_norm <= config.tolerance) {
    result.converged = true;
    result.final_x = x;
    result.final_y = y;
    return result;
  }

  double rho_ref = toy_gap(anchor_x, anchor_y, std::max(1.0, anchor_norm), box);
  double x_avg = 0.0, y_avg = 0.0;
  Index t = 0;

  for (Index iter = 1; iter <= config.max_iterations; ++iter) {
    double x_new = std::clamp(x - eta * y, -box, box);
    double y_new = std::clamp(y + eta * (2.0 * x_new - x), -box, box);
    x = x_new;
    y = y_new;
    ++t;
    x_avg += (x - x_avg) / static_cast<double>(t);
    y_avg += (y - y_avg) / static_cast<double>(t);

    result.trajectory.push_back({iter, x_avg, y_avg});
    result.iterations = iter;

    if (std::max(std::abs(x_avg), std::abs(y_avg)) <= config.tolerance) {
      result.converged = true;
      break;
    }

    if (config.restarts) {
      double r_bar = std::max(std::abs(x_avg - anchor_x), std::abs(y_avg - anchor_y));
      if (r_bar > 0.0 && toy_gap(x_avg, y_avg, r_bar, box) <= 0.5 * rho_ref) {
        x = x_avg;
        y = y_avg;
        anchor_x = x;
        anchor_y = y;
        rho_ref = toy_gap(anchor_x, anchor_y, std::max(r_bar, 1e-300), box);
        x_avg = 0.0;
        y_avg = 0.0;
        t = 0;
        ++result.restarts;
        result.restart_iterations.push_back(iter);
      }
    }
  }

  result.final_x = result.trajectory.empty() ? x : result.trajectory.back().x;
  result.final_y = result.trajectory.empty() ? y : result.trajectory.back().y;
  return result;
}

}  // namespace marchetype
