#pragma once

// Real quadrature: globally adaptive Gauss-Kronrod (7/15 points) and a
// composite Simpson rule on a fixed grid.

#include <cstddef>
#include <functional>

namespace dpc {

struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_tol = 0;
  /// Width of the starting panels; 0 means the whole interval is one panel.
  double initial_width = 0;
  std::size_t max_panels = 1'000'000;
};

struct QuadResult {
  double value = 0;
  double error = 0;  // Kronrod-minus-Gauss estimate, summed over panels
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = false;
};

/// Splits the worst panel until the summed error estimate is below
/// max(abs_tol, rel_tol |value|) or the panel budget runs out.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec = {});

/// Composite Simpson on [a, b] with the smallest even panel count whose node
/// spacing is at most `max_spacing`.
QuadResult integrate_simpson(const std::function<double(double)>& f, double a, double b, double max_spacing);

}  // namespace dpc
