#ifndef LAMELAB_FITTING_HPP
#define LAMELAB_FITTING_HPP

#include <vector>

namespace lamelab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// OLS on (log2 x, log2 y); the slope is the fitted power law exponent.
// All y must be positive.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lamelab

#endif
