#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace papr {

/// Controls for the adaptive integrator. Defaults target 1e-10 relative
/// accuracy, which is what the closed-form cross-checks in this library need.
struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-12;
  int max_subdivisions = 512;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

/// Thrown when the requested tolerance was not reached within
/// max_subdivisions. Carries the best value and its error estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value_(value), error_(error_estimate) {}

  double value() const { return value_; }
  double error_estimate() const { return error_; }

 private:
  double value_;
  double error_;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// handled by subdivision toward the endpoint.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureSpec& spec = {});

}  // namespace papr
