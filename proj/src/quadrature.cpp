#include "papr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace papr {
namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 abscissae).
// Odd-indexed nodes and the midpoint are the embedded Gauss-7 nodes.
constexpr double kNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kKronrodWeights[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment evaluate_segment(const std::function<double(double)>& f, double a,
                         double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }

  Segment s;
  s.a = a;
  s.b = b;
  s.value = kronrod * half;
  s.error = std::abs((kronrod - gauss) * half);
  return s;
}

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const {
    return x.error < y.error;
  }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureSpec& spec) {
  if (!(spec.relative_tolerance > 0.0) || !(spec.absolute_tolerance > 0.0))
    throw std::invalid_argument("integrate_adaptive: tolerances must be > 0");
  if (spec.max_subdivisions < 1)
    throw std::invalid_argument(
        "integrate_adaptive: max_subdivisions must be >= 1");

  std::vector<Segment> heap;
  heap.push_back(evaluate_segment(f, a, b));

  int subdivisions = 0;
  for (;;) {
    double total = 0.0, error = 0.0;
    for (const Segment& s : heap) {
      total += s.value;
      error += s.error;
    }
    const double target = std::max(spec.absolute_tolerance,
                                   spec.relative_tolerance * std::abs(total));
    if (error <= target)
      return QuadratureResult{total, error, subdivisions};
    if (subdivisions >= spec.max_subdivisions)
      throw QuadratureError(
          "integrate_adaptive: tolerance not reached within " +
              std::to_string(spec.max_subdivisions) +
              " subdivisions (error estimate " + std::to_string(error) + ")",
          total, error);

    std::pop_heap(heap.begin(), heap.end(), ByError{});
    const Segment worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(evaluate_segment(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), ByError{});
    heap.push_back(evaluate_segment(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), ByError{});
    ++subdivisions;
  }
}

}  // namespace papr
