#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace soqd {

template <typename Value>
struct QuadratureResult {
  Value value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

namespace detail {

// Gauss-Kronrod 15(7) abscissae/weights on [-1, 1] (QUADPACK dqk15).
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kGk15Weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kGauss7Weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename Value, typename F>
std::pair<Value, double> gk15(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  Value kronrod{};
  Value gauss{};
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kGk15Nodes[i];
    const Value pair_sum = f(mid - dx) + f(mid + dx);
    kronrod += kGk15Weights[i] * pair_sum;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * pair_sum;
  }
  const Value centre = f(mid);
  kronrod += kGk15Weights[7] * centre;
  gauss += kGauss7Weights[3] * centre;

  kronrod *= half;
  gauss *= half;
  const double err = std::abs(kronrod - gauss);
  return {kronrod, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 15(7) on [a, b]. Optional interior
/// breakpoints seed the initial panel list (useful when the integrand has
/// known sharp features). Works for real and complex integrands.
template <typename Value, typename F>
QuadratureResult<Value> integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                           double rel_tol = 0.0, std::size_t max_intervals = 2000,
                                           const std::vector<double>& breakpoints = {}) {
  struct Panel {
    double a, b, error;
    Value value;
    bool operator<(const Panel& other) const { return error < other.error; }
  };

  std::vector<double> edges{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());

  std::priority_queue<Panel> queue;
  Value total{};
  double total_error = 0.0;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto [value, error] = detail::gk15<Value>(f, edges[i], edges[i + 1]);
    evaluations += 15;
    total += value;
    total_error += error;
    queue.push({edges[i], edges[i + 1], error, value});
  }

  auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  while (total_error > tolerance() && queue.size() < max_intervals) {
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at floating-point resolution
      queue.push(worst);
      break;
    }
    auto [left_value, left_error] = detail::gk15<Value>(f, worst.a, mid);
    auto [right_value, right_error] = detail::gk15<Value>(f, mid, worst.b);
    evaluations += 30;
    total += left_value + right_value - worst.value;
    total_error += left_error + right_error - worst.error;
    queue.push({worst.a, mid, left_error, left_value});
    queue.push({mid, worst.b, right_error, right_value});
  }

  QuadratureResult<Value> result;
  result.value = total;
  result.error_estimate = total_error;
  result.evaluations = evaluations;
  result.converged = total_error <= tolerance();
  return result;
}

/// Cauchy principal value of integral_a^b f(x)/(pole - x) dx with the pole
/// strictly inside (a, b).
///
/// Symmetric excision of (pole - eps, pole + eps) leaves an error series in
/// odd powers of eps; Richardson extrapolation over {eps0, eps0/2, eps0/4}
/// removes the eps and eps^3 terms analytically.
template <typename F>
QuadratureResult<double> principal_value(F&& f, double a, double b, double pole,
                                         double abs_tol = 1e-10,
                                         std::size_t max_intervals = 4000) {
  if (!(a < pole && pole < b)) {
    throw std::invalid_argument("principal_value: pole must lie strictly inside (a, b)");
  }
  const double margin = std::min(pole - a, b - pole);
  const double eps0 = margin / 8.0;

  QuadratureResult<double> out;
  auto excised = [&](double eps) {
    auto integrand = [&](double x) { return f(x) / (pole - x); };
    auto left = integrate_adaptive<double>(integrand, a, pole - eps, abs_tol / 4.0, 0.0,
                                           max_intervals);
    auto right = integrate_adaptive<double>(integrand, pole + eps, b, abs_tol / 4.0, 0.0,
                                            max_intervals);
    out.evaluations += left.evaluations + right.evaluations;
    out.error_estimate += left.error_estimate + right.error_estimate;
    out.converged = out.converged && left.converged && right.converged;
    return left.value + right.value;
  };

  out.converged = true;
  const double i1 = excised(eps0);
  const double i2 = excised(eps0 / 2.0);
  const double i3 = excised(eps0 / 4.0);
  const double first2 = 2.0 * i2 - i1;   // removes the O(eps) term
  const double first3 = 2.0 * i3 - i2;
  out.value = (8.0 * first3 - first2) / 7.0;  // removes the O(eps^3) term
  if (!out.converged) {
    throw QuadratureError("principal_value: quadrature did not converge (error estimate " +
                              std::to_string(out.error_estimate) + ")",
                          out.error_estimate);
  }
  return out;
}

}  // namespace soqd
