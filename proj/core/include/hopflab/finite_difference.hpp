#pragma once

#include <type_traits>
#include <utility>

// Central difference stencils used throughout the library. The value type
// only needs vector-space operations (double, Eigen fixed-size vectors and
// matrices all work).

namespace hopflab::fd {

template <class F>
using result_t = std::decay_t<std::invoke_result_t<F&, double>>;

// Second-order accurate first derivative.
template <class F>
result_t<F> first2(F&& f, double x, double h) {
  result_t<F> plus = f(x + h);
  result_t<F> minus = f(x - h);
  return result_t<F>((plus - minus) / (2.0 * h));
}

// Fourth-order accurate first derivative.
template <class F>
result_t<F> first4(F&& f, double x, double h) {
  result_t<F> p1 = f(x + h);
  result_t<F> m1 = f(x - h);
  result_t<F> p2 = f(x + 2.0 * h);
  result_t<F> m2 = f(x - 2.0 * h);
  return result_t<F>((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h));
}

// Fourth-order accurate second derivative; center is f(x), passed in to save
// an evaluation.
template <class F, class V>
result_t<F> second4(F&& f, const V& center, double x, double h) {
  result_t<F> p1 = f(x + h);
  result_t<F> m1 = f(x - h);
  result_t<F> p2 = f(x + 2.0 * h);
  result_t<F> m2 = f(x - 2.0 * h);
  return result_t<F>((16.0 * (p1 + m1) - (p2 + m2) - 30.0 * center) / (12.0 * h * h));
}

}  // namespace hopflab::fd
