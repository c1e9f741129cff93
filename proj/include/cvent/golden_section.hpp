#pragma once

#include <cmath>
#include <utility>

namespace cvent {

template <typename Scalar>
struct ScalarMinimum {
  Scalar x;
  Scalar value;
  int iterations;
};

/// Golden-section search for a minimum of a unimodal f on [lo, hi], stopping once
/// the bracket is narrower than xtol. Returns the best point evaluated.
template <typename Scalar, typename F>
ScalarMinimum<Scalar> golden_section_minimize(F&& f, Scalar lo, Scalar hi, Scalar xtol,
                                              int max_iterations = 200) {
  using std::sqrt;
  const Scalar inv_phi = (sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  if (hi < lo) std::swap(lo, hi);
  Scalar x1 = hi - inv_phi * (hi - lo);
  Scalar x2 = lo + inv_phi * (hi - lo);
  Scalar f1 = f(x1);
  Scalar f2 = f(x2);
  int it = 0;
  while (hi - lo > xtol && it < max_iterations) {
    ++it;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? ScalarMinimum<Scalar>{x1, f1, it} : ScalarMinimum<Scalar>{x2, f2, it};
}

}  // namespace cvent
