#pragma once

// Closed-form constants and thresholds: the dimension constants C_d and
// C_d', the width threshold M, the iteration cap T0 with its admissible
// interval, and the sample threshold N0.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pinnball {

struct DimensionConstants {
  double c_d = 0.0;
  double c_d_prime = 0.0;
};

inline DimensionConstants constants_cd(std::size_t d) {
  if (d < 1) throw std::invalid_argument("constants_cd: d >= 1");
  const double dd = double(d);
  DimensionConstants out;
  out.c_d = 2.0 * std::pow(dd, 2.5) + 4.0 * dd * dd +
            26.0 * std::pow(dd, 1.5) + 12.0 * dd;
  out.c_d_prime = 4.0 * std::pow(dd, 2.5) + 12.0 * dd * dd +
                  60.0 * std::pow(dd, 1.5) + 76.0 * dd +
                  24.0 * std::sqrt(dd);
  return out;
}

struct ThresholdInputs {
  double epsilon = 0.1;  // target accuracy, in (0, 1]
  double delta = 0.1;    // failure probability
  double f_norm = 1.0;   // upper bound on the class norm of f
  double alpha = 0.0;
  double beta = 0.5;
  std::size_t d = 3;

  void validate() const {
    if (!(epsilon > 0.0) || epsilon > 1.0)
      throw std::invalid_argument("ThresholdInputs: epsilon in (0,1]");
    if (!(delta > 0.0) || !(delta < 1.0))
      throw std::invalid_argument("ThresholdInputs: delta in (0,1)");
    if (f_norm < 0.0) throw std::invalid_argument("ThresholdInputs: f_norm >= 0");
    if (alpha < 0.0 || beta < 0.0)
      throw std::invalid_argument("ThresholdInputs: alpha,beta >= 0");
    if (d < 1) throw std::invalid_argument("ThresholdInputs: d >= 1");
  }
};

namespace detail {

inline void require_positive_exponent(double denom, const std::string& name) {
  if (!(denom > 0.0))
    throw std::invalid_argument("threshold: exponent denominator " + name +
                                " = " + std::to_string(denom) +
                                " violates the hypothesis alpha+3*beta > 1");
}

}  // namespace detail

// width threshold: maximum of the four closed-form expressions
inline double width_threshold_M(const ThresholdInputs& in) {
  in.validate();
  const double a = in.alpha, b = in.beta, eps = in.epsilon;
  detail::require_positive_exponent(a + 3.0 * b - 1.0, "alpha+3*beta-1");
  detail::require_positive_exponent(2.0 * a + 5.0 * b - 1.0,
                                    "2*alpha+5*beta-1");
  detail::require_positive_exponent(2.0 * a + 4.0 * b, "2*alpha+4*beta");

  const double cd = constants_cd(in.d).c_d;
  const double cdp = constants_cd(in.d).c_d_prime;
  const double tail = 1.0 + std::sqrt(2.0 * std::log(1.0 / in.delta));

  const double t1 = std::pow(std::pow(2.0 * cd * in.f_norm * tail, 2.0) / eps,
                             1.0 / (2.0 * a + 4.0 * b + 1.0));
  const double t2 = std::pow(cdp / eps, 1.0 / (a + 3.0 * b - 1.0));
  const double t3 =
      std::pow(in.f_norm / eps, 1.0 / (2.0 * a + 5.0 * b - 1.0));
  const double t4 =
      std::pow(in.f_norm * in.f_norm / eps, 1.0 / (2.0 * a + 4.0 * b));
  return std::max({t1, t2, t3, t4});
}

// constant prefactor of T0, depending only on f
inline double cf_constant(double f_norm) {
  return 1.0 / ((f_norm + 1.0) * (f_norm + 1.0) * std::max(f_norm, 1.0));
}

// iteration cap: C_f times the minimum of the eight m-power terms
inline double iteration_cap_T0(double m, const ThresholdInputs& in) {
  in.validate();
  if (!(m > 0.0)) throw std::invalid_argument("iteration_cap_T0: m > 0");
  const double a = in.alpha, b = in.beta, eps = in.epsilon;
  detail::require_positive_exponent(a + 3.0 * b - 1.0, "alpha+3*beta-1");

  const double terms[8] = {
      std::pow(m, (1.0 + 3.0 * a + b) / 2.0) / std::pow(eps, 0.75),
      std::pow(m, (1.0 + 5.0 * a + 3.0 * b) / 3.0) / std::pow(eps, 2.0 / 3.0),
      std::pow(m, (2.0 + 4.0 * a) / 3.0) / std::pow(eps, 2.0 / 3.0),
      std::pow(m, 2.0 * a + 2.0 * b) / std::sqrt(eps),
      std::pow(m, -1.0 + 3.0 * a + 5.0 * b) / eps,
      std::pow(m, (2.0 + 5.0 * a + 2.0 * b) / 3.0) / std::pow(eps, 2.0 / 3.0),
      std::pow(m, (1.0 + 4.0 * a + 3.0 * b) / 2.0) / std::sqrt(eps),
      std::pow(m, 1.0 + 2.0 * a + b) / std::sqrt(eps),
  };
  return cf_constant(in.f_norm) * *std::min_element(terms, terms + 8);
}

struct AdmissibleIterations {
  double lower = 0.0;  // ||f||^2 / eps^2
  double upper = 0.0;  // T0
  bool empty = false;
};

inline AdmissibleIterations admissible_T(double m, const ThresholdInputs& in) {
  AdmissibleIterations out;
  out.lower = in.f_norm * in.f_norm / (in.epsilon * in.epsilon);
  out.upper = iteration_cap_T0(m, in);
  out.empty = !(out.upper > out.lower);
  return out;
}

// sample threshold N0 for the generalization bound
inline double sample_threshold_N0(double m, double eta, double T,
                                  const ThresholdInputs& in) {
  in.validate();
  if (!(m > 0.0) || !(eta > 0.0) || !(T > 0.0))
    throw std::invalid_argument("sample_threshold_N0: m, eta, T > 0");
  const double base =
      std::pow(m, -in.alpha - 2.0 * in.beta) * in.f_norm + 1.0;
  const double drift_term =
      eta * eta * T * T * std::pow(m, -4.0 * in.alpha);
  return (base * base) / (in.epsilon * in.epsilon) *
         std::max(std::log(1.0 / in.delta), drift_term);
}

}  // namespace pinnball
