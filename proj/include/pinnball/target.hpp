#pragma once

// Right-hand-side targets f: polynomials over x_1..x_d, targets
// represented by a coefficient field over the initialization box, and
// the shift transform that removes a nonzero f(0).

#include <cctype>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinnball/model.hpp"
#include "pinnball/rng.hpp"

namespace pinnball {

enum class TargetKind { polynomial, represented, custom };

struct TargetFunction {
  TargetKind kind = TargetKind::custom;
  std::function<double(std::span<const double>)> eval;
  double value_at_zero = 0.0;
  std::string description;

  double operator()(std::span<const double> x) const { return eval(x); }
};

// ---- polynomials --------------------------------------------------------

struct Monomial {
  double coeff = 0.0;
  std::vector<unsigned> powers;  // exponent per coordinate
};

inline double eval_monomials(const std::vector<Monomial>& terms,
                             std::span<const double> x) {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (std::size_t j = 0; j < t.powers.size() && j < x.size(); ++j)
      for (unsigned k = 0; k < t.powers[j]; ++k) v *= x[j];
    acc += v;
  }
  return acc;
}

// Parses sums of monomials like "x1^2 + x2^2 - 0.5 x1 x3 + 1".
// Coordinates are 1-based. Throws std::invalid_argument with the
// offending token on malformed input.
inline std::vector<Monomial> parse_polynomial(const std::string& text,
                                              std::size_t d) {
  std::vector<Monomial> terms;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(unsigned(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size())
    throw std::invalid_argument("polynomial: empty expression");
  while (i < text.size()) {
    double sign = 1.0;
    skip_ws();
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip_ws();
    } else if (!terms.empty()) {
      throw std::invalid_argument(std::string("polynomial: expected +/- at '") +
                                  text.substr(i, 8) + "'");
    }
    Monomial mono;
    mono.coeff = sign;
    mono.powers.assign(d, 0);
    bool saw_factor = false;
    // optional leading number
    if (i < text.size() && (std::isdigit(unsigned(text[i])) || text[i] == '.')) {
      std::size_t used = 0;
      mono.coeff *= std::stod(text.substr(i), &used);
      i += used;
      saw_factor = true;
    }
    for (;;) {
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip_ws();
      }
      if (i >= text.size() || text[i] != 'x') break;
      ++i;
      std::size_t start = i;
      while (i < text.size() && std::isdigit(unsigned(text[i]))) ++i;
      if (start == i)
        throw std::invalid_argument("polynomial: 'x' without coordinate index");
      const std::size_t idx = std::stoul(text.substr(start, i - start));
      if (idx < 1 || idx > d)
        throw std::invalid_argument("polynomial: coordinate x" +
                                    std::to_string(idx) + " out of range 1.." +
                                    std::to_string(d));
      unsigned power = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t s2 = i;
        while (i < text.size() && std::isdigit(unsigned(text[i]))) ++i;
        if (s2 == i) throw std::invalid_argument("polynomial: '^' without exponent");
        power = unsigned(std::stoul(text.substr(s2, i - s2)));
      }
      mono.powers[idx - 1] += power;
      saw_factor = true;
    }
    if (!saw_factor)
      throw std::invalid_argument(std::string("polynomial: dangling term at '") +
                                  text.substr(i, 8) + "'");
    terms.push_back(std::move(mono));
    skip_ws();
  }
  return terms;
}

inline TargetFunction make_polynomial_target(const std::string& text,
                                             std::size_t d) {
  auto terms = parse_polynomial(text, d);
  TargetFunction f;
  f.kind = TargetKind::polynomial;
  f.description = text;
  f.eval = [terms](std::span<const double> x) {
    return eval_monomials(terms, x);
  };
  std::vector<double> zero(d, 0.0);
  f.value_at_zero = f.eval(zero);
  return f;
}

// |x|^2, the running example target
inline TargetFunction make_norm_sq_target(std::size_t /*d*/) {
  TargetFunction f;
  f.kind = TargetKind::polynomial;
  f.description = "|x|^2";
  f.eval = [](std::span<const double> x) { return dot(x, x); };
  f.value_at_zero = 0.0;
  return f;
}

// kind: "poly" (spec = expression), "norm_sq", or "constant" (spec = value)
inline TargetFunction make_target(const std::string& kind,
                                  const std::string& spec, std::size_t d) {
  if (kind == "poly" || kind == "polynomial") return make_polynomial_target(spec, d);
  if (kind == "norm_sq") return make_norm_sq_target(d);
  if (kind == "constant") {
    double c = 0.0;
    try {
      c = std::stod(spec);
    } catch (const std::exception&) {
      throw std::invalid_argument("constant target: bad value '" + spec + "'");
    }
    TargetFunction f;
    f.kind = TargetKind::custom;
    f.description = "constant " + spec;
    f.eval = [c](std::span<const double>) { return c; };
    f.value_at_zero = c;
    return f;
  }
  throw std::invalid_argument("make_target: unknown kind '" + kind + "'");
}

// ---- shift transform for f(0) != 0 --------------------------------------

// Returns f_tilde with f_tilde(0) = 0 exactly and the corrector field
//   corr(x) = (f(0)/2d) |x|^2 (|x|^2 - 1),
// so that a solution v of the shifted problem yields u = v - corr.
struct ShiftedProblem {
  TargetFunction f_tilde;
  std::function<double(std::span<const double>)> corrector;
  double f_at_zero = 0.0;
};

inline ShiftedProblem shift_rhs(const TargetFunction& f, std::size_t d) {
  if (d < 1) throw std::invalid_argument("shift_rhs: d >= 1");
  ShiftedProblem out;
  const double c = f.value_at_zero;
  out.f_at_zero = c;
  if (c == 0.0) {
    out.f_tilde = f;
    out.corrector = [](std::span<const double>) { return 0.0; };
    return out;
  }
  const double slope = 2.0 + 4.0 / double(d);
  auto base = f.eval;
  out.f_tilde.kind = f.kind;
  out.f_tilde.description = f.description + " [shifted]";
  out.f_tilde.eval = [base, c, slope](std::span<const double> x) {
    const double xx = dot(x, x);
    return base(x) + c * (slope * xx - 1.0);
  };
  out.f_tilde.value_at_zero = 0.0;  // base(0) + c*(0-1) = c - c
  const double k = c / (2.0 * double(d));
  out.corrector = [k](std::span<const double> x) {
    const double xx = dot(x, x);
    return k * xx * (xx - 1.0);
  };
  return out;
}

// ---- targets represented over the initialization box --------------------

// f(x) = integral over Lambda of alpha(theta).zeta(x;theta) dtheta,
// estimated by Monte-Carlo with a fixed seed. The class norm upper
// bound |Lambda| * max ||alpha|| is supplied via alpha_max.
struct RepresentedTarget {
  ModelConfig cfg;  // fixes Lambda through (d, m, alpha, beta)
  std::function<void(const BasisParam&, std::span<double>)> alpha_field;
  double alpha_max = 0.0;
  std::size_t oracle_draws = 10'000'000;
  std::uint64_t oracle_seed = 2718;

  double f_norm_upper() const { return cfg.lambda_volume() * alpha_max; }

  // pointwise oracle; cost is oracle_draws * O(d)
  double value(std::span<const double> x) const {
    RngStream rng(oracle_seed, "ftarget-oracle");
    std::vector<double> av(cfg.d);
    double acc = 0.0;
    for (std::size_t k = 0; k < oracle_draws; ++k) {
      const BasisParam th = draw_basis_param(cfg, rng);
      const double br = zeta_bracket(th, x);
      if (br == 0.0) continue;
      alpha_field(th, av);
      acc += br * dot(av, x);
    }
    return cfg.lambda_volume() * acc / double(oracle_draws);
  }

  TargetFunction as_target() const {
    TargetFunction f;
    f.kind = TargetKind::represented;
    f.description = "represented target";
    RepresentedTarget self = *this;
    f.eval = [self](std::span<const double> x) { return self.value(x); };
    f.value_at_zero = 0.0;  // zeta(0;theta) = 0 for every theta
    return f;
  }

  static RepresentedTarget constant_field(const ModelConfig& cfg,
                                          std::span<const double> coeffs) {
    if (coeffs.size() != cfg.d)
      throw std::invalid_argument("constant_field: coefficient size != d");
    RepresentedTarget t;
    t.cfg = cfg;
    std::vector<double> c(coeffs.begin(), coeffs.end());
    t.alpha_field = [c](const BasisParam&, std::span<double> out) {
      for (std::size_t j = 0; j < out.size(); ++j) out[j] = c[j];
    };
    t.alpha_max = norm2(coeffs);
    return t;
  }
};

}  // namespace pinnball
