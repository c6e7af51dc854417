#pragma once

// Two-layer ReLU^3 ansatz on the unit ball and its induced residual
// network psi = Laplacian(phi), the random basis zeta, the pseudo
// networks g and g_b (linearization around the initial weights), and
// the closed-form gradients. Only the hidden weight matrix W is
// trainable; a, b and the initial W0 stay frozen.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinnball/matrix.hpp"
#include "pinnball/rng.hpp"

namespace pinnball {

struct blowup_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  std::size_t d = 3;      // input dimension
  std::size_t m = 100;    // width
  double alpha = 0.0;     // output-weight scale power
  double beta = 0.5;      // hidden-weight/bias scale power
  std::uint64_t seed = 1;

  double a_scale() const { return std::pow(double(m), -alpha); }
  double wb_scale() const { return std::pow(double(m), -beta); }

  // required by the width/iteration threshold formulas
  bool theory_condition_ok() const { return alpha + 3.0 * beta > 1.0; }

  // volume of the initialization box Lambda
  double lambda_volume() const {
    return 2.0 * a_scale() * std::pow(2.0 * wb_scale(), double(d + 1));
  }

  void validate() const {
    if (d < 1 || m < 1) throw std::invalid_argument("ModelConfig: d,m >= 1");
    if (alpha < 0.0 || beta < 0.0)
      throw std::invalid_argument("ModelConfig: alpha,beta >= 0");
    if (!(a_scale() > 0.0) || !(wb_scale() > 0.0) ||
        !std::isfinite(a_scale()) || !std::isfinite(wb_scale()))
      throw std::invalid_argument("ModelConfig: degenerate scales");
  }
};

struct ModelParams {
  ModelConfig cfg;
  std::vector<double> a;  // output weights, frozen
  std::vector<double> b;  // hidden biases, frozen
  Matrix w0;              // initial hidden weights, frozen snapshot
  Matrix w;               // current hidden weights, trainable
};

// one draw theta = (a0, w0, b0) from the box Lambda
struct BasisParam {
  double a0 = 0.0;
  std::vector<double> w0;
  double b0 = 0.0;
};

inline ModelParams init_params(const ModelConfig& cfg, RngStream& rng) {
  cfg.validate();
  ModelParams p;
  p.cfg = cfg;
  p.a.resize(cfg.m);
  p.b.resize(cfg.m);
  p.w0 = Matrix(cfg.m, cfg.d);
  const double as = cfg.a_scale();
  const double ws = cfg.wb_scale();
  for (std::size_t i = 0; i < cfg.m; ++i) {
    p.a[i] = rng.uniform(-as, as);
    for (std::size_t j = 0; j < cfg.d; ++j) p.w0(i, j) = rng.uniform(-ws, ws);
    p.b[i] = rng.uniform(-ws, ws);
  }
  p.w = p.w0;
  return p;
}

inline BasisParam draw_basis_param(const ModelConfig& cfg, RngStream& rng) {
  BasisParam th;
  th.a0 = rng.uniform(-cfg.a_scale(), cfg.a_scale());
  th.w0.resize(cfg.d);
  const double ws = cfg.wb_scale();
  for (std::size_t j = 0; j < cfg.d; ++j) th.w0[j] = rng.uniform(-ws, ws);
  th.b0 = rng.uniform(-ws, ws);
  return th;
}

namespace detail {

// Shared per-neuron term shape. psi, g and g_b all evaluate
//   u * (2d*s^2) + u * (12*s*wx) + u * (6*ww*(|x|^2-1))
// with the same operation order, so g at W = W0 reproduces psi
// bit-for-bit.
inline double neuron_core(double two_d, double u, double s, double wx,
                          double ww, double xx1) {
  const double t1 = two_d * u * (s * s);
  const double t2 = 12.0 * u * (s * wx);
  const double t3 = 6.0 * u * (ww * xx1);
  return t1 + (t2 + t3);
}

}  // namespace detail

// phi(x) = (|x|^2 - 1) * sum_i a_i relu3(w_i.x + b_i); exact zero on the
// boundary whenever the computed |x|^2 equals one.
inline double eval_phi(const ModelParams& p, std::span<const double> x) {
  const double xx1 = dot(x, x) - 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.cfg.m; ++i) {
    const double s = dot(p.w.row(i), x) + p.b[i];
    if (s >= 0.0) acc += p.a[i] * (s * s * s);
  }
  return xx1 * acc;
}

// psi(x; W) = Laplacian of phi, evaluated in closed form
inline double eval_psi(const ModelParams& p, std::span<const double> x) {
  const double two_d = 2.0 * double(p.cfg.d);
  const double xx1 = dot(x, x) - 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.cfg.m; ++i) {
    const auto wi = p.w.row(i);
    const double wx = dot(wi, x);
    const double s = wx + p.b[i];
    if (s >= 0.0) {
      const double ww = dot(wi, wi);
      acc += p.a[i] * detail::neuron_core(two_d, s, s, wx, ww, xx1);
    }
  }
  if (!std::isfinite(acc)) throw blowup_error("eval_psi: non-finite value");
  return acc;
}

// pseudo network g: activation pattern and quadratic factors frozen at
// W0, the leading factor w_i.x + b_i taken at the current W
inline double eval_pseudo_g(const ModelParams& p, std::span<const double> x) {
  const double two_d = 2.0 * double(p.cfg.d);
  const double xx1 = dot(x, x) - 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.cfg.m; ++i) {
    const auto w0i = p.w0.row(i);
    const double wx0 = dot(w0i, x);
    const double s0 = wx0 + p.b[i];
    if (s0 >= 0.0) {
      const double ww0 = dot(w0i, w0i);
      const double u = dot(p.w.row(i), x) + p.b[i];
      acc += p.a[i] * detail::neuron_core(two_d, u, s0, wx0, ww0, xx1);
    }
  }
  return acc;
}

// bias-stripped linear part g_b: leading factor is wprime_i.x
inline double eval_pseudo_gb(const ModelParams& p, const Matrix& wprime,
                             std::span<const double> x) {
  if (wprime.rows() != p.cfg.m || wprime.cols() != p.cfg.d)
    throw std::invalid_argument("eval_pseudo_gb: shape mismatch");
  const double two_d = 2.0 * double(p.cfg.d);
  const double xx1 = dot(x, x) - 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.cfg.m; ++i) {
    const auto w0i = p.w0.row(i);
    const double wx0 = dot(w0i, x);
    const double s0 = wx0 + p.b[i];
    if (s0 >= 0.0) {
      const double ww0 = dot(w0i, w0i);
      const double u = dot(wprime.row(i), x);
      acc += p.a[i] * detail::neuron_core(two_d, u, s0, wx0, ww0, xx1);
    }
  }
  return acc;
}

// zeta(x; theta) factors as bracket * x; the bracket alone is enough
// for inner products against zeta
inline double zeta_bracket(const BasisParam& th, std::span<const double> x) {
  const double wx = dot(th.w0, x);
  const double s = wx + th.b0;
  if (s < 0.0) return 0.0;
  const double ww = dot(th.w0, th.w0);
  const double xx1 = dot(x, x) - 1.0;
  const double two_d = 2.0 * double(th.w0.size());
  return th.a0 * (two_d * (s * s) + 12.0 * (wx * s) + 6.0 * (ww * xx1));
}

// random basis zeta(x; theta), gated on the initial activation
inline std::vector<double> eval_zeta(const BasisParam& th,
                                     std::span<const double> x) {
  const std::size_t d = th.w0.size();
  if (x.size() != d) throw std::invalid_argument("eval_zeta: dim mismatch");
  std::vector<double> out(d, 0.0);
  const double scal = zeta_bracket(th, x);
  if (scal != 0.0)
    for (std::size_t j = 0; j < d; ++j) out[j] = scal * x[j];
  return out;
}

// d psi / d w_ij. Row i is a_i * I(s_i >= 0) * (c1 * x + c2 * w_i) with
//   c1 = 6d s^2 + 24 s wx + 12 s^2 + 6 ww (|x|^2-1),  c2 = 12 s (|x|^2-1).
inline Matrix grad_psi_w(const ModelParams& p, std::span<const double> x) {
  const std::size_t m = p.cfg.m, d = p.cfg.d;
  const double six_d = 6.0 * double(d);
  const double xx1 = dot(x, x) - 1.0;
  Matrix g(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    const auto wi = p.w.row(i);
    const double wx = dot(wi, x);
    const double s = wx + p.b[i];
    if (s < 0.0) continue;
    const double ww = dot(wi, wi);
    const double c1 =
        six_d * (s * s) + 24.0 * (s * wx) + 12.0 * (s * s) + 6.0 * (ww * xx1);
    const double c2 = 12.0 * s * xx1;
    auto gi = g.row(i);
    for (std::size_t j = 0; j < d; ++j) gi[j] = p.a[i] * (c1 * x[j] + c2 * wi[j]);
  }
  return g;
}

// d g / d w_ij: g is affine in W, row i is a constant times x
inline Matrix grad_pseudo_g_w(const ModelParams& p, std::span<const double> x) {
  const std::size_t m = p.cfg.m, d = p.cfg.d;
  const double two_d = 2.0 * double(d);
  const double xx1 = dot(x, x) - 1.0;
  Matrix g(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    const auto w0i = p.w0.row(i);
    const double wx0 = dot(w0i, x);
    const double s0 = wx0 + p.b[i];
    if (s0 < 0.0) continue;
    const double ww0 = dot(w0i, w0i);
    const double k =
        p.a[i] * (two_d * (s0 * s0) + 12.0 * (wx0 * s0) + 6.0 * (ww0 * xx1));
    auto gi = g.row(i);
    for (std::size_t j = 0; j < d; ++j) gi[j] = k * x[j];
  }
  return g;
}

// psi and its weight gradient in one pass; the psi value matches
// eval_psi exactly (same operations, same order)
inline double psi_and_grad(const ModelParams& p, std::span<const double> x,
                           Matrix& g) {
  const std::size_t m = p.cfg.m, d = p.cfg.d;
  const double two_d = 2.0 * double(d);
  const double six_d = 6.0 * double(d);
  const double xx1 = dot(x, x) - 1.0;
  if (g.rows() != m || g.cols() != d) g = Matrix(m, d);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto wi = p.w.row(i);
    const double wx = dot(wi, x);
    const double s = wx + p.b[i];
    auto gi = g.row(i);
    if (s < 0.0) {
      for (std::size_t j = 0; j < d; ++j) gi[j] = 0.0;
      continue;
    }
    const double ww = dot(wi, wi);
    acc += p.a[i] * detail::neuron_core(two_d, s, s, wx, ww, xx1);
    const double c1 =
        six_d * (s * s) + 24.0 * (s * wx) + 12.0 * (s * s) + 6.0 * (ww * xx1);
    const double c2 = 12.0 * s * xx1;
    for (std::size_t j = 0; j < d; ++j) gi[j] = p.a[i] * (c1 * x[j] + c2 * wi[j]);
  }
  if (!std::isfinite(acc)) throw blowup_error("eval_psi: non-finite value");
  return acc;
}

// gradient of the per-sample squared residual: 2 (psi - label) grad_psi
inline Matrix loss_grad_w(const ModelParams& p, std::span<const double> x,
                          double label) {
  if (!std::isfinite(label))
    throw std::invalid_argument("loss_grad_w: non-finite label");
  const double r = 2.0 * (eval_psi(p, x) - label);
  Matrix g = grad_psi_w(p, x);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= r;
  if (!g.all_finite()) throw blowup_error("loss_grad_w: non-finite gradient");
  return g;
}

// same chain rule applied to the pseudo network's residual
inline Matrix loss_grad_pseudo_g_w(const ModelParams& p,
                                   std::span<const double> x, double label) {
  const double r = 2.0 * (eval_pseudo_g(p, x) - label);
  Matrix g = grad_pseudo_g_w(p, x);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= r;
  return g;
}

// Caches the per-neuron self products w_i.w_i for repeated evaluation
// against a fixed W; values match eval_psi bit-for-bit. Rebuild after
// any weight update.
class PsiBatchEval {
 public:
  explicit PsiBatchEval(const ModelParams& p) : p_(&p), ww_(p.cfg.m) {
    for (std::size_t i = 0; i < p.cfg.m; ++i)
      ww_[i] = dot(p.w.row(i), p.w.row(i));
  }

  double operator()(std::span<const double> x) const {
    const ModelParams& p = *p_;
    const double two_d = 2.0 * double(p.cfg.d);
    const double xx1 = dot(x, x) - 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.cfg.m; ++i) {
      const double wx = dot(p.w.row(i), x);
      const double s = wx + p.b[i];
      if (s >= 0.0)
        acc += p.a[i] * detail::neuron_core(two_d, s, s, wx, ww_[i], xx1);
    }
    if (!std::isfinite(acc)) throw blowup_error("eval_psi: non-finite value");
    return acc;
  }

 private:
  const ModelParams* p_;
  std::vector<double> ww_;
};

// smallest |w_i.x + b_i| over neurons; tests use this to stay away from
// the ReLU^3 activation kinks
inline double min_activation_margin(const ModelParams& p,
                                    std::span<const double> x) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.cfg.m; ++i) {
    const double s = dot(p.w.row(i), x) + p.b[i];
    margin = std::min(margin, std::abs(s));
  }
  return margin;
}

}  // namespace pinnball
