#include "pbo/hyperparams.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace pbo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Evidence {
 public:
  Evidence(const DuelDataset& data, const KernelParams& init, const HyperBounds& bounds, bool tie)
      : data_(data), jitter_(init.jitter), dim_(data.input_dim()), tie_(tie) {
    const Index nl = tie ? dim_ / 2 : dim_;
    lower_.resize(nl + 1);
    upper_.resize(nl + 1);
    lower_(0) = std::log(bounds.signal_variance.first);
    upper_(0) = std::log(bounds.signal_variance.second);
    lower_.tail(nl).setConstant(std::log(bounds.lengthscale.first));
    upper_.tail(nl).setConstant(std::log(bounds.lengthscale.second));
  }

  Index size() const { return lower_.size(); }
  Vector clamp(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector encode(const KernelParams& p) const {
    Vector x(size());
    x(0) = std::log(p.signal_variance);
    const Index nl = size() - 1;
    for (Index i = 0; i < nl; ++i) {
      x(i + 1) = tie_ ? 0.5 * (std::log(p.lengthscales(i)) + std::log(p.lengthscales(i + nl)))
                      : std::log(p.lengthscales(i));
    }
    return x;
  }

  KernelParams decode(const Vector& x) const {
    KernelParams p;
    p.signal_variance = std::exp(x(0));
    p.jitter = jitter_;
    p.lengthscales.resize(dim_);
    const Index nl = size() - 1;
    for (Index i = 0; i < nl; ++i) {
      p.lengthscales(i) = std::exp(x(i + 1));
      if (tie_) p.lengthscales(i + nl) = p.lengthscales(i);
    }
    return p;
  }

  // Value and gradient in the optimization coordinates; -inf on failure.
  double operator()(const Vector& x, Vector& grad) {
    ++evaluations;
    try {
      const LaplacePosterior post = fit_laplace(data_, decode(x), {}, warm_);
      const EvidenceGradient eg = log_marginal_and_grad(post);
      warm_ = post.mode;
      grad.resize(size());
      grad(0) = eg.gradient(0);
      const Index nl = size() - 1;
      for (Index i = 0; i < nl; ++i) {
        grad(i + 1) = tie_ ? eg.gradient(i + 1) + eg.gradient(i + 1 + nl) : eg.gradient(i + 1);
      }
      if (!std::isfinite(eg.value) || !grad.allFinite()) return kNegInf;
      return eg.value;
    } catch (const Error&) {
      warm_.reset();
      return kNegInf;
    }
  }

  int evaluations = 0;

 private:
  const DuelDataset& data_;
  double jitter_;
  Index dim_;
  bool tie_;
  Vector lower_, upper_;
  std::optional<Vector> warm_;
};

// Zeroes components that would push a variable at its bound further outside.
Vector project_direction(const Vector& d, const Vector& x, const Vector& lo, const Vector& hi) {
  Vector out = d;
  for (Index i = 0; i < d.size(); ++i) {
    if ((x(i) <= lo(i) && d(i) < 0) || (x(i) >= hi(i) && d(i) > 0)) out(i) = 0.0;
  }
  return out;
}

struct StartResult {
  Vector x;
  double value = kNegInf;
};

// Projected L-BFGS ascent with Armijo backtracking.
StartResult ascend(Evidence& fn, Vector x, const HyperOptions& opt) {
  x = fn.clamp(x);
  Vector g;
  double fx = fn(x, g);
  if (!std::isfinite(fx)) return {x, kNegInf};

  std::deque<std::pair<Vector, Vector>> memory;  // (s, y) with y the change in -gradient
  constexpr std::size_t kMemory = 6;
  for (int it = 0; it < opt.max_iters; ++it) {
    const Vector pg = project_direction(g, x, fn.lower(), fn.upper());
    if (pg.lpNorm<Eigen::Infinity>() < opt.grad_tol) break;

    // Two-loop recursion on the minimization problem of -F.
    Vector q = -pg;
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
      const auto& [s, y] = memory[k];
      alpha[k] = s.dot(q) / y.dot(s);
      q -= alpha[k] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const auto& [s, y] = memory[k];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[k] - beta) * s;
    }
    Vector d = project_direction(-q, x, fn.lower(), fn.upper());
    if (d.dot(pg) <= 0) {
      d = pg;
      memory.clear();
    }
    double step = 1.0;
    const double longest = d.lpNorm<Eigen::Infinity>();
    if (longest > 1.0) step = 1.0 / longest;  // at most e-fold change per step

    bool accepted = false;
    Vector x_new, g_new;
    double f_new = kNegInf;
    for (int ls = 0; ls < 20; ++ls, step *= 0.5) {
      x_new = fn.clamp(x + step * d);
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new >= fx + 1e-4 * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    const Vector s = x_new - x;
    const Vector y = g - g_new;
    if (s.dot(y) > 1e-10) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    const double gain = f_new - fx;
    x = x_new;
    g = g_new;
    fx = f_new;
    if (gain < 1e-9 * (1.0 + std::abs(fx))) break;
  }
  return {x, fx};
}

}  // namespace

HyperFit optimize_hyperparams(const DuelDataset& data, const KernelParams& init, const HyperBounds& bounds,
                              const HyperOptions& options) {
  if (!(bounds.signal_variance.first > 0 && bounds.signal_variance.first <= bounds.signal_variance.second &&
        bounds.lengthscale.first > 0 && bounds.lengthscale.first <= bounds.lengthscale.second)) {
    throw Error(Errc::invalid_argument, "optimize_hyperparams: bounds must be positive intervals");
  }
  init.validate(data.input_dim());
  if (options.tie_halves && data.input_dim() % 2 != 0) {
    throw Error(Errc::invalid_argument, "optimize_hyperparams: tied halves need an even dimension");
  }

  Evidence fn(data, init, bounds, options.tie_halves);
  Vector g0;
  const Vector x0 = fn.encode(init);
  const double f_init = fn(x0, g0);

  HyperFit fit;
  fit.params = init;
  fit.log_marginal = f_init;
  fit.initial_log_marginal = f_init;

  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, options.perturbation);
  StartResult best{x0, f_init};
  for (int start = 0; start < std::max(options.restarts, 1); ++start) {
    Vector x = x0;
    if (start > 0) {
      for (Index i = 0; i < x.size(); ++i) x(i) += normal(rng);
    }
    const StartResult r = ascend(fn, x, options);
    if (r.value > best.value) best = r;
  }

  fit.evaluations = fn.evaluations;
  if (std::isfinite(best.value) && best.value > f_init) {
    fit.params = fn.decode(best.x);
    fit.log_marginal = best.value;
    fit.improved = true;
  }
  return fit;
}

}  // namespace pbo
