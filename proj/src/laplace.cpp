#include "pbo/laplace.hpp"

#include "pbo/quadrature.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace pbo {

namespace {

// Derivatives of log p(y | f) = log sigma((2y - 1) f).
struct Likelihood {
  Vector grad;   // y - sigma(f)
  Vector w;      // sigma (1 - sigma)
  Vector third;  // -sigma (1 - sigma) (1 - 2 sigma)
  double loglik = 0.0;
};

Likelihood likelihood(const Eigen::VectorXi& y, const Vector& f) {
  const Index n = f.size();
  Likelihood t{Vector(n), Vector(n), Vector(n), 0.0};
  for (Index i = 0; i < n; ++i) {
    const double s = sigmoid(f(i));
    t.grad(i) = y(i) - s;
    t.w(i) = s * (1.0 - s);
    t.third(i) = -t.w(i) * (1.0 - 2.0 * s);
    t.loglik += y(i) == 1 ? log_sigmoid(f(i)) : log_sigmoid(-f(i));
  }
  return t;
}

Matrix factor_b(const Matrix& K, const Vector& sqrt_w) {
  Matrix B = sqrt_w.asDiagonal() * K * sqrt_w.asDiagonal();
  B.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(B);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::factorization, "laplace: factorization of I + W^1/2 K W^1/2 failed");
  }
  return llt.matrixL();
}

// One Newton update: returns the new `a` with f_new = K a.
Vector newton_direction(const Matrix& K, const Vector& f, const Likelihood& t, const Matrix& L,
                        const Vector& sqrt_w) {
  const Vector b = t.w.cwiseProduct(f) + t.grad;
  const auto Lv = L.triangularView<Eigen::Lower>();
  const Vector c = Lv.solve(sqrt_w.cwiseProduct(K * b));
  return b - sqrt_w.cwiseProduct(Lv.transpose().solve(c));
}

double psi(const Vector& a, const Vector& f, double loglik) { return -0.5 * a.dot(f) + loglik; }

}  // namespace

LaplacePosterior fit_laplace(const DuelDataset& data, const KernelParams& params,
                             const NewtonOptions& options, const std::optional<Vector>& warm_start) {
  data.validate();
  const Index n = data.size();
  if (n < 1) throw Error(Errc::invalid_argument, "fit_laplace: need at least one duel");
  params.validate(data.input_dim());

  const Matrix K = gram_matrix(params, data.inputs);
  Vector f = Vector::Zero(n);
  Vector a = Vector::Zero(n);
  bool a_valid = true;  // f == K a holds for the current pair
  if (warm_start) {
    if (warm_start->size() != n) throw Error(Errc::invalid_argument, "fit_laplace: warm start size mismatch");
    f = *warm_start;
    a_valid = false;
  }

  Likelihood t = likelihood(data.labels, f);
  int iter = 0;
  double gnorm = std::numeric_limits<double>::infinity();
  for (;; ++iter) {
    if (a_valid) {
      gnorm = (t.grad - a).lpNorm<Eigen::Infinity>();
      if (gnorm < options.mode_tol) break;
    }
    if (iter >= options.max_iters) {
      std::ostringstream msg;
      msg << "laplace: Newton did not converge in " << options.max_iters
          << " iterations (gradient max-norm " << gnorm << ")";
      throw Error(Errc::convergence, msg.str());
    }
    const Vector sqrt_w = t.w.cwiseSqrt();
    const Matrix L = factor_b(K, sqrt_w);
    Vector a_new = newton_direction(K, f, t, L, sqrt_w);
    Vector f_new = K * a_new;
    Likelihood t_new = likelihood(data.labels, f_new);

    if (a_valid) {
      // The log posterior is concave; halve the step until it does not decrease.
      const double old_psi = psi(a, f, t.loglik);
      double step = 1.0;
      while (psi(a_new, f_new, t_new.loglik) < old_psi - 1e-12 * std::abs(old_psi) && step > 1e-10) {
        step *= 0.5;
        a_new = a + step * (a_new - a);
        f_new = f + step * (f_new - f);
        t_new = likelihood(data.labels, f_new);
      }
    }
    a = std::move(a_new);
    f = std::move(f_new);
    t = std::move(t_new);
    a_valid = true;
  }

  LaplacePosterior post;
  post.inputs = data.inputs;
  post.labels = data.labels;
  post.params = params;
  post.mode = f;
  post.hessian_diag = t.w;
  post.sqrt_w = t.w.cwiseSqrt();
  post.grad_loglik = t.grad;
  post.chol_lower = factor_b(K, post.sqrt_w);
  post.iterations = iter;
  post.grad_norm = gnorm;
  post.log_marginal = psi(a, f, t.loglik) - post.chol_lower.diagonal().array().log().sum();
  return post;
}

LaplacePosterior prior_posterior(const KernelParams& params) {
  LaplacePosterior post;
  post.params = params;
  post.inputs.resize(0, params.input_dim());
  post.labels.resize(0);
  post.mode.resize(0);
  post.hessian_diag.resize(0);
  post.sqrt_w.resize(0);
  post.grad_loglik.resize(0);
  post.chol_lower.resize(0, 0);
  return post;
}

Vector newton_step(const LaplacePosterior& posterior) {
  const Matrix K = gram_matrix(posterior.params, posterior.inputs);
  const Likelihood t = likelihood(posterior.labels, posterior.mode);
  const Vector sqrt_w = t.w.cwiseSqrt();
  const Matrix L = factor_b(K, sqrt_w);
  return K * newton_direction(K, posterior.mode, t, L, sqrt_w);
}

LatentBatch predict_latent_batch(const LaplacePosterior& posterior, const Matrix& test) {
  if (test.cols() != posterior.input_dim()) {
    throw Error(Errc::invalid_argument, "predict: duel dimension mismatch");
  }
  const Index m = test.rows();
  LatentBatch out{Vector::Zero(m), Vector::Constant(m, posterior.params.signal_variance)};
  if (posterior.size() == 0 || m == 0) return out;

  constexpr Index kBlock = 4096;
  const auto L = posterior.chol_lower.triangularView<Eigen::Lower>();
  for (Index start = 0; start < m; start += kBlock) {
    const Index len = std::min(kBlock, m - start);
    const Matrix Ks = kernel_matrix(posterior.params, posterior.inputs, test.middleRows(start, len));
    out.mean.segment(start, len).noalias() = Ks.transpose() * posterior.grad_loglik;
    const Matrix V = L.solve(posterior.sqrt_w.asDiagonal() * Ks);
    out.var.segment(start, len) =
        (posterior.params.signal_variance - V.colwise().squaredNorm().transpose().array()).max(0.0);
  }
  return out;
}

LatentPrediction predict_latent(const LaplacePosterior& posterior, const Eigen::Ref<const Vector>& duel_concat) {
  const LatentBatch b = predict_latent_batch(posterior, duel_concat.transpose());
  return {b.mean(0), b.var(0)};
}

PreferencePrediction preference_from_latent(double mean, double var) {
  const SigmoidMoments m = sigmoid_gaussian_moments(mean, var);
  PreferencePrediction p;
  p.latent_mean = mean;
  p.latent_var = var;
  p.prob = m.mean;
  p.var_sigma = m.variance();
  p.var_y = p.prob * (1.0 - p.prob);
  return p;
}

PreferencePrediction predict_preference(const LaplacePosterior& posterior,
                                        const Eigen::Ref<const Vector>& duel_concat) {
  const LatentPrediction lat = predict_latent(posterior, duel_concat);
  return preference_from_latent(lat.mean, lat.var);
}

EvidenceGradient log_marginal_and_grad(const DuelDataset& data, const KernelParams& params,
                                       const NewtonOptions& options, const std::optional<Vector>& warm_start) {
  return log_marginal_and_grad(fit_laplace(data, params, options, warm_start));
}

EvidenceGradient log_marginal_and_grad(const LaplacePosterior& post) {
  const Index n = post.size();
  const Index dim = post.input_dim();
  const KernelParams& params = post.params;
  const Matrix K = gram_matrix(params, post.inputs);
  Matrix K_noise_free = K;
  K_noise_free.diagonal().array() -= params.jitter;

  const Likelihood t = likelihood(post.labels, post.mode);
  const auto L = post.chol_lower.triangularView<Eigen::Lower>();

  // R = W^1/2 B^-1 W^1/2, C = L^-1 W^1/2 K.
  const Matrix Linv_sw = L.solve(Matrix(post.sqrt_w.asDiagonal()));
  const Matrix R = Linv_sw.transpose() * Linv_sw;
  const Matrix C = L.solve(post.sqrt_w.asDiagonal() * K);
  // d(-1/2 log|B|)/df at the mode; dW/df = -third.
  const Vector s2 =
      0.5 * (K.diagonal() - C.colwise().squaredNorm().transpose()).cwiseProduct(t.third);
  const Vector& a = t.grad;

  EvidenceGradient out;
  out.value = post.log_marginal;
  out.gradient.resize(dim + 1);

  auto component = [&](const Matrix& dK) {
    const double s1 = 0.5 * a.dot(dK * a) - 0.5 * (R.cwiseProduct(dK)).sum();
    const Vector b = dK * t.grad;
    const Vector s3 = b - K * (R * b);
    return s1 + s2.dot(s3);
  };

  out.gradient(0) = component(K_noise_free);
  for (Index d = 0; d < dim; ++d) {
    const double inv_l2 = 1.0 / (params.lengthscales(d) * params.lengthscales(d));
    Matrix dK(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const double diff = post.inputs(i, d) - post.inputs(j, d);
        dK(i, j) = K_noise_free(i, j) * diff * diff * inv_l2;
      }
    }
    out.gradient(d + 1) = component(dK);
  }
  return out;
}

DuelDataset augment_symmetric(const DuelDataset& data) {
  data.validate();
  DuelDataset out;
  const Index n = data.size();
  const Index q = data.point_dim();
  out.inputs.resize(2 * n, data.input_dim());
  out.labels.resize(2 * n);
  if (n == 0) return out;
  out.inputs.topRows(n) = data.inputs;
  out.inputs.bottomRows(n).leftCols(q) = data.inputs.rightCols(q);
  out.inputs.bottomRows(n).rightCols(q) = data.inputs.leftCols(q);
  out.labels.head(n) = data.labels;
  out.labels.tail(n) = (1 - data.labels.array()).matrix();
  return out;
}

}  // namespace pbo
