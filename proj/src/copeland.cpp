#include "pbo/copeland.hpp"

#include "pbo/kernel.hpp"
#include "pbo/quadrature.hpp"

#include <cmath>

namespace pbo {

LandmarkSet grid_landmarks(const Points& grid) {
  if (grid.rows() == 0) throw Error(Errc::invalid_argument, "grid_landmarks: empty grid");
  return {grid, LandmarkSet::Origin::grid, std::nullopt};
}

LandmarkSet uniform_landmarks(const Domain& domain, Index count, std::uint64_t seed) {
  domain.validate();
  if (count <= 0) throw Error(Errc::invalid_argument, "uniform_landmarks: count must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Points pts(count, domain.dim());
  for (Index i = 0; i < count; ++i) {
    for (Index d = 0; d < domain.dim(); ++d) {
      const auto [lo, hi] = domain.bounds[static_cast<std::size_t>(d)];
      pts(i, d) = lo + (hi - lo) * unif(rng);
    }
  }
  return {pts, LandmarkSet::Origin::uniform_sample, seed};
}

Index argmax_first(const Eigen::Ref<const Vector>& values) {
  Index best = -1;
  for (Index i = 0; i < values.size(); ++i) {
    if (std::isnan(values(i))) continue;
    if (best < 0 || values(i) > values(best)) best = i;
  }
  if (best < 0) throw Error(Errc::invalid_argument, "argmax_first: no comparable entries");
  return best;
}

Matrix preference_matrix(const LaplacePosterior& posterior, const Points& candidates,
                         const Points& landmarks) {
  const Index q = posterior.point_dim();
  if (candidates.cols() != q || landmarks.cols() != q) {
    throw Error(Errc::invalid_argument, "preference_matrix: point dimension mismatch");
  }
  const Index c = candidates.rows();
  const Index m = landmarks.rows();
  const Index n = posterior.size();
  const double sv = posterior.params.signal_variance;

  Matrix mean = Matrix::Zero(c, m);
  Matrix var = Matrix::Constant(c, m, sv);
  if (n > 0) {
    // The SE kernel factorizes over the halves of [x, x'], so
    // k([c, l], [u, v]) = sv * A(c, u) * B(l, v).
    const Vector& ls = posterior.params.lengthscales;
    const Matrix A = unit_rbf(ls.head(q), candidates, posterior.inputs.leftCols(q));   // c x n
    const Matrix B = unit_rbf(ls.tail(q), landmarks, posterior.inputs.rightCols(q));   // m x n
    mean.noalias() = sv * (A * posterior.grad_loglik.asDiagonal()) * B.transpose();

    // V = L^-1 W^1/2 is lower triangular.
    const Matrix V = posterior.chol_lower.triangularView<Eigen::Lower>().solve(
        Matrix(posterior.sqrt_w.asDiagonal()));
    const Matrix Bt = B.transpose();
    Matrix T(n, m);
    for (Index i = 0; i < c; ++i) {
      T.noalias() = V.triangularView<Eigen::Lower>() * ((sv * A.row(i).transpose()).asDiagonal() * Bt);
      var.row(i) = (sv - T.colwise().squaredNorm().array()).max(0.0);
    }
  }

  Matrix prefs(c, m);
  for (Index k = 0; k < m; ++k) {
    for (Index i = 0; i < c; ++i) prefs(i, k) = sigmoid_gaussian_moments(mean(i, k), var(i, k)).mean;
  }
  return prefs;
}

Matrix oracle_preference_matrix(BenchmarkId id, const Points& candidates, const Points& landmarks) {
  Vector gc(candidates.rows()), gl(landmarks.rows());
  for (Index i = 0; i < candidates.rows(); ++i) gc(i) = eval_objective(id, candidates.row(i).transpose());
  for (Index k = 0; k < landmarks.rows(); ++k) gl(k) = eval_objective(id, landmarks.row(k).transpose());
  Matrix prefs(candidates.rows(), landmarks.rows());
  for (Index k = 0; k < landmarks.rows(); ++k) {
    for (Index i = 0; i < candidates.rows(); ++i) {
      const double z = gl(k) - gc(i);
      prefs(i, k) = z >= 0 ? sigmoid(z) : 1.0 - sigmoid(-z);
    }
  }
  return prefs;
}

CopelandEstimate copeland_from_preferences(const Points& candidates, const Matrix& prefs) {
  if (prefs.rows() != candidates.rows() || prefs.cols() == 0) {
    throw Error(Errc::invalid_argument, "copeland_from_preferences: shape mismatch");
  }
  CopelandEstimate est;
  est.candidates = candidates;
  est.scores = prefs.rowwise().mean();
  est.winner_index = argmax_first(est.scores);
  est.winner_score = est.scores(est.winner_index);
  return est;
}

CopelandEstimate condorcet_winner(const LaplacePosterior& posterior, const Points& candidates,
                                  const LandmarkSet& landmarks) {
  return copeland_from_preferences(candidates, preference_matrix(posterior, candidates, landmarks.points));
}

double soft_copeland_at(const LaplacePosterior& posterior, const Eigen::Ref<const Vector>& x,
                        const LandmarkSet& landmarks) {
  const Points row = x.transpose();
  return preference_matrix(posterior, row, landmarks.points).mean();
}

}  // namespace pbo
