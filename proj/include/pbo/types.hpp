#ifndef PBO_TYPES_HPP
#define PBO_TYPES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbo {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// A set of points in the search domain, one point per row.
using Points = Eigen::MatrixXd;

/// All randomness flows through explicitly passed engines of this type.
using Rng = std::mt19937_64;

enum class Errc {
  invalid_argument,
  out_of_domain,
  not_found,
  conflict,
  convergence,
  factorization,
  io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Box-bounded search space, optionally discretized into a regular grid.
struct Domain {
  std::vector<std::pair<double, double>> bounds;
  std::optional<int> grid_per_dim;

  Index dim() const { return static_cast<Index>(bounds.size()); }
  void validate() const;
  bool contains(const Eigen::Ref<const Vector>& x) const;
  /// Affine map of the box onto [0,1]^q.
  Points to_unit(const Points& points) const;
  Points from_unit(const Points& points) const;
};

/// Ordered pair of points; `left` wins when the outcome label is 1.
struct Duel {
  Vector left;
  Vector right;

  Index dim() const { return left.size(); }
  /// The concatenated 2q-vector [left, right].
  Vector concat() const;
  Duel swapped() const { return Duel{right, left}; }
  static Duel from_concat(const Eigen::Ref<const Vector>& v);
};

struct DuelOutcome {
  Duel duel;
  int y = 0;
};

/// Observed duels stored as rows of concatenated inputs.
struct DuelDataset {
  Matrix inputs;  // N x 2q
  Eigen::VectorXi labels;

  DuelDataset() = default;
  explicit DuelDataset(Index point_dim) : inputs(0, 2 * point_dim), labels(0) {}

  Index size() const { return labels.size(); }
  bool empty() const { return labels.size() == 0; }
  Index input_dim() const { return inputs.cols(); }
  Index point_dim() const { return inputs.cols() / 2; }

  void add(const Duel& duel, int y);
  void add(const Eigen::Ref<const Vector>& concat, int y);
  Duel duel(Index i) const { return Duel::from_concat(inputs.row(i).transpose()); }
  void validate() const;
};

/// Derives an independent 64-bit seed for a named sub-stream.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t index = 0);
inline Rng make_stream(std::uint64_t root, std::string_view name, std::uint64_t index = 0) {
  return Rng(derive_seed(root, name, index));
}

}  // namespace pbo

#endif  // PBO_TYPES_HPP
