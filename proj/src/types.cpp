#include "pbo/types.hpp"

#include <string>

namespace pbo {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::out_of_domain: return "out_of_domain";
    case Errc::not_found: return "not_found";
    case Errc::conflict: return "conflict";
    case Errc::convergence: return "convergence";
    case Errc::factorization: return "factorization";
    case Errc::io: return "io";
  }
  return "unknown";
}

void Domain::validate() const {
  if (bounds.empty()) throw Error(Errc::invalid_argument, "domain: dimension must be positive");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto [lo, hi] = bounds[i];
    if (!(lo < hi)) {
      throw Error(Errc::invalid_argument,
                  "domain: lower bound must be below upper bound in coordinate " + std::to_string(i));
    }
  }
  if (grid_per_dim && *grid_per_dim < 2) {
    throw Error(Errc::invalid_argument, "domain: grid_per_dim must be at least 2");
  }
}

bool Domain::contains(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim()) return false;
  for (Index i = 0; i < dim(); ++i) {
    if (!(x(i) >= bounds[i].first && x(i) <= bounds[i].second)) return false;
  }
  return true;
}

Points Domain::to_unit(const Points& points) const {
  Points out(points.rows(), points.cols());
  for (Index j = 0; j < points.cols(); ++j) {
    const auto [lo, hi] = bounds[j];
    out.col(j) = (points.col(j).array() - lo) / (hi - lo);
  }
  return out;
}

Points Domain::from_unit(const Points& points) const {
  Points out(points.rows(), points.cols());
  for (Index j = 0; j < points.cols(); ++j) {
    const auto [lo, hi] = bounds[j];
    out.col(j) = lo + points.col(j).array() * (hi - lo);
  }
  return out;
}

Vector Duel::concat() const {
  Vector v(left.size() + right.size());
  v << left, right;
  return v;
}

Duel Duel::from_concat(const Eigen::Ref<const Vector>& v) {
  const Index q = v.size() / 2;
  return Duel{v.head(q), v.tail(q)};
}

void DuelDataset::add(const Duel& duel, int y) { add(duel.concat(), y); }

void DuelDataset::add(const Eigen::Ref<const Vector>& concat, int y) {
  if (y != 0 && y != 1) throw Error(Errc::invalid_argument, "duel label must be 0 or 1");
  if (inputs.cols() == 0 && inputs.rows() == 0) inputs.resize(0, concat.size());
  if (concat.size() != inputs.cols()) {
    throw Error(Errc::invalid_argument, "duel dimension does not match the dataset");
  }
  const Index n = labels.size();
  inputs.conservativeResize(n + 1, Eigen::NoChange);
  inputs.row(n) = concat.transpose();
  labels.conservativeResize(n + 1);
  labels(n) = y;
}

void DuelDataset::validate() const {
  if (inputs.rows() != labels.size()) {
    throw Error(Errc::invalid_argument, "dataset: inputs and labels differ in length");
  }
  if (inputs.cols() % 2 != 0) throw Error(Errc::invalid_argument, "dataset: odd duel dimension");
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 0 && labels(i) != 1) throw Error(Errc::invalid_argument, "dataset: label not in {0,1}");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(root ^ h) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace pbo
