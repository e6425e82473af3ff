#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stride::trainer {

struct CemSettings
{
  int population = 32;
  double elite_fraction = 0.25;
  double init_std = 0.1;
  double min_std = 0.02;

  /// max(1, round(population * elite_fraction))
  int elites() const;

  /// Throws std::invalid_argument unless population >= 2 * elites >= 2 and
  /// the standard deviations are positive.
  void check() const;
};

/// Cross-entropy method over a diagonal Gaussian. Higher scores are better;
/// -infinity marks a member that could not be scored.
class CrossEntropySearch
{
public:
  CrossEntropySearch(std::vector<double> mean, const CemSettings& settings);

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& std_dev() const { return std_; }
  std::size_t dimension() const { return mean_.size(); }

  /// Draws `population` members from N(mean, diag(std^2)) using a generator
  /// seeded with `seed`. Member-major layout: member i occupies
  /// [i * dimension, (i + 1) * dimension).
  std::vector<double> sample(std::uint64_t seed) const;

  /// Refits mean and std to the elite members; std is floored at min_std.
  /// Equal scores rank the member with the smaller parameter norm first,
  /// then the lower index, so an uninformative score does not make the
  /// mean wander away from small weights.
  void update(std::span<const double> members, std::span<const double> scores);

private:
  std::vector<double> mean_;
  std::vector<double> std_;
  CemSettings settings_;
};

}  // namespace stride::trainer
