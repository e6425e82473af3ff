#include "stride/trainer/cem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace stride::trainer {

int CemSettings::elites() const
{
  return std::max(1, static_cast<int>(std::lround(population * elite_fraction)));
}

void CemSettings::check() const
{
  if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) {
    throw std::invalid_argument("elite_fraction must lie in (0, 1]");
  }
  if (population < 2 * elites()) {
    throw std::invalid_argument("population (" + std::to_string(population) + ") must be at least twice the elite count (" +
                                std::to_string(elites()) + ")");
  }
  if (!(init_std > 0.0) || !(min_std > 0.0)) throw std::invalid_argument("CEM standard deviations must be > 0");
}

CrossEntropySearch::CrossEntropySearch(std::vector<double> mean, const CemSettings& settings)
    : mean_(std::move(mean)), std_(mean_.size(), settings.init_std), settings_(settings)
{
  settings_.check();
}

std::vector<double> CrossEntropySearch::sample(std::uint64_t seed) const
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = mean_.size();
  std::vector<double> out(static_cast<std::size_t>(settings_.population) * d);
  for (std::size_t i = 0; i < static_cast<std::size_t>(settings_.population); ++i) {
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = mean_[k] + std_[k] * normal(rng);
  }
  return out;
}

void CrossEntropySearch::update(std::span<const double> members, std::span<const double> scores)
{
  const std::size_t d = mean_.size();
  const std::size_t n = scores.size();
  if (members.size() != n * d) throw std::invalid_argument("CrossEntropySearch::update: size mismatch");

  std::vector<double> norms(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) norms[i] += members[i * d + k] * members[i * d + k];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return norms[a] < norms[b];
  });
  const std::size_t e = std::min(n, static_cast<std::size_t>(settings_.elites()));

  for (std::size_t k = 0; k < d; ++k) {
    double m = 0.0;
    for (std::size_t r = 0; r < e; ++r) m += members[order[r] * d + k];
    m /= static_cast<double>(e);
    // Spread of the elites around the mean they were drawn from: while the
    // elites agree on a direction the step length stays in the estimate and
    // the distribution does not collapse before it arrives.
    double v = 0.0;
    for (std::size_t r = 0; r < e; ++r) {
      const double dev = members[order[r] * d + k] - mean_[k];
      v += dev * dev;
    }
    v /= static_cast<double>(e);
    mean_[k] = m;
    std_[k] = std::max(settings_.min_std, std::sqrt(v));
  }
}

}  // namespace stride::trainer
