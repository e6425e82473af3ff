#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace stride::trainer {

/// Fully connected tanh network; the tanh output is scaled by output_scale.
struct MlpArchitecture
{
  std::size_t inputs = 0;
  std::vector<std::size_t> hidden = {32, 32};
  std::size_t outputs = 0;
  double output_scale = 1.0;

  std::size_t parameter_count() const;
  bool operator==(const MlpArchitecture&) const = default;
};

/// Flat weight vector laid out layer by layer: the row-major weight matrix
/// (outputs x inputs) followed by the bias vector.
struct PolicyParams
{
  MlpArchitecture architecture;
  std::vector<double> weights;

  /// All-zero weights: the network outputs exactly zero.
  static PolicyParams zeros(const MlpArchitecture& arch);

  /// Throws std::invalid_argument when the length or finiteness invariant fails.
  void check() const;

  bool operator==(const PolicyParams&) const = default;
};

nlohmann::json to_json(const MlpArchitecture& a);
MlpArchitecture architecture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PolicyParams& p);
PolicyParams policy_from_json(const nlohmann::json& j);

/// Forward pass with preallocated activations. Not thread-safe; use one per thread.
class PolicyEvaluator
{
public:
  explicit PolicyEvaluator(const MlpArchitecture& arch);

  /// `weights` must have parameter_count() entries.
  void forward(std::span<const double> weights, std::span<const double> input, std::span<double> output);

private:
  MlpArchitecture arch_;
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace stride::trainer
