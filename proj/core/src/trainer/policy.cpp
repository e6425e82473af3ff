#include "stride/trainer/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stride::trainer {

std::size_t MlpArchitecture::parameter_count() const
{
  std::size_t n = 0;
  std::size_t prev = inputs;
  for (std::size_t h : hidden) {
    n += prev * h + h;
    prev = h;
  }
  return n + prev * outputs + outputs;
}

PolicyParams PolicyParams::zeros(const MlpArchitecture& arch)
{
  return PolicyParams{arch, std::vector<double>(arch.parameter_count(), 0.0)};
}

void PolicyParams::check() const
{
  if (weights.size() != architecture.parameter_count()) {
    throw std::invalid_argument("policy has " + std::to_string(weights.size()) + " weights, architecture needs " +
                                std::to_string(architecture.parameter_count()));
  }
  if (!std::all_of(weights.begin(), weights.end(), [](double w) { return std::isfinite(w); })) {
    throw std::invalid_argument("policy weights must be finite");
  }
}

nlohmann::json to_json(const MlpArchitecture& a)
{
  return {{"inputs", a.inputs}, {"hidden", a.hidden}, {"outputs", a.outputs}, {"output_scale", a.output_scale}};
}

MlpArchitecture architecture_from_json(const nlohmann::json& j)
{
  MlpArchitecture a;
  a.inputs = j.at("inputs").get<std::size_t>();
  a.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  a.outputs = j.at("outputs").get<std::size_t>();
  a.output_scale = j.at("output_scale").get<double>();
  return a;
}

nlohmann::json to_json(const PolicyParams& p)
{
  return {{"architecture", to_json(p.architecture)}, {"weights", p.weights}};
}

PolicyParams policy_from_json(const nlohmann::json& j)
{
  PolicyParams p;
  p.architecture = architecture_from_json(j.at("architecture"));
  p.weights = j.at("weights").get<std::vector<double>>();
  p.check();
  return p;
}

PolicyEvaluator::PolicyEvaluator(const MlpArchitecture& arch) : arch_(arch)
{
  std::size_t widest = std::max(arch.inputs, arch.outputs);
  for (std::size_t h : arch.hidden) widest = std::max(widest, h);
  a_.resize(widest);
  b_.resize(widest);
}

void PolicyEvaluator::forward(std::span<const double> weights, std::span<const double> input, std::span<double> output)
{
  if (weights.size() != arch_.parameter_count() || input.size() != arch_.inputs || output.size() != arch_.outputs) {
    throw std::invalid_argument("PolicyEvaluator::forward: dimension mismatch");
  }
  std::copy(input.begin(), input.end(), a_.begin());
  const double* w = weights.data();
  std::size_t in = arch_.inputs;

  auto layer = [&](std::size_t out, double* dst) {
    const double* bias = w + out * in;
    for (std::size_t r = 0; r < out; ++r) {
      double acc = bias[r];
      const double* row = w + r * in;
      for (std::size_t c = 0; c < in; ++c) acc += row[c] * a_[c];
      dst[r] = std::tanh(acc);
    }
    w = bias + out;
  };

  for (std::size_t h : arch_.hidden) {
    layer(h, b_.data());
    std::swap(a_, b_);
    in = h;
  }
  layer(arch_.outputs, b_.data());
  for (std::size_t r = 0; r < arch_.outputs; ++r) output[r] = arch_.output_scale * b_[r];
}

}  // namespace stride::trainer
