#pragma once

#include <string>
#include <vector>

#include "stride/llm/backend.hpp"
#include "stride/search/config.hpp"
#include "stride/trainer/train.hpp"

namespace stride::testkit {

/// Two components over three windows with hand-picked statistics.
trainer::TrainReport synthetic_report();

/// A run config small enough for unit tests: short episodes, a handful of
/// CEM generations, scripted backend.
search::RunConfig tiny_config(std::uint64_t seed = 1);

/// Answers every prompt with the same list of responses, cycling when k
/// exceeds it.
class FixedBackend final : public llm::GeneratorBackend
{
public:
  explicit FixedBackend(std::vector<std::string> responses) : responses_(std::move(responses)) {}

  std::vector<llm::GenerationResult> generate(const llm::PromptBundle& prompt, int k) override;

  std::vector<llm::PromptBundle> prompts;  // every prompt received, in order

private:
  std::vector<std::string> responses_;
};

/// A fenced answer the way a chat model writes it.
std::string fenced(const std::string& program);

}  // namespace stride::testkit
