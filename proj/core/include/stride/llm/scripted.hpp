#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stride/dsl/ast.hpp"
#include "stride/llm/backend.hpp"

namespace stride::llm {

/// Seed programs for the flat-ground sprint task: a mix of good, mediocre
/// and useless rewards, all valid against the simulator's observations.
std::vector<std::string> default_pool();

enum class MutationKind
{
  swap,        // exchange an operator for a related one
  perturb,     // scale a literal by exp(N(0, 0.5))
  add_drop,    // add a new component or drop one
  substitute,  // read a different observation variable
};

/// Applies one mutation of the given kind in place. Returns false when the
/// program offers nothing to mutate that way (e.g. no literal to perturb).
bool mutate(dsl::RewardProgram& program, MutationKind kind, const std::vector<std::string>& variables,
            std::mt19937_64& rng);

/// Offline stand-in for a language model.
///
/// For an initial prompt the first min(k, |pool|) slots return pool entries
/// verbatim and the remaining slots return mutants of pool entries taken in
/// turn. For a reflection prompt every slot is a mutant of the program under
/// review. The generator is seeded from (seed, prompt text), so a batch is a
/// pure function of (seed, pool, prompt, k).
class ScriptedBackend final : public GeneratorBackend
{
public:
  ScriptedBackend(ScriptedSettings settings, std::vector<std::string> variables);

  std::vector<GenerationResult> generate(const PromptBundle& prompt, int k) override;

  /// Wraps a program the way a chat model would answer.
  static std::string respond(const std::string& source);

private:
  std::string mutant(const std::string& parent, std::mt19937_64& rng) const;

  ScriptedSettings settings_;
  std::vector<std::string> variables_;
};

}  // namespace stride::llm
