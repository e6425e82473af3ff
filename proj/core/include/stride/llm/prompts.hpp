#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stride/sim/descriptor.hpp"
#include "stride/trainer/train.hpp"

namespace stride::llm {

inline constexpr std::string_view kTemplateVersion = "prompts-v1";

/// Heading that opens the feedback part of a reflection prompt. The program
/// under review follows it in the first fenced block.
inline constexpr std::string_view kReviewHeading = "## Reward program under review";

struct PromptBundle
{
  std::string system;
  std::string user;
  std::string template_version{kTemplateVersion};

  bool operator==(const PromptBundle&) const = default;
};

/// Optional task content supplied by the run config.
struct PromptOptions
{
  std::string style_guidance;  // injected verbatim into the user message
  std::string human_guidance;  // appended to the user message
};

/// What the reflection prompt reports about the incumbent.
struct ReflectionInput
{
  std::string candidate_id;
  std::string source;  // canonical program text
  double fitness = 0.0;
  const trainer::TrainReport* report = nullptr;
  int epoch_freq = 1;
  int iteration = 1;   // search iteration this prompt opens
  int iterations = 1;
  std::vector<std::string> error_digest;  // one line per failed candidate
};

/// "%#.6g": six significant digits, trailing zeros kept.
std::string format_number(double v);

/// Replaces every `{name}` whose name is a key of `values` in one pass;
/// substituted text is not scanned again. Throws std::logic_error when a
/// `{identifier}` token is left unresolved.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// `{identifier}` tokens present in `text`.
std::vector<std::string> unresolved_placeholders(std::string_view text);

/// Bullet list of observation variables, one line each.
std::string variable_catalogue(const sim::EnvDescriptor& descriptor);

/// Per-window statistics block of a reflection prompt.
std::string statistics_table(const trainer::TrainReport& report);

/// Throws std::invalid_argument if the descriptor has no observations.
PromptBundle build_initial_prompt(const sim::EnvDescriptor& descriptor, const std::string& task,
                                  const PromptOptions& options = {});

/// The initial context followed by feedback on the incumbent.
/// Throws std::invalid_argument if `input.report` is null.
PromptBundle build_reflection_prompt(const sim::EnvDescriptor& descriptor, const std::string& task,
                                     const ReflectionInput& input, const PromptOptions& options = {});

}  // namespace stride::llm
