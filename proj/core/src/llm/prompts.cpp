#include "stride/llm/prompts.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace stride::llm {

namespace {

constexpr std::string_view kDslReference = R"(Statements go one per line (or are separated by ';'):
  let NAME = expr          helper value, not reported
  component NAME = expr    reward term, reported in the training statistics
  total = expr             the scalar reward; must be the last statement
A name defined by let or component can be used by every later statement.
Expressions use numbers, names, + - * / with the usual precedence, unary
minus, parentheses and these functions:
  abs(x)  exp(x)  tanh(x)  sqrt(x)  log(x)
  pow(x, y)  min(x, y)  max(x, y)  clip(x, lo, hi)
pi is predefined. Everything after # on a line is a comment.
A program needs at least one component.)";

constexpr std::string_view kFormatTips = R"(- Put the whole program in one fenced block opened with ```rwd and closed with ```. Anything outside the block is ignored.
- Declare every term you want reported during training as `component name = ...`; use `let` for intermediate values.
- Finish with `total = ...`, the value the policy maximizes, built from the components.
- Read only the observation variables you are given.

Example of the expected shape:

```rwd
let upright = exp(-abs(torso_pitch) / 0.4)
component progress = clip(vel_x, -1.0, 3.0)
component balance = upright
component effort = -0.01 * (abs(hip_L_vel) + abs(hip_R_vel))
total = progress * balance + 0.5 * balance + effort
```)";

constexpr std::string_view kSystemTemplate = R"(You write reward programs for reinforcement learning. A policy is trained to maximize the reward you write, so your program decides which behavior the agent ends up with.

Reward programs use a small expression language instead of a general-purpose programming language:

{dsl_reference}

Keep these points in mind:
1. Work from the environment. Build the reward out of the observation variables the environment lists. A name that is not listed, not a constant and not defined earlier in the program is rejected before training.
2. Aim at the task. When the task has several goals (progress, balance, economy of effort), give each its own component and weight them so that no single term swamps the rest.
3. Control magnitudes. Squash unbounded quantities with exp, tanh or clip and write the scale of each transformation as a literal temperature right where it is used, as in exp(-abs(torso_pitch) / 0.3).
4. Stay finite. The program runs after every simulation step. A value that turns infinite or NaN (division by something that can reach zero, log or sqrt of a negative number, exp of a large argument) ends the episode as a failure.
5. Stay small. There are no loops and no memory between steps, so short expressions are all you need.
6. Be inventive. A term may scale another one, for instance speed multiplied by an uprightness factor, when that captures the goal better than a plain sum.

Output format:
{format_tips})";

constexpr std::string_view kUserTemplate = R"(Write a reward program for this task: {task}

The environment provides the observation variables below. All of them are recomputed after every simulation step and are read by name.

### Observation variables
{variable_catalogue}

### Environment descriptor
```json
{descriptor_json}
```

When designing the program:
- Use the variables that bear on the task and leave out the rest.
- Reward the main objective directly, then add secondary terms for stability and effort.
- Bring components to comparable magnitudes, for example with exp or tanh and an explicit temperature.
- Name each component after what it measures so the training statistics are easy to read.
{style_block}{guidance_block}
Answer with a single ```rwd block.)";

constexpr std::string_view kFeedbackTemplate = R"({review_heading}

This is search iteration {iteration} of {iterations}. Candidate {candidate_id} is the best program found so far. Its fitness is {fitness} (the fraction of the target distance the trained policy covers; 1 means full success).

```rwd
{source}
```

A policy was trained against this program. Every {epoch_freq} training generations the following was recorded: for each reward component the maximum, mean and minimum of its per-episode sum, the success rate (mean fitness of the episodes), and the mean episode length in steps.

{statistics_table}{error_block}
### Reading the statistics
Go through the numbers first, then write an improved program.
- A success rate that stays near zero means the reward does not lead to the task at all; rewrite the main term instead of tuning its weight.
- A component whose maximum, mean and minimum are nearly equal does not separate good policies from bad ones; rescale it, reshape it or remove it.
- A component far larger than the others dominates the total; reduce its weight or change its temperature.
- Short episodes mean the robot falls early; strengthen the terms that keep it upright.
You may keep, rescale, replace or remove any component and you may add new ones.

Answer with the complete new program in a single ```rwd block, following the output format given earlier.)";

bool identifier_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identifier_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Length of a `{identifier}` token at s[i], or 0.
std::size_t placeholder_at(std::string_view s, std::size_t i)
{
  if (s[i] != '{' || i + 1 >= s.size() || !identifier_start(s[i + 1])) return 0;
  std::size_t j = i + 2;
  while (j < s.size() && identifier_char(s[j])) ++j;
  if (j >= s.size() || s[j] != '}') return 0;
  return j - i + 1;
}

std::string optional_block(std::string_view heading, const std::string& text)
{
  if (text.empty()) return {};
  std::string out = "\n### ";
  out += heading;
  out += '\n';
  out += text;
  if (text.back() != '\n') out += '\n';
  return out;
}

}  // namespace

std::string format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values)
{
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (const std::size_t n = placeholder_at(tmpl, i)) {
      const std::string key(tmpl.substr(i + 1, n - 2));
      const auto it = values.find(key);
      if (it == values.end()) throw std::logic_error("unresolved template placeholder {" + key + "}");
      out += it->second;
      i += n;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

std::vector<std::string> unresolved_placeholders(std::string_view text)
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (const std::size_t n = placeholder_at(text, i)) out.emplace_back(text.substr(i, n));
  }
  return out;
}

std::string variable_catalogue(const sim::EnvDescriptor& descriptor)
{
  std::string out;
  for (const auto& v : descriptor.observations) {
    out += "- " + v.name + " [" + v.unit + "]: " + v.description + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string statistics_table(const trainer::TrainReport& report)
{
  if (report.windows.empty()) return "No statistics were recorded before training stopped.\n";
  std::string out;
  for (const auto& w : report.windows) {
    out += "Window " + std::to_string(w.window) + " (generations " + std::to_string(w.first_generation) + "-" +
           std::to_string(w.last_generation) + ", " + std::to_string(w.episodes) + " episodes, " +
           std::to_string(w.failed_episodes) + " failed):\n";
    out += "  success rate " + format_number(w.mean_fitness) + ", max fitness " + format_number(w.max_fitness) +
           ", mean episode length " + format_number(w.mean_episode_length) + ", fall rate " +
           format_number(w.fall_rate) + "\n";
    for (const auto& [name, s] : w.components) {
      out += "  " + name + ": max " + format_number(s.max) + ", mean " + format_number(s.mean) + ", min " +
             format_number(s.min) + "\n";
    }
  }
  return out;
}

PromptBundle build_initial_prompt(const sim::EnvDescriptor& descriptor, const std::string& task,
                                  const PromptOptions& options)
{
  if (descriptor.observations.empty()) throw std::invalid_argument("descriptor lists no observation variables");
  PromptBundle b;
  b.system = render(kSystemTemplate, {{"dsl_reference", std::string(kDslReference)},
                                      {"format_tips", std::string(kFormatTips)}});
  b.user = render(kUserTemplate, {{"task", task},
                                  {"variable_catalogue", variable_catalogue(descriptor)},
                                  {"descriptor_json", descriptor.canonical_json()},
                                  {"style_block", optional_block("Style guidance", options.style_guidance)},
                                  {"guidance_block", optional_block("Operator guidance", options.human_guidance)}});
  return b;
}

PromptBundle build_reflection_prompt(const sim::EnvDescriptor& descriptor, const std::string& task,
                                     const ReflectionInput& input, const PromptOptions& options)
{
  if (input.report == nullptr) throw std::invalid_argument("reflection needs the incumbent's training report");
  PromptBundle b = build_initial_prompt(descriptor, task, options);

  std::string errors;
  if (!input.error_digest.empty()) {
    errors = "\n### Failed candidates of the last iteration\n";
    for (const auto& line : input.error_digest) errors += "- " + line + "\n";
  }
  std::string source = input.source;
  while (!source.empty() && std::isspace(static_cast<unsigned char>(source.back()))) source.pop_back();
  b.user += "\n\n";
  b.user += render(kFeedbackTemplate, {{"review_heading", std::string(kReviewHeading)},
                                       {"candidate_id", input.candidate_id},
                                       {"fitness", format_number(input.fitness)},
                                       {"source", source},
                                       {"epoch_freq", std::to_string(input.epoch_freq)},
                                       {"iteration", std::to_string(input.iteration)},
                                       {"iterations", std::to_string(input.iterations)},
                                       {"statistics_table", statistics_table(*input.report)},
                                       {"error_block", errors}});
  return b;
}

}  // namespace stride::llm
