#include "stride/llm/scripted.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>

#include "stride/common/seed.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/dsl/printer.hpp"

namespace stride::llm {

namespace {

using dsl::Expr;
using dsl::Op;

void collect(Expr& e, std::vector<Expr*>& out)
{
  out.push_back(&e);
  for (auto& a : e.args) collect(a, out);
}

std::vector<Expr*> all_nodes(dsl::RewardProgram& p)
{
  std::vector<Expr*> out;
  for (auto& d : p.definitions) collect(d.expr, out);
  collect(p.total, out);
  return out;
}

template <class V>
auto& pick(V& v, std::mt19937_64& rng)
{
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool swapped(Op op, Op& out)
{
  switch (op) {
    case Op::add: out = Op::sub; return true;
    case Op::sub: out = Op::add; return true;
    case Op::mul: out = Op::div; return true;
    case Op::div: out = Op::mul; return true;
    case Op::min: out = Op::max; return true;
    case Op::max: out = Op::min; return true;
    case Op::exp: out = Op::tanh; return true;
    case Op::tanh: out = Op::exp; return true;
    default: return false;
  }
}

bool swap_operator(dsl::RewardProgram& p, std::mt19937_64& rng)
{
  std::vector<Expr*> nodes;
  Op unused{};
  for (Expr* e : all_nodes(p)) {
    if (swapped(e->op, unused)) nodes.push_back(e);
  }
  if (nodes.empty()) return false;
  Expr* e = pick(nodes, rng);
  swapped(e->op, e->op);
  return true;
}

bool perturb_literal(dsl::RewardProgram& p, std::mt19937_64& rng)
{
  std::vector<Expr*> nodes;
  for (Expr* e : all_nodes(p)) {
    if (e->op == Op::literal && e->value != 0.0) nodes.push_back(e);
  }
  if (nodes.empty()) return false;
  std::normal_distribution<double> n(0.0, 0.5);
  pick(nodes, rng)->value *= std::exp(n(rng));
  return true;
}

void replace_references(Expr& e, const std::string& name)
{
  if (e.op == Op::variable && e.name == name) {
    e = Expr::literal(0.0);
    return;
  }
  for (auto& a : e.args) replace_references(a, name);
}

bool drop_component(dsl::RewardProgram& p, std::mt19937_64& rng)
{
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < p.definitions.size(); ++i) {
    if (p.definitions[i].kind == dsl::DefinitionKind::component) idx.push_back(i);
  }
  if (idx.size() < 2) return false;
  const std::size_t i = pick(idx, rng);
  const std::string name = p.definitions[i].name;
  p.definitions.erase(p.definitions.begin() + static_cast<std::ptrdiff_t>(i));
  for (auto& d : p.definitions) replace_references(d.expr, name);
  replace_references(p.total, name);
  return true;
}

bool add_component(dsl::RewardProgram& p, const std::vector<std::string>& variables, std::mt19937_64& rng)
{
  if (variables.empty()) return false;
  std::set<std::string> taken;
  for (const auto& d : p.definitions) taken.insert(d.name);
  std::string name;
  for (int k = 1; name.empty() || taken.contains(name); ++k) name = "term_" + std::to_string(k);

  std::normal_distribution<double> n(0.0, 0.5);
  const double scale = std::exp(n(rng));
  Expr v = Expr::variable(pick(variables, rng));
  Expr body;
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: body = Expr::unary(Op::tanh, Expr::binary(Op::div, v, Expr::literal(scale))); break;
    case 1: body = Expr::binary(Op::mul, Expr::unary(Op::neg, Expr::unary(Op::abs, v)), Expr::literal(scale)); break;
    case 2:
      body = Expr::unary(Op::exp, Expr::binary(Op::div, Expr::unary(Op::neg, Expr::unary(Op::abs, v)),
                                               Expr::literal(scale)));
      break;
    default: body = Expr::clip(v, Expr::literal(-scale), Expr::literal(scale)); break;
  }
  dsl::Definition d;
  d.kind = dsl::DefinitionKind::component;
  d.name = name;
  d.expr = std::move(body);
  p.definitions.push_back(std::move(d));

  const double weight = 0.1 * std::exp(n(rng));
  p.total = Expr::binary(Op::add, std::move(p.total), Expr::binary(Op::mul, Expr::literal(weight), Expr::variable(name)));
  return true;
}

bool substitute_variable(dsl::RewardProgram& p, const std::vector<std::string>& variables, std::mt19937_64& rng)
{
  if (variables.size() < 2) return false;
  const std::set<std::string> declared(variables.begin(), variables.end());
  std::vector<Expr*> nodes;
  for (Expr* e : all_nodes(p)) {
    if (e->op == Op::variable && declared.contains(e->name)) nodes.push_back(e);
  }
  if (nodes.empty()) return false;
  Expr* e = pick(nodes, rng);
  std::vector<std::string> others;
  for (const auto& v : variables) {
    if (v != e->name) others.push_back(v);
  }
  e->name = pick(others, rng);
  return true;
}

}  // namespace

std::vector<std::string> default_pool()
{
  return {
      "component speed = vel_x\n"
      "total = speed\n",

      "let upright = exp(-abs(torso_pitch) / 0.5)\n"
      "component speed = clip(vel_x, -1.0, 3.0)\n"
      "component posture = upright\n"
      "total = speed + 0.5 * posture\n",

      "component speed = tanh(vel_x / 1.5)\n"
      "component height = -abs(height_above_terrain - 0.86)\n"
      "total = speed + 2.0 * height\n",

      "component alive = 1.0\n"
      "total = alive\n",

      "component speed = vel_x\n"
      "component effort = -0.002 * (abs(hip_L_vel) + abs(hip_R_vel) + abs(knee_L_vel) + abs(knee_R_vel))\n"
      "total = speed + effort\n",

      "component lean = -abs(torso_pitch - 0.2)\n"
      "component bounce = -abs(vel_z)\n"
      "total = lean + 0.5 * bounce\n",
  };
}

bool mutate(dsl::RewardProgram& program, MutationKind kind, const std::vector<std::string>& variables,
            std::mt19937_64& rng)
{
  switch (kind) {
    case MutationKind::swap: return swap_operator(program, rng);
    case MutationKind::perturb: return perturb_literal(program, rng);
    case MutationKind::add_drop:
      if (std::bernoulli_distribution(0.5)(rng) && drop_component(program, rng)) return true;
      return add_component(program, variables, rng);
    case MutationKind::substitute: return substitute_variable(program, variables, rng);
  }
  return false;
}

ScriptedBackend::ScriptedBackend(ScriptedSettings settings, std::vector<std::string> variables)
    : settings_(std::move(settings)), variables_(std::move(variables))
{
  if (settings_.pool.empty()) settings_.pool = default_pool();
}

std::string ScriptedBackend::respond(const std::string& source)
{
  std::string s = source;
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return "Here is a reward program for the task.\n\n```rwd\n" + s + "\n```\n";
}

std::string ScriptedBackend::mutant(const std::string& parent, std::mt19937_64& rng) const
{
  auto parsed = dsl::parse(parent);
  if (!parsed.ok()) return parent;
  dsl::RewardProgram p = std::move(*parsed.program);

  const auto& r = settings_.rates;
  std::discrete_distribution<int> kind({r.swap, r.perturb, r.add_drop, r.substitute});
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (mutate(p, static_cast<MutationKind>(kind(rng)), variables_, rng)) break;
  }
  return dsl::canonical_print(p);
}

std::vector<GenerationResult> ScriptedBackend::generate(const PromptBundle& prompt, int k)
{
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(derive_seed(settings_.seed, prompt.system + '\x1f' + prompt.user));

  std::optional<std::string> incumbent;
  if (const auto at = prompt.user.find(kReviewHeading); at != std::string::npos) {
    incumbent = extract_code_block(std::string_view(prompt.user).substr(at));
  }

  const auto& pool = settings_.pool;
  std::vector<GenerationResult> out;
  out.reserve(static_cast<std::size_t>(std::max(k, 0)));
  for (int i = 0; i < k; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    std::string source;
    if (incumbent) {
      source = mutant(*incumbent, rng);
    } else if (slot < pool.size()) {
      source = pool[slot];
    } else {
      source = mutant(pool[(slot - pool.size()) % pool.size()], rng);
    }
    out.push_back(GenerationResult::extracted(respond(source), dsl::Origin::scripted, 0.0));
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out) r.latency_seconds = elapsed / std::max(k, 1);
  return out;
}

}  // namespace stride::llm
