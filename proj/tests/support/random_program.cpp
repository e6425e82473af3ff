#include "random_program.hpp"

#include <cmath>

namespace stride::testkit {

namespace {

using dsl::Expr;
using dsl::Op;

double random_literal(std::mt19937_64& rng)
{
  // mixes short decimals, long mantissas and extreme exponents
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return static_cast<double>(std::uniform_int_distribution<int>(0, 20)(rng)) / 4.0;
    case 1: return std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    case 2: return std::ldexp(std::uniform_real_distribution<double>(0.5, 1.0)(rng),
                              std::uniform_int_distribution<int>(-40, 40)(rng));
    default: return -std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  }
}

Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& names, int depth, bool safe)
{
  std::uniform_int_distribution<int> coin(0, 99);
  if (depth <= 1 || coin(rng) < 25) {
    if (!names.empty() && coin(rng) < 60) {
      return Expr::variable(names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)]);
    }
    return Expr::literal(random_literal(rng));
  }
  static const Op unary_safe[] = {Op::neg, Op::abs, Op::tanh, Op::exp};
  static const Op unary_all[] = {Op::neg, Op::abs, Op::tanh, Op::exp, Op::sqrt, Op::log};
  static const Op binary_safe[] = {Op::add, Op::sub, Op::mul, Op::min, Op::max};
  static const Op binary_all[] = {Op::add, Op::sub, Op::mul, Op::div, Op::pow, Op::min, Op::max};

  const int shape = coin(rng);
  if (shape < 30) {
    const Op op = safe ? unary_safe[coin(rng) % 4] : unary_all[coin(rng) % 6];
    Expr arg = random_expr(rng, names, depth - 1, safe);
    // keep exp() from overflowing on nested inputs
    if (op == Op::exp) arg = Expr::unary(Op::tanh, std::move(arg));
    return Expr::unary(op, std::move(arg));
  }
  if (shape < 90) {
    const Op op = safe ? binary_safe[coin(rng) % 5] : binary_all[coin(rng) % 7];
    return Expr::binary(op, random_expr(rng, names, depth - 1, safe), random_expr(rng, names, depth - 1, safe));
  }
  return Expr::clip(random_expr(rng, names, depth - 1, safe), random_expr(rng, names, depth - 1, safe),
                    random_expr(rng, names, depth - 1, safe));
}

}  // namespace

dsl::RewardProgram random_program(std::mt19937_64& rng, const std::vector<std::string>& variables,
                                  const RandomProgramOptions& options)
{
  std::vector<std::string> visible = variables;
  dsl::RewardProgram p;
  const int n = std::uniform_int_distribution<int>(1, options.max_definitions)(rng);
  bool has_component = false;
  for (int i = 0; i < n; ++i) {
    dsl::Definition d;
    const bool last = i + 1 == n;
    d.kind = (last && !has_component) || std::bernoulli_distribution(0.6)(rng) ? dsl::DefinitionKind::component
                                                                               : dsl::DefinitionKind::let;
    has_component = has_component || d.kind == dsl::DefinitionKind::component;
    d.name = (d.kind == dsl::DefinitionKind::component ? "c" : "v") + std::to_string(i);
    const int depth = std::uniform_int_distribution<int>(1, options.max_depth)(rng);
    d.expr = random_expr(rng, visible, depth, options.domain_safe);
    visible.push_back(d.name);
    p.definitions.push_back(std::move(d));
  }
  p.total = random_expr(rng, visible, std::uniform_int_distribution<int>(1, options.max_depth)(rng),
                        options.domain_safe);
  return p;
}

std::map<std::string, double> random_bindings(std::mt19937_64& rng, const std::vector<std::string>& variables)
{
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::map<std::string, double> out;
  for (const auto& v : variables) out[v] = u(rng);
  return out;
}

}  // namespace stride::testkit
