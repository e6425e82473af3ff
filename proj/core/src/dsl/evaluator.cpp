#include "stride/dsl/evaluator.hpp"

#include <algorithm>
#include <cmath>

namespace stride::dsl {

std::string EvalError::describe() const
{
  return "in '" + definition + "' at offset " + std::to_string(span.offset) + ": " + message;
}

EvaluationFailure::EvaluationFailure(EvalError error)
    : std::runtime_error("reward evaluation failed " + error.describe()), error_(std::move(error))
{
}

CompiledProgram CompiledProgram::compile(const RewardProgram& program, std::span<const std::string> inputs)
{
  CompiledProgram cp;
  cp.input_count_ = inputs.size();

  std::map<std::string, std::uint32_t, std::less<>> names;
  for (std::size_t i = 0; i < inputs.size(); ++i) names.emplace(inputs[i], static_cast<std::uint32_t>(i));

  std::uint32_t slot = static_cast<std::uint32_t>(inputs.size());
  for (const auto& def : program.definitions) {
    const auto def_index = static_cast<std::uint32_t>(cp.definition_names_.size());
    cp.definition_names_.push_back(def.name);
    cp.emit(def.expr, def_index, names);
    cp.code_.push_back(Instr{Code::store, slot, 0.0});
    names.insert_or_assign(def.name, slot);
    if (def.kind == DefinitionKind::component) {
      cp.component_slots_.push_back(slot);
      cp.component_names_.push_back(def.name);
    }
    ++slot;
  }

  const auto total_index = static_cast<std::uint32_t>(cp.definition_names_.size());
  cp.definition_names_.push_back("total");
  cp.emit(program.total, total_index, names);
  cp.total_slot_ = slot;
  cp.code_.push_back(Instr{Code::store, slot, 0.0});
  cp.slot_count_ = slot + 1;

  // Stack high-water mark.
  std::size_t depth = 0;
  for (const auto& in : cp.code_) {
    switch (in.code) {
      case Code::push:
      case Code::load:
        ++depth;
        break;
      case Code::add:
      case Code::sub:
      case Code::mul:
      case Code::div:
      case Code::pow:
      case Code::min:
      case Code::max:
        --depth;
        break;
      case Code::clip:
        depth -= 2;
        break;
      case Code::store:
        --depth;
        break;
      default:
        break;
    }
    cp.max_stack_ = std::max(cp.max_stack_, depth);
  }
  return cp;
}

void CompiledProgram::emit(const Expr& e, std::uint32_t definition,
                           const std::map<std::string, std::uint32_t, std::less<>>& names)
{
  auto site = [&] {
    sites_.push_back(Site{definition, e.span});
    return static_cast<std::uint32_t>(sites_.size() - 1);
  };

  switch (e.op) {
    case Op::literal:
      code_.push_back(Instr{Code::push, 0, e.value});
      return;
    case Op::variable: {
      if (auto it = names.find(e.name); it != names.end()) {
        code_.push_back(Instr{Code::load, it->second, 0.0});
        return;
      }
      double constant = 0.0;
      if (builtin_constant(e.name, constant)) {
        code_.push_back(Instr{Code::push, 0, constant});
        return;
      }
      throw std::invalid_argument("reward program references unknown name '" + e.name + "'");
    }
    default:
      break;
  }

  for (const auto& a : e.args) emit(a, definition, names);

  Code code = Code::add;
  switch (e.op) {
    case Op::neg: code = Code::neg; break;
    case Op::abs: code = Code::abs; break;
    case Op::exp: code = Code::exp; break;
    case Op::tanh: code = Code::tanh; break;
    case Op::sqrt: code = Code::sqrt; break;
    case Op::log: code = Code::log; break;
    case Op::add: code = Code::add; break;
    case Op::sub: code = Code::sub; break;
    case Op::mul: code = Code::mul; break;
    case Op::div: code = Code::div; break;
    case Op::pow: code = Code::pow; break;
    case Op::min: code = Code::min; break;
    case Op::max: code = Code::max; break;
    case Op::clip: code = Code::clip; break;
    default: break;
  }
  code_.push_back(Instr{code, site(), 0.0});
}

EvalScratch CompiledProgram::make_scratch() const
{
  EvalScratch s;
  s.slots.resize(slot_count_);
  s.stack.resize(max_stack_ + 1);
  return s;
}

std::optional<EvalError> CompiledProgram::run(std::span<const double> inputs, EvalScratch& scratch,
                                              std::span<double> components, double& total) const
{
  if (inputs.size() != input_count_) throw std::invalid_argument("CompiledProgram::run: wrong number of inputs");
  if (components.size() < component_slots_.size()) {
    throw std::invalid_argument("CompiledProgram::run: component buffer too small");
  }
  if (scratch.slots.size() < slot_count_ || scratch.stack.size() < max_stack_ + 1) scratch = make_scratch();

  double* slots = scratch.slots.data();
  std::copy(inputs.begin(), inputs.end(), slots);
  double* sp = scratch.stack.data();  // points one past the top

  auto failure = [&](std::uint32_t site_index, const char* message) {
    const Site& s = sites_[site_index];
    return EvalError{definition_names_[s.definition], s.span, message};
  };

  for (const Instr& in : code_) {
    switch (in.code) {
      case Code::push:
        *sp++ = in.value;
        continue;
      case Code::load:
        *sp++ = slots[in.index];
        continue;
      case Code::store:
        slots[in.index] = *--sp;
        continue;
      default:
        break;
    }

    double r = 0.0;
    switch (in.code) {
      case Code::neg:
        r = -sp[-1];
        break;
      case Code::abs:
        r = std::fabs(sp[-1]);
        break;
      case Code::exp:
        r = std::exp(sp[-1]);
        break;
      case Code::tanh:
        r = std::tanh(sp[-1]);
        break;
      case Code::sqrt:
        if (sp[-1] < 0.0) return failure(in.index, "sqrt of a negative value");
        r = std::sqrt(sp[-1]);
        break;
      case Code::log:
        if (sp[-1] <= 0.0) return failure(in.index, "log of a non-positive value");
        r = std::log(sp[-1]);
        break;
      case Code::add:
        r = sp[-2] + sp[-1];
        --sp;
        break;
      case Code::sub:
        r = sp[-2] - sp[-1];
        --sp;
        break;
      case Code::mul:
        r = sp[-2] * sp[-1];
        --sp;
        break;
      case Code::div:
        if (sp[-1] == 0.0) return failure(in.index, "division by zero");
        r = sp[-2] / sp[-1];
        --sp;
        break;
      case Code::pow:
        r = std::pow(sp[-2], sp[-1]);
        --sp;
        break;
      case Code::min:
        r = std::min(sp[-2], sp[-1]);
        --sp;
        break;
      case Code::max:
        r = std::max(sp[-2], sp[-1]);
        --sp;
        break;
      case Code::clip:
        r = std::min(std::max(sp[-3], sp[-2]), sp[-1]);
        sp -= 2;
        break;
      default:
        break;
    }
    if (!std::isfinite(r)) return failure(in.index, "result is not finite");
    sp[-1] = r;
  }

  for (std::size_t i = 0; i < component_slots_.size(); ++i) components[i] = slots[component_slots_[i]];
  total = slots[total_slot_];
  return std::nullopt;
}

ComponentValues evaluate(const RewardProgram& program, const std::map<std::string, double>& bindings)
{
  std::vector<std::string> names;
  std::vector<double> values;
  names.reserve(bindings.size());
  values.reserve(bindings.size());
  for (const auto& [k, v] : bindings) {
    names.push_back(k);
    values.push_back(v);
  }

  const CompiledProgram compiled = CompiledProgram::compile(program, names);
  EvalScratch scratch = compiled.make_scratch();
  std::vector<double> components(compiled.component_names().size());
  ComponentValues out;
  if (auto err = compiled.run(values, scratch, components, out.total)) throw EvaluationFailure(std::move(*err));
  for (std::size_t i = 0; i < components.size(); ++i) out.per_component[compiled.component_names()[i]] = components[i];
  return out;
}

}  // namespace stride::dsl
