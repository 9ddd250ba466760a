#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "revorder/csid.hpp"
#include "revorder/dataset.hpp"
#include "revorder/tokens.hpp"
#include "revorder/traces.hpp"

namespace py = pybind11;
using namespace revorder;

namespace {

Form form_from(const std::string& name) {
  if (name == "compact") return Form::Compact;
  if (name == "verbose") return Form::Verbose;
  throw DomainError("form must be 'compact' or 'verbose'");
}

std::string gen(const std::string& equation, const std::string& form,
                std::optional<std::size_t> rollback_at, int rollback_delta) {
  Equation eq = parse_equation(equation);
  if (rollback_at && eq.op != Op::Div) {
    throw DomainError("rollback_at applies to division only");
  }
  Trace trace;
  switch (eq.op) {
    case Op::Add:
      trace = gen_add_trace(eq.a, eq.b);
      break;
    case Op::Sub:
      trace = gen_sub_trace(eq.a, eq.b);
      break;
    case Op::Mul:
      trace = gen_mul_trace(eq.a, eq.b);
      break;
    case Op::Div: {
      RollbackPlan plan;
      if (rollback_at) plan.deltas[*rollback_at] = rollback_delta;
      trace = gen_div_trace(eq.a, eq.b, plan);
      break;
    }
  }
  return serialize(trace, form_from(form));
}

py::dict verify_text(const std::string& text) {
  VerifyResult r = verify(parse(text));
  py::dict d;
  d["valid"] = r.valid;
  d["step"] = r.step_index;
  d["expected"] = r.expected;
  d["found"] = r.found;
  d["message"] = r.message;
  return d;
}

std::string decode(const std::string& text) {
  Trace t = parse(text);
  std::string s = t.final.to_decimal();
  if (t.equation.op == Op::Div && t.remainder && !t.remainder->is_zero()) {
    s += "R" + t.remainder->to_decimal();
  }
  return s;
}

py::dict csid(const std::string& equation) {
  Equation eq = parse_equation(equation);
  if (eq.op == Op::Mul || eq.op == Op::Div) {
    throw DomainError("per-equation scoring covers addition and subtraction");
  }
  DigitString b = eq.op == Op::Sub ? eq.b.negated() : eq.b;
  py::dict d;
  d["plain"] = csid_add_sub(eq.a, b, FormatPolicy::Plain).max_csid;
  d["revorder"] = csid_add_sub(eq.a, b, FormatPolicy::RevOrder).max_csid;
  return d;
}

std::string worstcase(const std::string& op, std::uint64_t n, std::uint64_t m) {
  WorstCaseOp kind;
  if (op == "add") {
    kind = WorstCaseOp::Add;
  } else if (op == "sub") {
    kind = WorstCaseOp::Sub;
  } else if (op == "mul_direct") {
    kind = WorstCaseOp::MulDirect;
  } else if (op == "mul_decomposed") {
    kind = WorstCaseOp::MulDecomposed;
  } else if (op == "div_direct") {
    kind = WorstCaseOp::DivDirect;
  } else if (op == "div_decomposed") {
    kind = WorstCaseOp::DivDecomposed;
  } else {
    throw DomainError("op must be add, sub, mul_direct, mul_decomposed, "
                      "div_direct, or div_decomposed");
  }
  return csid_worstcase(kind, n, m).to_string();
}

std::size_t carry_chain(const std::string& equation) {
  Equation eq = parse_equation(equation);
  return classify_carry_chain(eq.a, eq.b);
}

py::dict token_cost_py(const std::string& equation, const std::string& form) {
  Trace t = parse(gen(equation, form, std::nullopt, 1));
  TokenCost c = token_cost(t, form_from(form));
  py::dict d;
  d["total"] = c.total;
  d["bare"] = c.bare;
  d["extra"] = c.extra();
  return d;
}

py::dict record_at_py(std::uint64_t seed, std::uint64_t index,
                      const std::string& spec_json) {
  DatasetSpec spec = spec_json.empty() ? DatasetSpec::standard_preset(seed)
                                       : dataset_spec_from_json(spec_json);
  spec.seed = seed;
  SampleRecord r = record_at(spec, index);
  py::dict d;
  d["prompt"] = r.prompt;
  d["completion"] = r.completion;
  d["op"] = std::string(op_name(r.op));
  d["a_digits"] = r.a_digits;
  d["b_digits"] = r.b_digits;
  d["rollback"] = r.rollback;
  d["carry_class"] = r.carry_class ? py::cast(*r.carry_class) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reversed-digit arithmetic traces: generation, verification, "
            "difficulty metrics, and dataset synthesis";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);

  m.def("gen", &gen, py::arg("equation"), py::arg("form") = "compact",
        py::arg("rollback_at") = py::none(), py::arg("rollback_delta") = 1,
        "Serialize the trace for 'a op b' (ops +, -, ×/*, ÷//). For division, "
        "rollback_at injects one misestimated quotient digit at that iteration.");
  m.def("verify", &verify_text, py::arg("trace"),
        "Parse and check a trace; returns a dict with valid/step/expected/"
        "found/message.");
  m.def("decode", &decode, py::arg("trace"),
        "Forward final value of a trace ('79', '79R5', '-21', ...).");
  m.def("csid", &csid, py::arg("equation"),
        "Max sequential-intermediate-digit counts for an addition or "
        "subtraction under plain and reversed output orders.");
  m.def("worstcase", &worstcase, py::arg("op"), py::arg("n"), py::arg("m") = 1,
        "Worst-case count for n-digit (by m-digit) operands: a number, or a "
        "growth class like 'O(n)'.");
  m.def("carry_chain", &carry_chain, py::arg("equation"),
        "Longest run of consecutive carries in the column addition.");
  m.def("token_cost", &token_cost_py, py::arg("equation"), py::arg("form") = "compact",
        "Token counts of the equation's trace vs the bare forward answer.");
  m.def("rewrite_chain", &rewrite_equation_chain, py::arg("text"),
        py::arg("delimiter") = "@@",
        "Rewrite a +/-/× chain with reversed intermediates between delimiters.");
  m.def("record_at", &record_at_py, py::arg("seed"), py::arg("index"),
        py::arg("spec_json") = "",
        "Deterministic training record at `index` of the synthesis stream "
        "(standard preset unless spec_json overrides).");
}
