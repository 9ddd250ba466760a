#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "revorder/csid.hpp"
#include "revorder/dataset.hpp"
#include "revorder/score.hpp"
#include "revorder/tokens.hpp"
#include "revorder/traces.hpp"

namespace {

using namespace revorder;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kBadInput = 2;
constexpr int kInvalidTrace = 3;
constexpr int kIoTrouble = 4;
constexpr int kDomain = 5;

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 1 usage, 2 malformed input, 3 verification "
    "failure, 4 I/O trouble, 5 domain error.";

Form parse_form(const std::string& name) {
  if (name == "compact") return Form::Compact;
  if (name == "verbose") return Form::Verbose;
  throw CLI::ValidationError("--form", "must be 'compact' or 'verbose'");
}

/// Lines of a file argument, with "-" meaning stdin. Empty lines skipped.
std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  auto drain = [&lines](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
  };
  if (path == "-") {
    drain(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    drain(in);
  }
  return lines;
}

std::unique_ptr<std::ifstream> open_input(const std::string& path) {
  auto in = std::make_unique<std::ifstream>(path);
  if (!*in) throw IoError("cannot open " + path);
  return in;
}

struct GenArgs {
  std::vector<std::string> equations;
  std::string form = "compact";
  bool rollback = false;
  std::size_t rollback_at = 0;
  int rollback_delta = 1;
};

int run_gen(const GenArgs& args) {
  std::vector<std::string> inputs = args.equations;
  if (inputs.empty() || (inputs.size() == 1 && inputs[0] == "-")) {
    inputs = read_lines("-");
  }
  Form form = parse_form(args.form);
  for (const std::string& text : inputs) {
    Equation eq = parse_equation(text);
    if (args.rollback && eq.op != Op::Div) {
      throw DomainError("--rollback applies to division only");
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
        if (args.rollback) plan.deltas[args.rollback_at] = args.rollback_delta;
        trace = gen_div_trace(eq.a, eq.b, plan);
        break;
      }
    }
    std::cout << serialize(trace, form) << '\n';
  }
  return kOk;
}

int run_verify(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  std::size_t valid = 0;
  bool parse_trouble = false;
  bool verify_trouble = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      VerifyResult r = verify(parse(lines[i]));
      if (r.valid) {
        ++valid;
        std::cout << "line " << (i + 1) << ": valid\n";
      } else {
        verify_trouble = true;
        std::cout << "line " << (i + 1) << ": invalid: " << r.message << " (step "
                  << r.step_index;
        if (!r.expected.empty() || !r.found.empty()) {
          std::cout << ", expected " << r.expected << ", found " << r.found;
        }
        std::cout << ")\n";
      }
    } catch (const ParseError& e) {
      parse_trouble = true;
      std::cout << "line " << (i + 1) << ": parse error: " << e.what() << '\n';
    }
  }
  std::cout << "valid " << valid << "/" << lines.size() << '\n';
  if (parse_trouble) return kBadInput;
  return verify_trouble ? kInvalidTrace : kOk;
}

struct CsidArgs {
  std::string equation;
  std::string worstcase_op;
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  bool carry_chain = false;
};

int run_csid(const CsidArgs& args) {
  if (!args.worstcase_op.empty()) {
    WorstCaseOp op;
    if (args.worstcase_op == "add") {
      op = WorstCaseOp::Add;
    } else if (args.worstcase_op == "sub") {
      op = WorstCaseOp::Sub;
    } else if (args.worstcase_op == "mul_direct") {
      op = WorstCaseOp::MulDirect;
    } else if (args.worstcase_op == "mul_decomposed") {
      op = WorstCaseOp::MulDecomposed;
    } else if (args.worstcase_op == "div_direct") {
      op = WorstCaseOp::DivDirect;
    } else if (args.worstcase_op == "div_decomposed") {
      op = WorstCaseOp::DivDecomposed;
    } else {
      throw CLI::ValidationError("--worstcase",
                                 "must be add, sub, mul_direct, mul_decomposed, "
                                 "div_direct, or div_decomposed");
    }
    std::cout << csid_worstcase(op, args.n, args.m).to_string() << '\n';
    return kOk;
  }

  Equation eq = parse_equation(args.equation);
  if (args.carry_chain) {
    std::cout << classify_carry_chain(eq.a, eq.b) << '\n';
    return kOk;
  }
  if (eq.op == Op::Mul || eq.op == Op::Div) {
    throw DomainError("per-equation scoring covers addition and subtraction");
  }
  DigitString b = eq.op == Op::Sub ? eq.b.negated() : eq.b;
  CsidReport plain = csid_add_sub(eq.a, b, FormatPolicy::Plain);
  CsidReport rev = csid_add_sub(eq.a, b, FormatPolicy::RevOrder);
  std::cout << "plain=" << plain.max_csid << " revorder=" << rev.max_csid << '\n';
  return kOk;
}

struct SynthArgs {
  std::string preset;
  std::string spec_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string exclude_path;
  unsigned jobs = 1;
};

int run_synth(const SynthArgs& args) {
  DatasetSpec spec;
  if (!args.preset.empty()) {
    if (args.preset != "standard") {
      throw CLI::ValidationError("--preset", "the only built-in preset is 'standard'");
    }
    spec = DatasetSpec::standard_preset(args.seed);
  } else {
    std::ostringstream buf;
    buf << open_input(args.spec_path)->rdbuf();
    spec = dataset_spec_from_json(buf.str());
    spec.seed = args.seed;
  }

  ExclusionList exclude;
  if (!args.exclude_path.empty()) {
    exclude = read_exclusions(*open_input(args.exclude_path));
  }

  SynthReport report = synth_to_file(spec, args.out, exclude, args.jobs);
  std::cout << "wrote " << report.records << " records to " << args.out
            << " (manifest " << args.out << ".manifest.json)\n";
  std::cout << "per_op:";
  for (const auto& [op, n] : report.per_op) std::cout << ' ' << op << '=' << n;
  std::cout << " rollbacks=" << report.rollbacks << '\n';
  return kOk;
}

struct StatsArgs {
  std::string op;
  std::size_t min_size = 1;
  std::size_t max_size = 16;
  std::string form = "compact";
  std::string dataset_path;
};

int run_stats(const StatsArgs& args) {
  if (!args.dataset_path.empty()) {
    DistributionReport r = distribution_report(*open_input(args.dataset_path));
    std::cout << "records=" << r.records << " rollbacks=" << r.rollbacks << '\n';
    std::cout << "per_op:";
    for (const auto& [op, n] : r.per_op) std::cout << ' ' << op << '=' << n;
    std::cout << '\n';
    if (!r.carry_class_histogram.empty()) {
      std::cout << "carry_class:";
      for (const auto& [k, n] : r.carry_class_histogram) std::cout << ' ' << k << '=' << n;
      std::cout << '\n';
    }
    std::cout << "a_digits:";
    for (const auto& [k, n] : r.a_digits_histogram) std::cout << ' ' << k << '=' << n;
    std::cout << '\n';
    return kOk;
  }

  auto op = op_from_name(args.op);
  if (!op) throw CLI::ValidationError("--op", "must be add, sub, mul, or div");
  if (args.min_size < 1 || args.min_size > args.max_size) {
    throw CLI::ValidationError("--min-size/--max-size", "need 1 <= min <= max");
  }
  Form form = parse_form(args.form);

  std::cout << "digits\ttotal\tbare\textra\n";
  for (std::size_t n = args.min_size; n <= args.max_size; ++n) {
    DigitString a = DigitString::from_decimal(std::string(n, '9'));
    Trace trace;
    switch (*op) {
      case Op::Add:
        trace = gen_add_trace(a, a);
        break;
      case Op::Sub:
        trace = gen_sub_trace(a, DigitString::from_decimal(std::string(n, '1')));
        break;
      case Op::Mul:
        trace = gen_mul_trace(a, a);
        break;
      case Op::Div:
        trace = gen_div_trace(a, DigitString::from_decimal(std::string((n + 1) / 2, '9')));
        break;
    }
    TokenCost cost = token_cost(trace, form);
    std::cout << n << '\t' << cost.total << '\t' << cost.bare << '\t' << cost.extra()
              << '\n';
  }
  return kOk;
}

struct ScoreArgs {
  std::string pred_path;
  std::string ref_path;
  bool decode = false;
};

int run_score(const ScoreArgs& args) {
  auto pred = open_input(args.pred_path);
  auto ref = open_input(args.ref_path);
  ScoreReport r = score_lines(*pred, *ref, args.decode);
  char precision[32];
  std::snprintf(precision, sizeof precision, "%.4f", r.precision());
  std::cout << "total=" << r.total << " exact=" << r.exact_matches
            << " precision=" << precision << '\n';
  for (const ScoreMismatch& m : r.first_mismatches) {
    std::cout << "line " << m.line << ": expected " << m.expected << ", found "
              << m.found << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RevOrder arithmetic trace toolkit: generate, verify, and score "
               "reversed-digit arithmetic traces, measure per-digit carry "
               "difficulty, and synthesize training datasets."};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate traces for equations (args or stdin), one per line");
  gen->add_option("equations", gen_args.equations, "Equations like 948÷12 ('-' = stdin)");
  gen->add_option("--form", gen_args.form, "compact|verbose")->capture_default_str();
  gen->add_flag("--rollback", gen_args.rollback,
                "Inject one rolled-back quotient misestimation (division only)");
  gen->add_option("--rollback-at", gen_args.rollback_at,
                  "Iteration index of the misestimation")
      ->capture_default_str();
  gen->add_option("--rollback-delta", gen_args.rollback_delta,
                  "Misestimation direction: 1 or -1")
      ->capture_default_str();

  std::string verify_path = "-";
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Check traces (one per line) step by step");
  verify_cmd->add_option("file", verify_path, "Trace file ('-' = stdin)")
      ->capture_default_str();

  CsidArgs csid_args;
  CLI::App* csid_cmd = app.add_subcommand(
      "csid", "Carry-difficulty scores for an equation, or worst-case formulas");
  csid_cmd->add_option("equation", csid_args.equation, "Equation like 123+179");
  csid_cmd->add_option("--worstcase", csid_args.worstcase_op,
                       "add|sub|mul_direct|mul_decomposed|div_direct|div_decomposed");
  csid_cmd->add_option("--n", csid_args.n, "Operand length in digits");
  csid_cmd->add_option("--m", csid_args.m, "Divisor length in digits")
      ->capture_default_str();
  csid_cmd->add_flag("--carry-chain", csid_args.carry_chain,
                     "Print the longest carry run of the equation instead");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Synthesize a JSONL training dataset");
  CLI::Option* preset_opt =
      synth->add_option("--preset", synth_args.preset, "Built-in plan: standard (1.7M records)");
  CLI::Option* spec_opt =
      synth->add_option("--spec", synth_args.spec_path, "JSON synthesis plan file");
  preset_opt->excludes(spec_opt);
  synth->add_option("--seed", synth_args.seed, "Base RNG seed")->required();
  synth->add_option("--out", synth_args.out, "Output JSONL path")->required();
  synth->add_option("--exclude", synth_args.exclude_path,
                    "File of equations (one per line) that must not be emitted");
  synth->add_option("--jobs", synth_args.jobs, "Parallel synthesis workers")
      ->capture_default_str();

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand(
      "stats", "Token-cost tables per operand size, or dataset distribution");
  stats->add_option("--op", stats_args.op, "add|sub|mul|div (size-curve mode)");
  stats->add_option("--min-size", stats_args.min_size, "Smallest operand length")
      ->capture_default_str();
  stats->add_option("--max-size", stats_args.max_size, "Largest operand length")
      ->capture_default_str();
  stats->add_option("--form", stats_args.form, "compact|verbose")->capture_default_str();
  stats->add_option("--dataset", stats_args.dataset_path,
                    "Tally a synthesized JSONL file instead");

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand(
      "score", "Exact-match predictions against references, line by line");
  score->add_option("--pred", score_args.pred_path, "Predictions file")->required();
  score->add_option("--ref", score_args.ref_path, "References file")->required();
  score->add_flag("--decode", score_args.decode,
                  "Reduce traces and r| literals to forward values first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return run_gen(gen_args);
    if (*verify_cmd) return run_verify(verify_path);
    if (*csid_cmd) return run_csid(csid_args);
    if (*synth) {
      if (synth_args.preset.empty() && synth_args.spec_path.empty()) {
        std::cerr << "synth: need --preset or --spec\n";
        return kUsage;
      }
      return run_synth(synth_args);
    }
    if (*stats) {
      if (stats_args.op.empty() && stats_args.dataset_path.empty()) {
        std::cerr << "stats: need --op or --dataset\n";
        return kUsage;
      }
      return run_stats(stats_args);
    }
    if (*score) return run_score(score_args);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoTrouble;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}
