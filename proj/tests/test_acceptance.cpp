// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. argv[1] is the path to the command-line binary.
#include <unistd.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "revorder/csid.hpp"
#include "revorder/dataset.hpp"
#include "revorder/rng.hpp"
#include "revorder/tokens.hpp"
#include "revorder/traces.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace revorder;
using boost::multiprecision::cpp_int;
using testsupport::run_command;
using testsupport::shell_quote;

namespace {

int failed = 0;
std::string cli;

void report(int criterion, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << ' ' << criterion << ": " << what << std::endl;
  if (!ok) ++failed;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

cpp_int big(const DigitString& x) { return cpp_int(x.to_decimal()); }

DigitString random_digits(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  std::size_t n = lo + rng.below(hi - lo + 1);
  std::vector<std::uint8_t> mags(n);
  for (std::size_t i = 0; i + 1 < n; ++i) mags[i] = static_cast<std::uint8_t>(rng.below(10));
  mags[n - 1] = static_cast<std::uint8_t>(1 + rng.below(9));
  return DigitString::from_digits(std::move(mags));
}

std::string gen_via_cli(const std::string& flags, const std::string& equation) {
  auto r = run_command(cli + " gen " + flags + (flags.empty() ? "" : " ") +
                       shell_quote(equation) + " 2>/dev/null");
  if (r.exit_code != 0) return "<exit " + std::to_string(r.exit_code) + ">";
  std::string out = r.output;
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;

  ok &= gen_via_cli("", "123+46") == "123+46=r|961";
  ok &= gen_via_cli("", "12×4567") ==
        "12×4567=12×4000+12×500+12×60+12×7"
        "=r|00084+r|0006+r|027+r|48=r|00045+r|408=r|40845=54804";
  ok &= gen_via_cli("", "948÷12") ==
        "948÷12=7R-(12×70)(r|048)(r|801)#9R-(12×9)(r|801)(0)=79";
  std::string rollback = gen_via_cli("--rollback", "948÷12");
  ok &= rollback ==
        "948÷12=8R-(12×80)(r|069)(-r|21)W#7R-(12×70)(r|048)(r|801)"
        "#9R-(12×9)(r|801)(0)=79";
  ok &= rollback.find("-r|21") != std::string::npos;
  ok &= rollback.find("W#7R") != std::string::npos;

  double elapsed = seconds_since(start);
  ok &= elapsed < 1.0;
  std::ostringstream what;
  what << "golden traces through the command line, char for char ("
       << elapsed << "s)";
  report(1, ok, what.str());
}

void criterion_2() {
  bool ok = true;
  ok &= csid_add_sub(DigitString::from_decimal("123"), DigitString::from_decimal("179"),
                     FormatPolicy::Plain)
            .max_csid == 2;
  ok &= csid_add_sub(DigitString::from_decimal("123"), DigitString::from_decimal("179"),
                     FormatPolicy::RevOrder)
            .max_csid == 1;
  for (std::uint64_t n = 1; n <= 20 && ok; ++n) {
    WorstCase mul = csid_worstcase(WorstCaseOp::MulDirect, n);
    ok &= mul.kind == WorstCase::Kind::Exact && mul.value == 6 * n * n + n;
    for (std::uint64_t m = 1; m <= n && ok; ++m) {
      WorstCase div = csid_worstcase(WorstCaseOp::DivDirect, n, m);
      ok &= div.kind == WorstCase::Kind::Exact && div.value == 2 * n * n - 2 * m * m;
    }
  }
  report(2, ok, "per-digit difficulty scores and closed-form worst cases");
}

void criterion_3() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(0xACCE97);
  std::size_t checked = 0, failures = 0;

  auto check = [&](const Trace& t, const cpp_int& want) {
    ++checked;
    if (!verify(t).valid || big(t.final) != want) ++failures;
  };

  for (int i = 0; i < 25000; ++i) {
    DigitString a = random_digits(rng, 1, 16);
    DigitString b = random_digits(rng, 1, 16);
    if (rng.bernoulli(0.25)) a = a.negated();
    if (rng.bernoulli(0.25)) b = b.negated();
    check(gen_add_trace(a, b), big(a) + big(b));
  }
  for (int i = 0; i < 25000; ++i) {
    DigitString a = random_digits(rng, 1, 16);
    DigitString b = random_digits(rng, 1, 16);
    if (rng.bernoulli(0.25)) a = a.negated();
    if (rng.bernoulli(0.25)) b = b.negated();
    check(gen_sub_trace(a, b), big(a) - big(b));
  }
  for (int i = 0; i < 20000; ++i) {
    DigitString a = random_digits(rng, 1, 8);
    DigitString b = random_digits(rng, 1, 8);
    check(gen_mul_trace(a, b), big(a) * big(b));
  }
  for (int i = 0; i < 5000; ++i) {
    DigitString a = random_digits(rng, 16, 16);
    DigitString b = random_digits(rng, 1, 1);
    check(gen_mul_trace(a, b), big(a) * big(b));
  }
  for (int i = 0; i < 25000; ++i) {
    DigitString a = random_digits(rng, 1, 16);
    DigitString b = random_digits(rng, 1, a.digit_count());
    if (DigitString::compare_magnitude(b, a) > 0) b = a;
    Trace t = gen_div_trace(a, b);
    ++checked;
    if (!verify(t).valid || big(t.final) != big(a) / big(b) ||
        big(*t.remainder) != big(a) % big(b)) {
      ++failures;
    }
  }

  double elapsed = seconds_since(start);
  bool ok = failures == 0 && checked == 100000 && elapsed < 120.0;
  std::ostringstream what;
  what << checked << " random traces against an independent big-integer oracle ("
       << failures << " failures, " << elapsed << "s)";
  report(3, ok, what.str());
}

void criterion_4() {
  SplitMix64 rng(0x7071);
  std::size_t failures = 0;
  for (int i = 0; i < 10000; ++i) {
    Trace t;
    switch (rng.below(4)) {
      case 0: {
        DigitString a = random_digits(rng, 1, 16);
        DigitString b = random_digits(rng, 1, 16);
        if (rng.bernoulli(0.3)) a = a.negated();
        if (rng.bernoulli(0.3)) b = b.negated();
        t = gen_add_trace(a, b);
        break;
      }
      case 1: {
        DigitString a = random_digits(rng, 1, 16);
        DigitString b = random_digits(rng, 1, 16);
        if (rng.bernoulli(0.3)) a = a.negated();
        if (rng.bernoulli(0.3)) b = b.negated();
        t = gen_sub_trace(a, b);
        break;
      }
      case 2:
        t = gen_mul_trace(random_digits(rng, 1, 8), random_digits(rng, 1, 8));
        break;
      default: {
        DigitString a = random_digits(rng, 2, 14);
        DigitString b = random_digits(rng, 1, a.digit_count() - 1);
        RollbackPlan plan;
        if (rng.bernoulli(0.4)) {
          Trace base = gen_div_trace(a, b);
          std::size_t at = rng.below(base.steps.size());
          int digit = std::get<DivIterationStep>(base.steps[at]).quotient_digit;
          int delta = rng.bernoulli(0.5) ? 1 : -1;
          if (digit + delta < 0 || digit + delta > 9) delta = -delta;
          plan.deltas[at] = delta;
        }
        t = gen_div_trace(a, b, plan);
        break;
      }
    }
    for (Form f : {Form::Compact, Form::Verbose}) {
      if (parse(serialize(t, f)) != t) ++failures;
    }
  }
  std::ostringstream what;
  what << "10000 traces re-parse to themselves in both forms (" << failures
       << " failures)";
  report(4, failures == 0, what.str());
}

void criterion_5() {
  DatasetSpec spec;
  spec.seed = 0xD1CE;
  spec.rollback_probability = 0.5;
  spec.buckets = {{Op::Div, 2, 16, 1, 8, 10000}};

  std::size_t rollbacks = 0, failures = 0;
  for (std::uint64_t i = 0; i < spec.total(); ++i) {
    SampleRecord r = record_at(spec, i);
    if (!r.rollback) continue;
    ++rollbacks;
    Trace t = parse(r.prompt + r.completion);
    cpp_int a = big(t.equation.a), b = big(t.equation.b);
    if (!verify(t).valid || big(t.final) != a / b) ++failures;
  }
  double fraction = static_cast<double>(rollbacks) / 10000.0;
  bool ok = failures == 0 && fraction >= 0.48 && fraction <= 0.52;
  std::ostringstream what;
  what << "rollback injection at the requested rate (observed " << fraction << ", "
       << failures << " invalid rollback traces)";
  report(5, ok, what.str());
}

std::size_t codepoints(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

void criterion_6() {
  SplitMix64 rng(0x70C0);
  bool ok = true;

  for (std::size_t n = 1; n <= 16 && ok; ++n) {
    DigitString nines = DigitString::from_decimal(std::string(n, '9'));
    ok &= token_cost(gen_add_trace(nines, nines), Form::Compact).extra() == 1;
    for (int i = 0; i < 50 && ok; ++i) {
      DigitString a = random_digits(rng, n, n);
      DigitString b = random_digits(rng, 1, n);
      if (rng.bernoulli(0.3)) a = a.negated();
      if (rng.bernoulli(0.3)) b = b.negated();
      ok &= token_cost(gen_add_trace(a, b), Form::Compact).extra() == 1;
      ok &= token_cost(gen_sub_trace(a, b), Form::Compact).extra() == 1;
    }
  }

  double worst_ratio = 0.0;
  for (int i = 0; i < 300 && ok; ++i) {
    DigitString a = random_digits(rng, 6, 16);
    DigitString b = random_digits(rng, 1, a.digit_count() / 2);
    Trace t = gen_div_trace(a, b);
    double ratio = static_cast<double>(codepoints(serialize(t, Form::Compact))) /
                   static_cast<double>(codepoints(serialize(t, Form::Verbose)));
    worst_ratio = std::max(worst_ratio, ratio);
    ok &= ratio <= 0.7;
  }

  std::ostringstream what;
  what << "one extra token for reversed add/sub, compact division at most 0.7x "
       << "verbose size (worst " << worst_ratio << ")";
  report(6, ok, what.str());
}

void criterion_7() {
  fs::path tmp = fs::temp_directory_path() / ("revorder-accept-" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  fs::path spec = tmp / "plan.json";
  {
    std::ofstream out(spec);
    out << R"({
      "form": "compact",
      "rollback_probability": 0.5,
      "buckets": [
        {"op": "add", "a_digits": [1, 12], "b_digits": [1, 12], "count": 400},
        {"op": "mul", "a_digits": [1, 6], "b_digits": [1, 6], "count": 300},
        {"op": "div", "a_digits": [2, 12], "b_digits": [1, 6], "count": 500}
      ]
    })";
  }

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  auto synth = [&](const fs::path& out, const std::string& extra) {
    return run_command(cli + " synth --spec " + shell_quote(spec.string()) +
                       " --seed 2024 --out " + shell_quote(out.string()) + extra +
                       " 2>/dev/null")
        .exit_code;
  };

  bool ok = true;
  ok &= synth(tmp / "one.jsonl", "") == 0;
  ok &= synth(tmp / "two.jsonl", "") == 0;
  ok &= synth(tmp / "par.jsonl", " --jobs 4") == 0;
  std::string bytes = slurp(tmp / "one.jsonl");
  ok &= !bytes.empty();
  ok &= bytes == slurp(tmp / "two.jsonl");
  ok &= bytes == slurp(tmp / "par.jsonl");

  std::error_code ec;
  fs::remove_all(tmp, ec);
  report(7, ok, "dataset synthesis is byte-identical across reruns and thread counts");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_acceptance <path-to-cli-binary>\n";
    return 2;
  }
  cli = shell_quote(argv[1]);

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();

  return failed == 0 ? 0 : 1;
}
