#include "revorder/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <string>
#include <thread>
#include <utility>

#include "revorder/csid.hpp"
#include "revorder/rng.hpp"

#include "json.hpp"

namespace revorder {

namespace {

constexpr int kMaxAttempts = 1000;

DigitString sample_number(SplitMix64& rng, std::size_t digits) {
  std::vector<std::uint8_t> mags(digits);
  for (std::size_t i = 0; i + 1 < digits; ++i) {
    mags[i] = static_cast<std::uint8_t>(rng.below(10));
  }
  mags[digits - 1] = static_cast<std::uint8_t>(1 + rng.below(9));  // no leading zero
  return DigitString::from_digits(std::move(mags));
}

void validate_bucket(const BucketSpec& b) {
  if (b.a_lo < 1 || b.a_lo > b.a_hi || b.b_lo < 1 || b.b_lo > b.b_hi) {
    throw SpecError("bucket digit ranges must satisfy 1 <= lo <= hi");
  }
}

}  // namespace

std::uint64_t DatasetSpec::total() const {
  std::uint64_t n = 0;
  for (const BucketSpec& b : buckets) n += b.count;
  return n;
}

DatasetSpec DatasetSpec::standard_preset(std::uint64_t seed) {
  DatasetSpec spec;
  spec.seed = seed;
  spec.buckets = {
      {Op::Add, 1, 16, 1, 16, 300000},
      {Op::Sub, 1, 16, 1, 16, 300000},
      {Op::Mul, 1, 8, 1, 8, 340000},
      {Op::Mul, 16, 16, 1, 1, 60000},
      {Op::Div, 1, 16, 1, 16, 700000},
  };
  return spec;
}

ExclusionList read_exclusions(std::istream& in) {
  ExclusionList out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    out.insert(parse_equation(line).text());
  }
  return out;
}

SampleRecord record_at(const DatasetSpec& spec, std::uint64_t index,
                       const ExclusionList& exclude) {
  std::uint64_t off = index;
  const BucketSpec* bucket = nullptr;
  for (const BucketSpec& b : spec.buckets) {
    if (off < b.count) {
      bucket = &b;
      break;
    }
    off -= b.count;
  }
  if (!bucket) throw DomainError("record index beyond the plan's total");
  validate_bucket(*bucket);

  SplitMix64 rng(SplitMix64::mix(spec.seed ^ SplitMix64::mix(index + 0x9e3779b97f4a7c15ULL)));

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::size_t ad = static_cast<std::size_t>(rng.range(bucket->a_lo, bucket->a_hi));
    DigitString a = sample_number(rng, ad);

    std::size_t bd;
    if (bucket->op == Op::Div) {
      std::size_t hi = std::min<std::size_t>(bucket->b_hi, ad);
      if (bucket->b_lo > hi) continue;  // dividend too short for this divisor range
      bd = static_cast<std::size_t>(rng.range(bucket->b_lo, hi));
    } else {
      bd = static_cast<std::size_t>(rng.range(bucket->b_lo, bucket->b_hi));
    }
    DigitString b = sample_number(rng, bd);

    SampleRecord rec;
    rec.op = bucket->op;
    Trace trace;

    switch (bucket->op) {
      case Op::Add:
        trace = gen_add_trace(a, b);
        rec.carry_class = classify_carry_chain(a, b);
        break;
      case Op::Sub:
        trace = gen_sub_trace(a, b);
        rec.carry_class = sub_with_borrows(a, b).borrows.longest_run();
        break;
      case Op::Mul:
        trace = gen_mul_trace(a, b);
        break;
      case Op::Div: {
        if (bd == ad && DigitString::compare_magnitude(b, a) > 0) continue;
        if (spec.div_exact_only) {
          DigitString rem = *gen_div_trace(a, b).remainder;
          if (!rem.is_zero()) {
            DigitString exact = sub_with_borrows(a, rem).difference;
            if (exact.digit_count() != ad || exact.is_zero() ||
                DigitString::compare_magnitude(b, exact) > 0) {
              continue;
            }
            a = std::move(exact);
          }
        }
        Trace base = gen_div_trace(a, b);
        RollbackPlan plan;
        if (rng.bernoulli(spec.rollback_probability)) {
          std::size_t at = static_cast<std::size_t>(rng.below(base.steps.size()));
          int delta = rng.bernoulli(spec.rollback_plus_fraction) ? 1 : -1;
          int digit = std::get<DivIterationStep>(base.steps[at]).quotient_digit;
          if (digit + delta < 0 || digit + delta > 9) delta = -delta;
          plan.deltas[at] = delta;
          rec.rollback = true;
        }
        trace = plan.empty() ? std::move(base) : gen_div_trace(a, b, plan);
        break;
      }
    }

    if (exclude.contains(trace.equation.text())) continue;

    rec.a_digits = a.digit_count();
    rec.b_digits = b.digit_count();
    rec.prompt = trace.equation.text() + "=";
    std::string serialized = serialize(trace, spec.form);
    rec.completion = serialized.substr(rec.prompt.size());
    return rec;
  }
  throw SpecError("rejection sampling exhausted; bucket constraints or the "
                  "exclusion list are too tight");
}

std::string to_jsonl(const SampleRecord& record) {
  nlohmann::ordered_json j;
  j["prompt"] = record.prompt;
  j["completion"] = record.completion;
  j["op"] = std::string(op_name(record.op));
  j["a_digits"] = record.a_digits;
  j["b_digits"] = record.b_digits;
  j["rollback"] = record.rollback;
  if (record.carry_class) j["carry_class"] = *record.carry_class;
  return j.dump();
}

namespace {

struct Window {
  std::string bytes;
  SynthReport report;
};

void synth_window(const DatasetSpec& spec, const ExclusionList& exclude,
                  std::uint64_t begin, std::uint64_t end, Window& out) {
  for (std::uint64_t i = begin; i < end; ++i) {
    SampleRecord rec = record_at(spec, i, exclude);
    out.bytes += to_jsonl(rec);
    out.bytes += '\n';
    ++out.report.records;
    ++out.report.per_op[std::string(op_name(rec.op))];
    if (rec.rollback) ++out.report.rollbacks;
  }
}

nlohmann::ordered_json spec_to_json_obj(const DatasetSpec& spec) {
  nlohmann::ordered_json j;
  j["form"] = spec.form == Form::Compact ? "compact" : "verbose";
  j["rollback_probability"] = spec.rollback_probability;
  j["rollback_plus_fraction"] = spec.rollback_plus_fraction;
  j["div_exact_only"] = spec.div_exact_only;
  j["buckets"] = nlohmann::ordered_json::array();
  for (const BucketSpec& b : spec.buckets) {
    nlohmann::ordered_json jb;
    jb["op"] = std::string(op_name(b.op));
    jb["a_digits"] = {b.a_lo, b.a_hi};
    jb["b_digits"] = {b.b_lo, b.b_hi};
    jb["count"] = b.count;
    j["buckets"].push_back(std::move(jb));
  }
  return j;
}

}  // namespace

SynthReport synth_to_file(const DatasetSpec& spec, const std::string& out_path,
                          const ExclusionList& exclude, unsigned jobs) {
  for (const BucketSpec& b : spec.buckets) validate_bucket(b);
  std::uint64_t total = spec.total();
  if (jobs < 1) jobs = 1;
  std::uint64_t windows_n = std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(total, 1));

  std::vector<Window> windows(windows_n);
  if (windows_n <= 1) {
    synth_window(spec, exclude, 0, total, windows[0]);
  } else {
    std::vector<std::thread> threads;
    std::uint64_t chunk = (total + windows_n - 1) / windows_n;
    for (std::uint64_t w = 0; w < windows_n; ++w) {
      std::uint64_t begin = w * chunk;
      std::uint64_t end = std::min(total, begin + chunk);
      threads.emplace_back(synth_window, std::cref(spec), std::cref(exclude), begin,
                           end, std::ref(windows[w]));
    }
    for (std::thread& t : threads) t.join();
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  SynthReport report;
  for (Window& w : windows) {
    out << w.bytes;
    report.records += w.report.records;
    report.rollbacks += w.report.rollbacks;
    for (const auto& [op, n] : w.report.per_op) report.per_op[op] += n;
  }
  out.flush();
  if (!out) throw IoError("failed writing " + out_path);

  nlohmann::ordered_json manifest;
  manifest["records"] = report.records;
  manifest["seed"] = spec.seed;
  manifest.update(spec_to_json_obj(spec));
  manifest["realized"]["per_op"] = report.per_op;
  manifest["realized"]["rollbacks"] = report.rollbacks;
  std::string manifest_path = out_path + ".manifest.json";
  std::ofstream mout(manifest_path, std::ios::binary);
  if (!mout) throw IoError("cannot open " + manifest_path + " for writing");
  mout << manifest.dump(2) << '\n';
  if (!mout.flush()) throw IoError("failed writing " + manifest_path);
  return report;
}

DistributionReport distribution_report(std::istream& in) {
  DistributionReport report;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw SpecError("dataset line " + std::to_string(line_no) + " is not a JSON object");
    }
    ++report.records;
    if (j.contains("op")) ++report.per_op[j["op"].get<std::string>()];
    if (j.value("rollback", false)) ++report.rollbacks;
    if (j.contains("carry_class")) {
      ++report.carry_class_histogram[j["carry_class"].get<std::size_t>()];
    }
    if (j.contains("a_digits")) {
      ++report.a_digits_histogram[j["a_digits"].get<std::size_t>()];
    }
  }
  return report;
}

DatasetSpec dataset_spec_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw SpecError("dataset spec is not a JSON object");
  }
  DatasetSpec spec;
  try {
    std::string form = j.value("form", "compact");
    if (form == "compact") {
      spec.form = Form::Compact;
    } else if (form == "verbose") {
      spec.form = Form::Verbose;
    } else {
      throw SpecError("form must be \"compact\" or \"verbose\"");
    }
    spec.rollback_probability = j.value("rollback_probability", 0.5);
    spec.rollback_plus_fraction = j.value("rollback_plus_fraction", 0.5);
    spec.div_exact_only = j.value("div_exact_only", false);
    if (spec.rollback_probability < 0 || spec.rollback_probability > 1 ||
        spec.rollback_plus_fraction < 0 || spec.rollback_plus_fraction > 1) {
      throw SpecError("probabilities must lie in [0, 1]");
    }
    for (const auto& jb : j.value("buckets", nlohmann::json::array())) {
      BucketSpec b;
      auto op = op_from_name(jb.at("op").get<std::string>());
      if (!op) throw SpecError("bucket op must be add, sub, mul, or div");
      b.op = *op;
      b.a_lo = jb.at("a_digits").at(0).get<std::size_t>();
      b.a_hi = jb.at("a_digits").at(1).get<std::size_t>();
      b.b_lo = jb.at("b_digits").at(0).get<std::size_t>();
      b.b_hi = jb.at("b_digits").at(1).get<std::size_t>();
      b.count = jb.at("count").get<std::uint64_t>();
      validate_bucket(b);
      spec.buckets.push_back(b);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed dataset spec: ") + e.what());
  }
  return spec;
}

std::string dataset_spec_to_json(const DatasetSpec& spec) {
  return spec_to_json_obj(spec).dump(2);
}

}  // namespace revorder
