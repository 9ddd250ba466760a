#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "revorder/dataset.hpp"

using namespace revorder;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

DatasetSpec tiny_spec() {
  DatasetSpec spec;
  spec.seed = 42;
  spec.buckets = {
      {Op::Add, 1, 6, 1, 6, 60},
      {Op::Sub, 1, 6, 1, 6, 40},
      {Op::Mul, 1, 4, 1, 4, 40},
      {Op::Div, 2, 8, 1, 4, 60},
  };
  return spec;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("revorder-test-" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

}  // namespace

TEST_CASE("the standard preset fixes the training mix") {
  DatasetSpec spec = DatasetSpec::standard_preset(7);
  CHECK_EQ(spec.seed, 7);
  CHECK_EQ(spec.total(), 1700000);
  std::map<Op, std::uint64_t> per_op;
  std::size_t add_hi = 0, div_hi = 0, mul_wide = 0, mul_long = 0;
  for (const BucketSpec& b : spec.buckets) {
    per_op[b.op] += b.count;
    if (b.op == Op::Add) add_hi = std::max(add_hi, b.a_hi);
    if (b.op == Op::Div) div_hi = std::max(div_hi, b.a_hi);
    if (b.op == Op::Mul && b.b_hi > 1) mul_wide = std::max(mul_wide, b.a_hi);
    if (b.op == Op::Mul && b.b_hi == 1) mul_long = std::max(mul_long, b.a_hi);
  }
  CHECK_EQ(add_hi, 16);
  CHECK_EQ(div_hi, 16);
  CHECK_EQ(mul_wide, 8);
  CHECK_EQ(mul_long, 16);
  CHECK_EQ(per_op[Op::Div], 700000);
  // Division is the plurality class.
  for (auto [op, count] : per_op) {
    if (op != Op::Div) CHECK_LT(count, per_op[Op::Div]);
  }
}

TEST_CASE("records are a pure function of spec and index") {
  DatasetSpec spec = tiny_spec();
  for (std::uint64_t i : {0ULL, 59ULL, 60ULL, 140ULL, 199ULL}) {
    SampleRecord a = record_at(spec, i);
    SampleRecord b = record_at(spec, i);
    CHECK_EQ(a, b);
  }
  CHECK_NE(record_at(spec, 0).prompt + record_at(spec, 0).completion,
           record_at(spec, 1).prompt + record_at(spec, 1).completion);
  DatasetSpec reseeded = spec;
  reseeded.seed = 43;
  CHECK_NE(record_at(spec, 0), record_at(reseeded, 0));
  CHECK_THROWS_AS(record_at(spec, spec.total()), DomainError);
}

TEST_CASE("record fields describe the sampled equation") {
  DatasetSpec spec = tiny_spec();
  for (std::uint64_t i = 0; i < spec.total(); ++i) {
    SampleRecord r = record_at(spec, i);
    CHECK(r.prompt.ends_with("="));
    Trace t = parse(r.prompt + r.completion);
    CHECK(verify(t).valid);
    CHECK_EQ(t.equation.op, r.op);
    CHECK_EQ(t.equation.a.digit_count(), r.a_digits);
    CHECK_EQ(t.equation.b.digit_count(), r.b_digits);
    CHECK_EQ(r.rollback, r.completion.find('W') != std::string::npos);
    if (r.op == Op::Add || r.op == Op::Sub) {
      CHECK(r.carry_class.has_value());
    } else {
      CHECK_FALSE(r.carry_class.has_value());
    }
    if (r.op == Op::Div) CHECK_LE(r.b_digits, r.a_digits);
    // Bucket boundaries hold exactly.
    if (i < 60) CHECK_EQ(r.op, Op::Add);
    if (i >= 160) CHECK_EQ(r.op, Op::Div);
  }
}

TEST_CASE("jsonl lines keep a stable key order") {
  SampleRecord r = record_at(tiny_spec(), 0);
  std::string line = to_jsonl(r);
  CHECK(line.starts_with("{\"prompt\":"));
  CHECK_LT(line.find("\"prompt\""), line.find("\"completion\""));
  CHECK_LT(line.find("\"completion\""), line.find("\"op\""));
  auto parsed = nlohmann::json::parse(line);
  CHECK_EQ(parsed.at("prompt").get<std::string>(), r.prompt);
  CHECK_EQ(parsed.at("rollback").get<bool>(), r.rollback);
}

TEST_CASE("exclusions are honored and exhaustion is reported") {
  std::istringstream lines(" 12 * 7 \n3+4\n\n948 / 12\n");
  ExclusionList exclude = read_exclusions(lines);
  CHECK_EQ(exclude.count("12×7"), 1);
  CHECK_EQ(exclude.count("3+4"), 1);
  CHECK_EQ(exclude.count("948÷12"), 1);
  CHECK_EQ(exclude.size(), 3);

  DatasetSpec spec;
  spec.seed = 9;
  spec.buckets = {{Op::Add, 1, 1, 1, 1, 500}};
  ExclusionList all;
  for (int a = 1; a <= 9; ++a) {
    for (int b = 1; b <= 9; ++b) {
      all.insert(std::to_string(a) + "+" + std::to_string(b));
    }
  }
  ExclusionList some;
  some.insert("5+5");
  for (std::uint64_t i = 0; i < 500; ++i) {
    CHECK_NE(record_at(spec, i, some).prompt, "5+5=");
  }
  CHECK_THROWS_AS(record_at(spec, 0, all), SpecError);
}

TEST_CASE("an unsatisfiable divisor range is reported") {
  DatasetSpec spec;
  spec.seed = 1;
  spec.buckets = {{Op::Div, 1, 1, 2, 2, 1}};
  CHECK_THROWS_AS(record_at(spec, 0), SpecError);
}

TEST_CASE("rollback frequency tracks the configured probability") {
  DatasetSpec spec;
  spec.seed = 1234;
  spec.rollback_probability = 0.5;
  spec.buckets = {{Op::Div, 2, 16, 1, 8, 10000}};
  std::uint64_t rollbacks = 0;
  for (std::uint64_t i = 0; i < spec.total(); ++i) {
    SampleRecord r = record_at(spec, i);
    if (r.rollback) {
      ++rollbacks;
      Trace t = parse(r.prompt + r.completion);
      CHECK(verify(t).valid);
    }
  }
  double fraction = static_cast<double>(rollbacks) / 10000.0;
  CHECK_GE(fraction, 0.48);
  CHECK_LE(fraction, 0.52);
}

TEST_CASE("rollback probability zero and one are exact") {
  DatasetSpec spec;
  spec.seed = 5;
  spec.rollback_probability = 0.0;
  spec.buckets = {{Op::Div, 2, 8, 1, 4, 200}};
  for (std::uint64_t i = 0; i < spec.total(); ++i) {
    CHECK_FALSE(record_at(spec, i).rollback);
  }
  spec.rollback_probability = 1.0;
  for (std::uint64_t i = 0; i < spec.total(); ++i) {
    CHECK(record_at(spec, i).rollback);
  }
}

TEST_CASE("exact-division mode forces zero remainders") {
  DatasetSpec spec;
  spec.seed = 77;
  spec.div_exact_only = true;
  spec.buckets = {{Op::Div, 2, 10, 1, 5, 300}};
  for (std::uint64_t i = 0; i < spec.total(); ++i) {
    SampleRecord r = record_at(spec, i);
    Trace t = parse(r.prompt + r.completion);
    CHECK(verify(t).valid);
    CHECK(t.remainder->is_zero());
  }
}

TEST_CASE("spec json round-trips with the seed supplied separately") {
  DatasetSpec spec = tiny_spec();
  spec.form = Form::Verbose;
  spec.rollback_probability = 0.25;
  spec.div_exact_only = true;
  DatasetSpec back = dataset_spec_from_json(dataset_spec_to_json(spec));
  CHECK_EQ(back.seed, 0);
  back.seed = spec.seed;
  CHECK_EQ(back, spec);
}

TEST_CASE("spec json rejects malformed input") {
  CHECK_THROWS_AS(dataset_spec_from_json("not json"), SpecError);
  CHECK_THROWS_AS(dataset_spec_from_json("[1,2]"), SpecError);
  // Missing fields fall back to defaults.
  CHECK(dataset_spec_from_json("{}").buckets.empty());
  CHECK_THROWS_AS(dataset_spec_from_json(
                      R"({"form":"ornate","buckets":[]})"),
                  SpecError);
  CHECK_THROWS_AS(dataset_spec_from_json(
                      R"({"form":"compact","rollback_probability":1.5,"buckets":[]})"),
                  SpecError);
  CHECK_THROWS_AS(dataset_spec_from_json(
                      R"({"form":"compact","buckets":[{"op":"pow","a_digits":[1,2],"b_digits":[1,2],"count":5}]})"),
                  SpecError);
}

TEST_CASE("file synthesis is byte-stable across thread counts") {
  TempDir tmp;
  DatasetSpec spec = tiny_spec();
  fs::path serial = tmp.path / "serial.jsonl";
  fs::path threaded = tmp.path / "threaded.jsonl";

  SynthReport r1 = synth_to_file(spec, serial.string());
  SynthReport r2 = synth_to_file(spec, threaded.string(), {}, 4);
  CHECK_EQ(r1.records, spec.total());
  CHECK_EQ(r2.records, spec.total());
  CHECK_EQ(r1.rollbacks, r2.rollbacks);
  CHECK_EQ(r1.per_op, r2.per_op);

  std::string bytes = slurp(serial);
  CHECK_EQ(bytes, slurp(threaded));
  CHECK_EQ(static_cast<std::uint64_t>(std::count(bytes.begin(), bytes.end(), '\n')),
           spec.total());

  auto manifest = nlohmann::json::parse(slurp(serial.string() + ".manifest.json"));
  CHECK_EQ(manifest.at("records").get<std::uint64_t>(), spec.total());
  CHECK_EQ(manifest.at("seed").get<std::uint64_t>(), spec.seed);
  CHECK_EQ(manifest.at("buckets").size(), spec.buckets.size());
  CHECK_EQ(manifest.at("realized").at("per_op").at("add").get<std::uint64_t>(),
           r1.per_op.at("add"));

  std::istringstream stream(bytes);
  DistributionReport dist = distribution_report(stream);
  CHECK_EQ(dist.records, spec.total());
  CHECK_EQ(dist.per_op, r1.per_op);
  CHECK_EQ(dist.rollbacks, r1.rollbacks);
  CHECK_FALSE(dist.a_digits_histogram.empty());
  CHECK_FALSE(dist.carry_class_histogram.empty());
}

TEST_CASE("an empty plan produces an empty dataset") {
  TempDir tmp;
  DatasetSpec spec;
  spec.seed = 3;
  fs::path out = tmp.path / "empty.jsonl";
  SynthReport report = synth_to_file(spec, out.string());
  CHECK_EQ(report.records, 0);
  CHECK_EQ(slurp(out), "");
  auto manifest = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
  CHECK_EQ(manifest.at("records").get<std::uint64_t>(), 0);
}

TEST_CASE("synthesis reports unwritable paths") {
  DatasetSpec spec = tiny_spec();
  CHECK_THROWS_AS(synth_to_file(spec, "/nonexistent-dir/out.jsonl"), IoError);
}

TEST_CASE("distribution reports reject non-jsonl input") {
  std::istringstream in("{\"prompt\":\"1+1=\"}\nnot json\n");
  CHECK_THROWS_AS(distribution_report(in), SpecError);
}
