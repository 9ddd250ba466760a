#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "revorder/traces.hpp"

namespace revorder {

/// One homogeneous slice of a synthesis plan: `count` samples of `op` with
/// operand lengths drawn uniformly from the given digit ranges. For division
/// the right range is additionally clamped to the dividend's length so the
/// divisor never exceeds the dividend.
struct BucketSpec {
  Op op = Op::Add;
  std::size_t a_lo = 1, a_hi = 1;
  std::size_t b_lo = 1, b_hi = 1;
  std::uint64_t count = 0;

  bool operator==(const BucketSpec&) const = default;
};

/// Declarative synthesis plan. Records are a pure function of (spec, index),
/// so any index subrange can be produced independently and concatenated.
struct DatasetSpec {
  std::uint64_t seed = 0;
  Form form = Form::Compact;
  double rollback_probability = 0.5;   // per division sample
  double rollback_plus_fraction = 0.5; // +1 vs -1 misestimation
  bool div_exact_only = false;         // force zero remainders
  std::vector<BucketSpec> buckets;

  std::uint64_t total() const;

  /// The full-scale training mix: 1.7M records across additions and
  /// subtractions up to 16 digits, multiplications up to 8x8 digits plus a
  /// 16x1-digit slice, and a division plurality with dividends up to 16
  /// digits.
  static DatasetSpec standard_preset(std::uint64_t seed);

  bool operator==(const DatasetSpec&) const = default;
};

/// One emitted training example. `prompt` is the canonical equation up to and
/// including '='; `completion` is the rest of the serialized trace.
struct SampleRecord {
  std::string prompt;
  std::string completion;
  Op op = Op::Add;
  std::size_t a_digits = 0;
  std::size_t b_digits = 0;
  bool rollback = false;
  std::optional<std::size_t> carry_class;  // longest carry/borrow run, +/- only

  bool operator==(const SampleRecord&) const = default;
};

/// Canonical equations (no '=') that must never be emitted.
using ExclusionList = std::unordered_set<std::string>;

/// Reads one equation per line, normalizing each to its canonical text.
ExclusionList read_exclusions(std::istream& in);

/// Deterministically produces record `index` of the plan's stream. Throws
/// DomainError for an out-of-range index and SpecError if rejection sampling
/// cannot satisfy the bucket constraints or the exclusion list.
SampleRecord record_at(const DatasetSpec& spec, std::uint64_t index,
                       const ExclusionList& exclude = {});

std::string to_jsonl(const SampleRecord& record);

struct SynthReport {
  std::uint64_t records = 0;
  std::map<std::string, std::uint64_t> per_op;
  std::uint64_t rollbacks = 0;
};

/// Writes the whole stream as JSONL to `out_path` plus a sidecar manifest at
/// `out_path + ".manifest.json"` describing the plan and realized counts.
/// `jobs` > 1 synthesizes disjoint index windows in parallel; output bytes
/// are identical to the serial run.
SynthReport synth_to_file(const DatasetSpec& spec, const std::string& out_path,
                          const ExclusionList& exclude = {}, unsigned jobs = 1);

struct DistributionReport {
  std::uint64_t records = 0;
  std::map<std::string, std::uint64_t> per_op;
  std::uint64_t rollbacks = 0;
  std::map<std::size_t, std::uint64_t> carry_class_histogram;
  std::map<std::size_t, std::uint64_t> a_digits_histogram;
};

/// Tallies a JSONL dataset stream produced by synth_to_file.
DistributionReport distribution_report(std::istream& in);

/// Loads a synthesis plan from its JSON description (the same shape the
/// manifest embeds); the seed is supplied separately. Throws SpecError on
/// malformed or incomplete input.
DatasetSpec dataset_spec_from_json(std::string_view text);
std::string dataset_spec_to_json(const DatasetSpec& spec);

}  // namespace revorder
