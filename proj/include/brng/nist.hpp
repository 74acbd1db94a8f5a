#pragma once

// The fifteen SP 800-22 statistical tests and a suite runner with
// worst-P aggregation. Bits are passed as one 0/1 byte per bit.

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace brng {

enum class NistTest {
  kFrequency,
  kBlockFrequency,
  kCumulativeSums,
  kRuns,
  kLongestRun,
  kRank,
  kDft,
  kNonOverlappingTemplate,
  kOverlappingTemplate,
  kUniversal,
  kApproximateEntropy,
  kRandomExcursions,
  kRandomExcursionsVariant,
  kSerial,
  kLinearComplexity,
};

inline constexpr std::array<NistTest, 15> kAllNistTests = {
    NistTest::kFrequency,           NistTest::kBlockFrequency,
    NistTest::kCumulativeSums,      NistTest::kRuns,
    NistTest::kLongestRun,          NistTest::kRank,
    NistTest::kDft,                 NistTest::kNonOverlappingTemplate,
    NistTest::kOverlappingTemplate, NistTest::kUniversal,
    NistTest::kApproximateEntropy,  NistTest::kRandomExcursions,
    NistTest::kRandomExcursionsVariant, NistTest::kSerial,
    NistTest::kLinearComplexity};

/// snake_case identifier, e.g. "block_frequency".
std::string test_id(NistTest t);
/// Label used in the text table, e.g. "BlockFrequency".
std::string display_name(NistTest t);
NistTest nist_test_from_string(const std::string& s);

/// Unset fields take the defaults for the input length.
struct TestParams {
  std::size_t block_frequency_m = 128;
  /// Non-overlapping template; default 000000001.
  std::vector<std::uint8_t> template_bits = {0, 0, 0, 0, 0, 0, 0, 0, 1};
  /// Run every aperiodic template of length template_length instead.
  bool all_templates = false;
  std::size_t template_length = 9;
  std::size_t template_blocks = 8;
  std::size_t overlapping_m = 9;
  std::size_t overlapping_block = 1032;
  std::optional<int> universal_L;
  std::optional<int> approximate_entropy_m;  ///< default min(10, floor(log2 n) - 6)
  std::optional<int> serial_m;               ///< default min(16, floor(log2 n) - 3)
  std::size_t linear_complexity_m = 1000;
};

struct SubResult {
  std::string label;
  double p_value = 0.0;
};

struct TestResult {
  NistTest test = NistTest::kFrequency;
  std::vector<double> p_values;
  double worst_p = 0.0;
  bool passed = false;
  std::size_t n_bits_used = 0;
  std::vector<SubResult> sub_results;
  nlohmann::json parameters;  ///< resolved test parameters and statistics
};

/// Throws MinLength when the input is shorter than the test's minimum
/// and DegenerateInput where the standard aborts.
TestResult run_test(std::span<const std::uint8_t> bits, NistTest test, const TestParams& params = {},
                    double alpha = 0.01);

/// Minimum length for `test` with these parameters.
std::size_t minimum_length(NistTest test, const TestParams& params = {});

struct SkippedTest {
  NistTest test = NistTest::kFrequency;
  std::string kind;  ///< "min-length" or "degenerate"
  std::string reason;
  std::size_t required = 0;
};

struct SuiteReport {
  std::vector<TestResult> results;  ///< executed tests, in kAllNistTests order
  std::vector<SkippedTest> skipped;
  double alpha = 0.01;
  bool overall_pass = false;
  std::size_t n_bits = 0;

  std::size_t executed() const { return results.size(); }
  const TestResult* find(NistTest t) const;
};

/// Runs all fifteen tests; the report is independent of the thread count.
SuiteReport run_suite(std::span<const std::uint8_t> bits, double alpha = 0.01,
                      const TestParams& params = {}, unsigned threads = 1);

/// Length-m templates with no self-overlap, in lexicographic order.
std::vector<std::vector<std::uint8_t>> aperiodic_templates(std::size_t m);

/// Linear complexity of a 0/1 sequence (Berlekamp-Massey over GF(2)).
std::size_t linear_complexity_of(std::span<const std::uint8_t> bits);

nlohmann::json to_json(const TestResult& r);
nlohmann::json to_json(const SuiteReport& r);
/// Fixed-width table: test name, worst P-value, result.
std::string format_table(const SuiteReport& r);

}  // namespace brng
