#include <doctest.h>

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>

#include "brng/config_io.hpp"
#include "brng/error.hpp"
#include "brng/nist.hpp"
#include "brng/rng.hpp"
#include "test_data.hpp"

using namespace brng;

namespace {

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
  Engine e = make_engine(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = e() >> 63;
  return v;
}

void check_corpus(const std::string& name) {
  const auto bits = testing::read_raw_bits(testing::data_dir() / (name + ".bin"));
  REQUIRE(bits.size() == 1000000);
  const json ref = read_json_file(testing::data_dir() / "nist_reference.json").at(name);
  for (auto t : kAllNistTests) {
    CAPTURE(test_id(t));
    const TestResult r = run_test(bits, t);
    const auto expected = ref.at(test_id(t)).get<std::vector<double>>();
    REQUIRE(r.p_values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CAPTURE(i);
      CHECK(std::abs(r.p_values[i] - expected[i]) <= 1e-6);
    }
  }
}

}  // namespace

TEST_SUITE("nist") {
  TEST_CASE("frequency closed forms") {
    std::vector<std::uint8_t> half(100, 0);
    std::fill(half.begin(), half.begin() + 50, 1);
    CHECK(run_test(half, NistTest::kFrequency).worst_p == doctest::Approx(1.0));
    std::vector<std::uint8_t> ones(100, 1);
    const TestResult r = run_test(ones, NistTest::kFrequency);
    CHECK(r.worst_p == doctest::Approx(std::erfc(10.0 / std::sqrt(2.0))).epsilon(1e-10));
    CHECK(r.worst_p < 1e-22);
    CHECK_FALSE(r.passed);
  }

  TEST_CASE("worked examples of the standard") {
    const std::string s100 =
        "11001001000011111101101010100010001000010110100011"
        "00001000110100110001001100011001100010100010111000";
    std::vector<std::uint8_t> b;
    for (char c : s100) b.push_back(c == '1');
    CHECK(run_test(b, NistTest::kFrequency).worst_p == doctest::Approx(0.109599).epsilon(1e-5));
    const TestResult cs = run_test(b, NistTest::kCumulativeSums);
    CHECK(cs.p_values[0] == doctest::Approx(0.219194).epsilon(1e-5));
    CHECK(run_test(b, NistTest::kRuns).worst_p == doctest::Approx(0.500798).epsilon(1e-5));
    TestParams bf;
    bf.block_frequency_m = 10;
    CHECK(run_test(b, NistTest::kBlockFrequency, bf).worst_p == doctest::Approx(0.706438).epsilon(1e-5));
  }

  TEST_CASE("known answers on the e expansion") { check_corpus("e_1M"); }
  TEST_CASE("known answers on a Mersenne Twister stream") { check_corpus("mt_1M"); }

  TEST_CASE("aperiodic templates of length 9") {
    const auto t = aperiodic_templates(9);
    CHECK(t.size() == 148);
    CHECK(t.front() == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 0, 0, 1});
  }

  TEST_CASE("linear complexity matches a plain Berlekamp-Massey") {
    auto naive = [](const std::vector<std::uint8_t>& s) {
      const std::size_t n = s.size();
      std::vector<std::uint8_t> c(n + 1, 0), b(n + 1, 0);
      c[0] = b[0] = 1;
      std::size_t L = 0;
      long m = -1;
      for (std::size_t i = 0; i < n; ++i) {
        unsigned d = s[i];
        for (std::size_t j = 1; j <= L; ++j) d ^= c[j] & s[i - j];
        if (!d) continue;
        auto t = c;
        const std::size_t sh = i - static_cast<std::size_t>(m);
        for (std::size_t j = sh; j <= n; ++j) c[j] ^= b[j - sh];
        if (L <= i / 2) {
          L = i + 1 - L;
          m = static_cast<long>(i);
          b = t;
        }
      }
      return L;
    };
    for (std::size_t n : {1u, 7u, 63u, 64u, 65u, 200u, 1000u}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = random_bits(n, seed * 100 + n);
        CHECK(linear_complexity_of(s) == naive(s));
      }
    }
    const std::vector<std::uint8_t> ex = {1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1};
    CHECK(linear_complexity_of(ex) == 4);
  }

  TEST_CASE("suite gating on short input") {
    const auto bits = random_bits(100000, 42);
    const SuiteReport rep = run_suite(bits);
    CHECK(rep.executed() + rep.skipped.size() == 15);
    CHECK(rep.find(NistTest::kUniversal) == nullptr);
    CHECK(rep.find(NistTest::kLinearComplexity) == nullptr);
    bool universal_min_length = false;
    for (const auto& s : rep.skipped)
      if (s.test == NistTest::kUniversal) universal_min_length = s.kind == "min-length" && s.required == 387840;
    CHECK(universal_min_length);
    CHECK(rep.find(NistTest::kFrequency) != nullptr);
    CHECK(rep.find(NistTest::kSerial) != nullptr);
  }

  TEST_CASE("all zeros and alternating input") {
    const std::vector<std::uint8_t> zeros(1000000, 0);
    const SuiteReport z = run_suite(zeros);
    CHECK_FALSE(z.overall_pass);
    int failed = 0;
    for (const auto& r : z.results) failed += !r.passed;
    CHECK(failed >= 5);

    std::vector<std::uint8_t> alt(1000000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
    CHECK(run_test(alt, NistTest::kFrequency).worst_p == doctest::Approx(1.0));
    const TestResult runs = run_test(alt, NistTest::kRuns);
    CHECK(runs.worst_p < 1e-100);
    CHECK_FALSE(runs.passed);
  }

  TEST_CASE("minimum length and degenerate walks are reported") {
    const auto bits = random_bits(50, 1);
    CHECK_THROWS_AS(run_test(bits, NistTest::kFrequency), MinLength);
    std::vector<std::uint8_t> ones(10000, 1);
    CHECK_THROWS_AS(run_test(ones, NistTest::kRandomExcursions), DegenerateInput);
  }

  TEST_CASE("frequency is permutation invariant, runs is not") {
    std::vector<std::uint8_t> a(1000), b(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
      a[i] = i % 2;
      b[i] = i < 500;
    }
    CHECK(run_test(a, NistTest::kFrequency).worst_p == run_test(b, NistTest::kFrequency).worst_p);
    CHECK(run_test(a, NistTest::kRuns).worst_p != run_test(b, NistTest::kRuns).worst_p);
  }

  TEST_CASE("suite is deterministic and thread-count independent") {
    const auto bits = random_bits(400000, 9);
    const SuiteReport one = run_suite(bits, 0.01, {}, 1);
    const SuiteReport four = run_suite(bits, 0.01, {}, 4);
    CHECK(to_json(one).dump() == to_json(four).dump());
    CHECK(format_table(one) == format_table(four));
    CHECK(one.executed() + one.skipped.size() == 15);
  }

  TEST_CASE("pass proportions on a reference generator") {
    // 100 disjoint 10^6-bit sequences; every P-value's pass proportion must
    // lie above (1 - a) - 3 sqrt(a (1 - a) / m).
    const int m = 100;
    const double alpha = 0.01;
    const double lo = (1 - alpha) - 3 * std::sqrt(alpha * (1 - alpha) / m);
    std::map<std::pair<NistTest, std::size_t>, int> pass, seen;
    for (int k = 0; k < m; ++k) {
      const auto bits = random_bits(1000000, substream(777, k));
      for (const auto& r : run_suite(bits, alpha).results) {
        for (std::size_t i = 0; i < r.p_values.size(); ++i) {
          ++seen[{r.test, i}];
          pass[{r.test, i}] += r.p_values[i] > alpha;
        }
      }
    }
    for (const auto& [key, n] : seen) {
      CAPTURE(test_id(key.first));
      CAPTURE(key.second);
      if (n < 20) continue;
      CHECK(static_cast<double>(pass[key]) / n >= lo);
    }
  }
}
