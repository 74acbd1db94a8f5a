#include "brng/nist.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "brng/error.hpp"
#include "brng/special_functions.hpp"

namespace brng {
namespace {

using Bits = std::span<const std::uint8_t>;

double chi2_sum(std::span<const double> observed, std::span<const double> expected) {
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

void need(std::size_t n, std::size_t required, NistTest t) {
  if (n < required) {
    throw MinLength(display_name(t) + " needs at least " + std::to_string(required) + " bits, got " +
                        std::to_string(n),
                    required);
  }
}

int floor_log2(std::size_t n) { return n ? static_cast<int>(std::bit_width(n)) - 1 : 0; }

int apen_m(std::size_t n, const TestParams& p) {
  return p.approximate_entropy_m.value_or(std::min(10, floor_log2(n) - 6));
}

int serial_m(std::size_t n, const TestParams& p) {
  return p.serial_m.value_or(std::min(16, floor_log2(n) - 3));
}

// ---- individual tests ----------------------------------------------------

void frequency(Bits b, TestResult& r) {
  long long s = 0;
  for (auto x : b) s += x ? 1 : -1;
  const double s_obs = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(b.size()));
  r.p_values = {erfc(s_obs / std::numbers::sqrt2)};
  r.parameters = {{"s_n", s}};
}

void block_frequency(Bits b, const TestParams& p, TestResult& r) {
  const std::size_t m = p.block_frequency_m;
  if (m == 0) throw DomainError("block_frequency_m must be positive");
  const std::size_t blocks = b.size() / m;
  double chi2 = 0.0;
  for (std::size_t k = 0; k < blocks; ++k) {
    const auto ones = std::count(b.begin() + static_cast<std::ptrdiff_t>(k * m),
                                 b.begin() + static_cast<std::ptrdiff_t>((k + 1) * m), std::uint8_t{1});
    const double pi = static_cast<double>(ones) / static_cast<double>(m) - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * static_cast<double>(m);
  r.p_values = {igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0)};
  r.n_bits_used = blocks * m;
  r.parameters = {{"M", m}, {"N", blocks}, {"chi2", chi2}};
}

double cusum_p(double n, double z) {
  const double sq = std::sqrt(n);
  double t1 = 0.0, t2 = 0.0;
  for (long k = static_cast<long>(std::floor((-n / z + 1) / 4)); k <= static_cast<long>(std::floor((n / z - 1) / 4)); ++k)
    t1 += normal_cdf((4 * k + 1) * z / sq) - normal_cdf((4 * k - 1) * z / sq);
  for (long k = static_cast<long>(std::floor((-n / z - 3) / 4)); k <= static_cast<long>(std::floor((n / z - 1) / 4)); ++k)
    t2 += normal_cdf((4 * k + 3) * z / sq) - normal_cdf((4 * k + 1) * z / sq);
  return std::clamp(1.0 - t1 + t2, 0.0, 1.0);
}

void cumulative_sums(Bits b, TestResult& r) {
  long long s = 0, fwd = 0;
  for (auto x : b) {
    s += x ? 1 : -1;
    fwd = std::max(fwd, std::llabs(s));
  }
  long long t = 0, bwd = 0;
  for (auto it = b.rbegin(); it != b.rend(); ++it) {
    t += *it ? 1 : -1;
    bwd = std::max(bwd, std::llabs(t));
  }
  const double n = static_cast<double>(b.size());
  r.p_values = {cusum_p(n, static_cast<double>(fwd)), cusum_p(n, static_cast<double>(bwd))};
  r.sub_results = {{"forward", r.p_values[0]}, {"backward", r.p_values[1]}};
  r.parameters = {{"z_forward", fwd}, {"z_backward", bwd}};
}

void runs(Bits b, TestResult& r) {
  const double n = static_cast<double>(b.size());
  const double pi = static_cast<double>(std::count(b.begin(), b.end(), std::uint8_t{1})) / n;
  r.parameters = {{"pi", pi}};
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) {
    // Frequency prerequisite failed; the standard assigns P = 0.
    r.p_values = {0.0};
    r.parameters["prerequisite_failed"] = true;
    return;
  }
  std::size_t v = 1;
  for (std::size_t i = 1; i < b.size(); ++i) v += b[i] != b[i - 1];
  const double num = std::abs(static_cast<double>(v) - 2.0 * n * pi * (1 - pi));
  const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1 - pi);
  r.p_values = {erfc(num / den)};
  r.parameters["v_obs"] = v;
}

void longest_run(Bits b, TestResult& r) {
  const std::size_t n = b.size();
  std::size_t m, lo, hi;
  std::vector<double> pis;
  if (n < 6272) {
    m = 8, lo = 1, hi = 4;
    pis = {0.21484375, 0.3671875, 0.23046875, 0.1875};
  } else if (n < 750000) {
    m = 128, lo = 4, hi = 9;
    pis = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
  } else {
    m = 10000, lo = 10, hi = 16;
    pis = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t blocks = n / m;
  std::vector<double> counts(pis.size(), 0.0);
  for (std::size_t k = 0; k < blocks; ++k) {
    std::size_t run = 0, best = 0;
    for (std::size_t i = k * m; i < (k + 1) * m; ++i) {
      run = b[i] ? run + 1 : 0;
      best = std::max(best, run);
    }
    counts[std::clamp(best, lo, hi) - lo] += 1;
  }
  std::vector<double> expected(pis.size());
  for (std::size_t i = 0; i < pis.size(); ++i) expected[i] = static_cast<double>(blocks) * pis[i];
  const double chi2 = chi2_sum(counts, expected);
  r.p_values = {igamc(static_cast<double>(pis.size() - 1) / 2.0, chi2 / 2.0)};
  r.n_bits_used = blocks * m;
  r.parameters = {{"M", m}, {"N", blocks}, {"chi2", chi2}, {"counts", counts}};
}

int gf2_rank32(std::array<std::uint32_t, 32> rows) {
  int rank = 0;
  for (int bit = 31; bit >= 0; --bit) {
    int pivot = -1;
    for (int i = rank; i < 32; ++i) {
      if ((rows[i] >> bit) & 1u) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int i = 0; i < 32; ++i)
      if (i != rank && ((rows[i] >> bit) & 1u)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

double rank_probability(int r, int m = 32, int q = 32) {
  double prod = 1.0;
  for (int i = 0; i < r; ++i)
    prod *= (1 - std::ldexp(1.0, i - q)) * (1 - std::ldexp(1.0, i - m)) / (1 - std::ldexp(1.0, i - r));
  return std::ldexp(1.0, r * (q + m - r) - m * q) * prod;
}

void rank(Bits b, TestResult& r) {
  const std::size_t mats = b.size() / 1024;
  double full = 0, minus1 = 0;
  for (std::size_t k = 0; k < mats; ++k) {
    std::array<std::uint32_t, 32> rows{};
    for (std::size_t i = 0; i < 32; ++i) {
      std::uint32_t w = 0;
      for (std::size_t j = 0; j < 32; ++j) w = (w << 1) | b[k * 1024 + i * 32 + j];
      rows[i] = w;
    }
    const int rk = gf2_rank32(rows);
    full += rk == 32;
    minus1 += rk == 31;
  }
  const double n = static_cast<double>(mats);
  const double p32 = rank_probability(32), p31 = rank_probability(31), p30 = 1.0 - p32 - p31;
  const double rest = n - full - minus1;
  const double chi2 = (full - p32 * n) * (full - p32 * n) / (p32 * n) +
                      (minus1 - p31 * n) * (minus1 - p31 * n) / (p31 * n) +
                      (rest - p30 * n) * (rest - p30 * n) / (p30 * n);
  r.p_values = {std::exp(-chi2 / 2.0)};
  r.n_bits_used = mats * 1024;
  r.parameters = {{"N", mats}, {"full_rank", full}, {"rank_minus_1", minus1}, {"chi2", chi2}};
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void dft(Bits b, TestResult& r) {
  const std::size_t n = b.size();
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = b[i] ? 1.0 : -1.0;
  fftw_execute(plan);
  const double threshold = std::sqrt(std::log(1.0 / 0.05) * static_cast<double>(n));
  std::size_t n1 = 0;
  for (std::size_t j = 0; j < n / 2; ++j) n1 += std::hypot(out[j][0], out[j][1]) < threshold;
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  const double nd = static_cast<double>(n);
  const double n0 = 0.95 * nd / 2.0;
  const double d = (static_cast<double>(n1) - n0) / std::sqrt(nd * 0.95 * 0.05 / 4.0);
  r.p_values = {erfc(std::abs(d) / std::numbers::sqrt2)};
  r.parameters = {{"N1", n1}, {"N0", n0}, {"d", d}};
}

std::string bits_label(std::span<const std::uint8_t> t) {
  std::string s;
  for (auto x : t) s.push_back(x ? '1' : '0');
  return s;
}

double non_overlapping_one(Bits b, std::span<const std::uint8_t> tpl, std::size_t n_blocks) {
  const std::size_t m = tpl.size();
  const std::size_t len = b.size() / n_blocks;
  const double mu = static_cast<double>(len - m + 1) / std::ldexp(1.0, static_cast<int>(m));
  const double var = static_cast<double>(len) *
                     (1.0 / std::ldexp(1.0, static_cast<int>(m)) -
                      (2.0 * static_cast<double>(m) - 1.0) / std::ldexp(1.0, 2 * static_cast<int>(m)));
  double chi2 = 0.0;
  for (std::size_t j = 0; j < n_blocks; ++j) {
    const std::uint8_t* blk = b.data() + j * len;
    std::size_t w = 0;
    for (std::size_t i = 0; i + m <= len;) {
      if (std::equal(tpl.begin(), tpl.end(), blk + i)) {
        ++w;
        i += m;
      } else {
        ++i;
      }
    }
    chi2 += (static_cast<double>(w) - mu) * (static_cast<double>(w) - mu) / var;
  }
  return igamc(static_cast<double>(n_blocks) / 2.0, chi2 / 2.0);
}

void non_overlapping(Bits b, const TestParams& p, TestResult& r) {
  std::vector<std::vector<std::uint8_t>> templates;
  if (p.all_templates) templates = aperiodic_templates(p.template_length);
  else templates = {p.template_bits};
  for (const auto& t : templates) {
    const double pv = non_overlapping_one(b, t, p.template_blocks);
    r.p_values.push_back(pv);
    r.sub_results.push_back({bits_label(t), pv});
  }
  r.n_bits_used = b.size() / p.template_blocks * p.template_blocks;
  r.parameters = {{"N", p.template_blocks}, {"M", b.size() / p.template_blocks},
                  {"m", templates.front().size()}, {"templates", templates.size()}};
}

constexpr std::array<double, 6> kOverlappingPi = {0.364091, 0.185659, 0.139381,
                                                  0.100571, 0.0704323, 0.139865};

void overlapping(Bits b, const TestParams& p, TestResult& r) {
  const std::size_t m = p.overlapping_m, len = p.overlapping_block;
  const std::size_t blocks = b.size() / len;
  std::vector<double> nu(6, 0.0);
  for (std::size_t j = 0; j < blocks; ++j) {
    std::size_t w = 0, run = 0;
    for (std::size_t i = j * len; i < (j + 1) * len; ++i) {
      run = b[i] ? run + 1 : 0;
      w += run >= m;
    }
    nu[std::min<std::size_t>(w, 5)] += 1;
  }
  std::vector<double> expected(6);
  for (std::size_t i = 0; i < 6; ++i) expected[i] = static_cast<double>(blocks) * kOverlappingPi[i];
  const double chi2 = chi2_sum(nu, expected);
  r.p_values = {igamc(2.5, chi2 / 2.0)};
  r.n_bits_used = blocks * len;
  r.parameters = {{"m", m}, {"M", len}, {"N", blocks}, {"chi2", chi2}, {"nu", nu}};
}

constexpr std::array<std::size_t, 11> kUniversalBounds = {
    387840, 904960, 2068480, 4654080, 10342400, 22753280, 49643520, 107560960, 231669760, 496435200, 1059061760};
constexpr std::array<double, 17> kUniversalMean = {0,         0,         0,         0,         0,         0,
                                                   5.2177052, 6.1962507, 7.1836656, 8.1764248,
                                                   9.1723243, 10.170032, 11.168765, 12.168070,
                                                   13.167693, 14.167488, 15.167379};
constexpr std::array<double, 17> kUniversalVar = {0,     0,     0,     0,     0,     0,     2.954, 3.125, 3.238,
                                                  3.311, 3.356, 3.384, 3.401, 3.410, 3.416, 3.419, 3.421};

int universal_L(std::size_t n, const TestParams& p) {
  if (p.universal_L) return *p.universal_L;
  int L = 5;
  for (auto bound : kUniversalBounds) L += n >= bound;
  return L;
}

void universal(Bits b, const TestParams& p, TestResult& r) {
  const int L = universal_L(b.size(), p);
  if (L < 6 || L > 16) throw DomainError("universal test L must lie in [6, 16]");
  const std::size_t q = 10u << L;
  const std::size_t total_blocks = b.size() / static_cast<std::size_t>(L);
  if (total_blocks <= q) throw MinLength("universal test needs more than Q blocks", (q + 1) * L);
  const std::size_t k = total_blocks - q;
  std::vector<std::size_t> table(std::size_t{1} << L, 0);
  double sum = 0.0;
  for (std::size_t i = 1; i <= q + k; ++i) {
    std::size_t dec = 0;
    for (int j = 0; j < L; ++j) dec = (dec << 1) | b[(i - 1) * L + static_cast<std::size_t>(j)];
    if (i > q) sum += std::log2(static_cast<double>(i - table[dec]));
    table[dec] = i;
  }
  const double kd = static_cast<double>(k);
  const double phi = sum / kd;
  const double c = 0.7 - 0.8 / L + (4.0 + 32.0 / L) * std::pow(kd, -3.0 / L) / 15.0;
  const double sigma = c * std::sqrt(kUniversalVar[L] / kd);
  r.p_values = {erfc(std::abs(phi - kUniversalMean[L]) / (std::numbers::sqrt2 * sigma))};
  r.n_bits_used = (q + k) * static_cast<std::size_t>(L);
  r.parameters = {{"L", L}, {"Q", q}, {"K", k}, {"fn", phi}, {"expected", kUniversalMean[L]}};
}

// Counts of all m-bit patterns over the sequence wrapped circularly.
std::vector<std::uint64_t> pattern_counts(Bits b, int m) {
  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  if (m <= 0) return counts;
  const std::size_t n = b.size();
  const std::size_t mask = (std::size_t{1} << m) - 1;
  std::size_t code = 0;
  for (int j = 0; j < m - 1; ++j) code = (code << 1) | b[static_cast<std::size_t>(j) % n];
  for (std::size_t i = 0; i < n; ++i) {
    code = ((code << 1) | b[(i + static_cast<std::size_t>(m) - 1) % n]) & mask;
    ++counts[code];
  }
  return counts;
}

void approximate_entropy(Bits b, const TestParams& p, TestResult& r) {
  const int m = apen_m(b.size(), p);
  if (m < 1) throw MinLength("approximate entropy block length below 1", 128);
  const double n = static_cast<double>(b.size());
  auto phi = [&](int block) {
    double s = 0.0;
    for (auto c : pattern_counts(b, block)) {
      if (c == 0) continue;
      const double f = static_cast<double>(c) / n;
      s += f * std::log(f);
    }
    return s;
  };
  const double apen = phi(m) - phi(m + 1);
  const double chi2 = std::max(0.0, 2.0 * n * (std::numbers::ln2 - apen));
  r.p_values = {igamc(std::ldexp(1.0, m - 1), chi2 / 2.0)};
  r.parameters = {{"m", m}, {"apen", apen}, {"chi2", chi2}};
}

struct Walk {
  std::size_t cycles = 0;
  std::vector<std::int64_t> s;  // partial sums S_1..S_n
};

Walk random_walk(Bits b) {
  Walk w;
  w.s.resize(b.size());
  std::int64_t acc = 0;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    acc += b[i] ? 1 : -1;
    w.s[i] = acc;
    zeros += acc == 0;
  }
  // Cycles end at each interior zero plus the appended terminal zero.
  w.cycles = zeros + (acc != 0 ? 1 : 0);
  return w;
}

void check_cycles(const Walk& w, std::size_t n, TestResult& r) {
  const double limit = std::max(0.005 * std::sqrt(static_cast<double>(n)), 500.0);
  r.parameters["J"] = w.cycles;
  if (static_cast<double>(w.cycles) < limit) {
    throw DegenerateInput("random walk has " + std::to_string(w.cycles) +
                          " cycles, fewer than the required " + std::to_string(static_cast<long>(std::ceil(limit))));
  }
}

void random_excursions(Bits b, TestResult& r) {
  const Walk w = random_walk(b);
  check_cycles(w, b.size(), r);
  std::array<std::array<double, 6>, 8> nu{};
  std::array<std::size_t, 9> visits{};
  auto close_cycle = [&] {
    for (int x = -4; x <= 4; ++x) {
      if (x == 0) continue;
      const int idx = x < 0 ? x + 4 : x + 3;
      nu[idx][std::min<std::size_t>(visits[x + 4], 5)] += 1;
    }
    visits.fill(0);
  };
  for (std::size_t i = 0; i < w.s.size(); ++i) {
    const std::int64_t v = w.s[i];
    if (v == 0) close_cycle();
    else if (v >= -4 && v <= 4) ++visits[v + 4];
  }
  if (!w.s.empty() && w.s.back() != 0) close_cycle();
  const double j = static_cast<double>(w.cycles);
  for (int x = -4; x <= 4; ++x) {
    if (x == 0) continue;
    const int idx = x < 0 ? x + 4 : x + 3;
    const double ax = std::abs(x);
    std::array<double, 6> pis{};
    pis[0] = 1 - 1 / (2 * ax);
    for (int k = 1; k <= 4; ++k) pis[k] = (1 / (4 * ax * ax)) * std::pow(1 - 1 / (2 * ax), k - 1);
    pis[5] = (1 / (2 * ax)) * std::pow(1 - 1 / (2 * ax), 4);
    std::array<double, 6> expected{};
    for (int k = 0; k < 6; ++k) expected[k] = j * pis[k];
    const double chi2 = chi2_sum(nu[idx], expected);
    const double pv = igamc(2.5, chi2 / 2.0);
    r.p_values.push_back(pv);
    r.sub_results.push_back({"x=" + std::to_string(x), pv});
  }
}

void random_excursions_variant(Bits b, TestResult& r) {
  const Walk w = random_walk(b);
  check_cycles(w, b.size(), r);
  std::array<std::size_t, 19> xi{};
  for (auto v : w.s)
    if (v >= -9 && v <= 9) ++xi[v + 9];
  const double j = static_cast<double>(w.cycles);
  for (int x = -9; x <= 9; ++x) {
    if (x == 0) continue;
    const double num = std::abs(static_cast<double>(xi[x + 9]) - j);
    const double pv = erfc(num / std::sqrt(2.0 * j * (4.0 * std::abs(x) - 2.0)));
    r.p_values.push_back(pv);
    r.sub_results.push_back({"x=" + std::to_string(x), pv});
  }
}

void serial(Bits b, const TestParams& p, TestResult& r) {
  const int m = serial_m(b.size(), p);
  if (m < 3) throw MinLength("serial block length below 3", 64);
  const double n = static_cast<double>(b.size());
  auto psi2 = [&](int block) {
    if (block <= 0) return 0.0;
    double s = 0.0;
    for (auto c : pattern_counts(b, block)) s += static_cast<double>(c) * static_cast<double>(c);
    return std::ldexp(1.0, block) / n * s - n;
  };
  const double p0 = psi2(m), p1 = psi2(m - 1), p2 = psi2(m - 2);
  const double d1 = std::max(0.0, p0 - p1), d2 = std::max(0.0, p0 - 2 * p1 + p2);
  r.p_values = {igamc(std::ldexp(1.0, m - 2), d1 / 2.0), igamc(std::ldexp(1.0, m - 3), d2 / 2.0)};
  r.sub_results = {{"p_value1", r.p_values[0]}, {"p_value2", r.p_values[1]}};
  r.parameters = {{"m", m}, {"del1", d1}, {"del2", d2}};
}

constexpr std::array<double, 7> kLinearComplexityPi = {0.010417, 0.03125, 0.125, 0.5,
                                                       0.25,     0.0625,  0.020833};

void linear_complexity(Bits b, const TestParams& p, TestResult& r) {
  const std::size_t m = p.linear_complexity_m;
  const std::size_t blocks = b.size() / m;
  const double md = static_cast<double>(m);
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  const double mu = md / 2.0 + (9.0 - sign) / 36.0 - (md / 3.0 + 2.0 / 9.0) / std::pow(2.0, md);
  std::vector<double> nu(7, 0.0);
  for (std::size_t k = 0; k < blocks; ++k) {
    const auto L = static_cast<double>(linear_complexity_of(b.subspan(k * m, m)));
    const double t = sign * (L - mu) + 2.0 / 9.0;
    std::size_t idx = 0;
    for (double e : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) idx += t > e;
    nu[idx] += 1;
  }
  std::vector<double> expected(7);
  for (std::size_t i = 0; i < 7; ++i) expected[i] = static_cast<double>(blocks) * kLinearComplexityPi[i];
  const double chi2 = chi2_sum(nu, expected);
  r.p_values = {igamc(3.0, chi2 / 2.0)};
  r.n_bits_used = blocks * m;
  r.parameters = {{"M", m}, {"N", blocks}, {"chi2", chi2}, {"nu", nu}};
}

}  // namespace

std::size_t linear_complexity_of(std::span<const std::uint8_t> s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  const std::size_t words = n / 64 + 2;
  // rev holds the sequence reversed so that the discrepancy at step i is the
  // parity of C AND (rev >> (n - 1 - i)).
  std::vector<std::uint64_t> rev(words + 1, 0), c(words, 0), bpoly(words, 0), t(words);
  for (std::size_t k = 0; k < n; ++k)
    if (s[n - 1 - k]) rev[k / 64] |= std::uint64_t{1} << (k % 64);
  c[0] = bpoly[0] = 1;
  std::size_t L = 0;
  long m = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t off = n - 1 - i;
    const std::size_t wo = off / 64, bo = off % 64;
    unsigned parity = 0;
    for (std::size_t w = 0; w <= L / 64; ++w) {
      std::uint64_t shifted = rev[w + wo] >> bo;
      if (bo && w + wo + 1 < rev.size()) shifted |= rev[w + wo + 1] << (64 - bo);
      parity ^= static_cast<unsigned>(std::popcount(shifted & c[w]) & 1);
    }
    if (!parity) continue;
    t = c;
    const std::size_t shift = i - static_cast<std::size_t>(m);
    const std::size_t ws = shift / 64, bs = shift % 64;
    for (std::size_t w = words; w-- > ws;) {
      std::uint64_t v = bpoly[w - ws] << bs;
      if (bs && w > ws) v |= bpoly[w - ws - 1] >> (64 - bs);
      c[w] ^= v;
    }
    if (L <= i / 2) {
      L = i + 1 - L;
      m = static_cast<long>(i);
      bpoly = t;
    }
  }
  return L;
}

std::vector<std::vector<std::uint8_t>> aperiodic_templates(std::size_t m) {
  if (m < 2 || m > 21) throw DomainError("template length must lie in [2, 21]");
  std::vector<std::vector<std::uint8_t>> out;
  for (std::size_t code = 0; code < (std::size_t{1} << m); ++code) {
    std::vector<std::uint8_t> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = (code >> (m - 1 - i)) & 1u;
    bool aperiodic = true;
    for (std::size_t k = 1; k < m && aperiodic; ++k)
      if (std::equal(t.begin(), t.end() - static_cast<std::ptrdiff_t>(k), t.begin() + static_cast<std::ptrdiff_t>(k)))
        aperiodic = false;
    if (aperiodic) out.push_back(std::move(t));
  }
  return out;
}

std::string test_id(NistTest t) {
  switch (t) {
    case NistTest::kFrequency: return "frequency";
    case NistTest::kBlockFrequency: return "block_frequency";
    case NistTest::kCumulativeSums: return "cumulative_sums";
    case NistTest::kRuns: return "runs";
    case NistTest::kLongestRun: return "longest_run";
    case NistTest::kRank: return "rank";
    case NistTest::kDft: return "dft";
    case NistTest::kNonOverlappingTemplate: return "non_overlapping_template";
    case NistTest::kOverlappingTemplate: return "overlapping_template";
    case NistTest::kUniversal: return "universal";
    case NistTest::kApproximateEntropy: return "approximate_entropy";
    case NistTest::kRandomExcursions: return "random_excursions";
    case NistTest::kRandomExcursionsVariant: return "random_excursions_variant";
    case NistTest::kSerial: return "serial";
    case NistTest::kLinearComplexity: return "linear_complexity";
  }
  return "unknown";
}

std::string display_name(NistTest t) {
  switch (t) {
    case NistTest::kFrequency: return "Frequency";
    case NistTest::kBlockFrequency: return "BlockFrequency";
    case NistTest::kCumulativeSums: return "CumulativeSums";
    case NistTest::kRuns: return "Runs";
    case NistTest::kLongestRun: return "LongestRun";
    case NistTest::kRank: return "Rank";
    case NistTest::kDft: return "FFT";
    case NistTest::kNonOverlappingTemplate: return "NonOverlappingTemplate";
    case NistTest::kOverlappingTemplate: return "OverlappingTemplate";
    case NistTest::kUniversal: return "Universal";
    case NistTest::kApproximateEntropy: return "ApproximateEntropy";
    case NistTest::kRandomExcursions: return "RandomExcursions";
    case NistTest::kRandomExcursionsVariant: return "RandomExcursionsVariant";
    case NistTest::kSerial: return "Serial";
    case NistTest::kLinearComplexity: return "LinearComplexity";
  }
  return "Unknown";
}

NistTest nist_test_from_string(const std::string& s) {
  for (auto t : kAllNistTests)
    if (s == test_id(t) || s == display_name(t)) return t;
  throw ConfigError("unknown NIST test '" + s + "'");
}

std::size_t minimum_length(NistTest test, const TestParams& p) {
  switch (test) {
    case NistTest::kFrequency:
    case NistTest::kCumulativeSums:
    case NistTest::kRuns:
      return 100;
    case NistTest::kBlockFrequency: return std::max<std::size_t>(100, p.block_frequency_m);
    case NistTest::kLongestRun: return 128;
    case NistTest::kRank: return 38 * 1024;
    case NistTest::kDft: return 1000;
    case NistTest::kNonOverlappingTemplate: {
      // Expected matches per block of at least 5.
      const std::size_t m = p.all_templates ? p.template_length : p.template_bits.size();
      return p.template_blocks * (5 * (std::size_t{1} << m) + m - 1);
    }
    case NistTest::kOverlappingTemplate: {
      const double min_pi = *std::min_element(kOverlappingPi.begin(), kOverlappingPi.end());
      const auto blocks = static_cast<std::size_t>(std::floor(5.0 / min_pi)) + 1;
      return blocks * p.overlapping_block;
    }
    case NistTest::kUniversal:
      if (p.universal_L) return (10u << *p.universal_L) * static_cast<std::size_t>(*p.universal_L) * 101 / 100;
      return kUniversalBounds.front();
    case NistTest::kApproximateEntropy:
      return p.approximate_entropy_m ? std::size_t{1} << (*p.approximate_entropy_m + 6) : 128;
    case NistTest::kRandomExcursions:
    case NistTest::kRandomExcursionsVariant:
      return 1000;
    case NistTest::kSerial: return p.serial_m ? std::size_t{1} << (*p.serial_m + 3) : 64;
    case NistTest::kLinearComplexity: return 200 * p.linear_complexity_m;
  }
  return 0;
}

TestResult run_test(std::span<const std::uint8_t> bits, NistTest test, const TestParams& params,
                    double alpha) {
  need(bits.size(), minimum_length(test, params), test);
  for (auto x : bits)
    if (x > 1) throw DomainError("bit values must be 0 or 1");
  TestResult r;
  r.test = test;
  r.n_bits_used = bits.size();
  switch (test) {
    case NistTest::kFrequency: frequency(bits, r); break;
    case NistTest::kBlockFrequency: block_frequency(bits, params, r); break;
    case NistTest::kCumulativeSums: cumulative_sums(bits, r); break;
    case NistTest::kRuns: runs(bits, r); break;
    case NistTest::kLongestRun: longest_run(bits, r); break;
    case NistTest::kRank: rank(bits, r); break;
    case NistTest::kDft: dft(bits, r); break;
    case NistTest::kNonOverlappingTemplate: non_overlapping(bits, params, r); break;
    case NistTest::kOverlappingTemplate: overlapping(bits, params, r); break;
    case NistTest::kUniversal: universal(bits, params, r); break;
    case NistTest::kApproximateEntropy: approximate_entropy(bits, params, r); break;
    case NistTest::kRandomExcursions: random_excursions(bits, r); break;
    case NistTest::kRandomExcursionsVariant: random_excursions_variant(bits, r); break;
    case NistTest::kSerial: serial(bits, params, r); break;
    case NistTest::kLinearComplexity: linear_complexity(bits, params, r); break;
  }
  for (auto& pv : r.p_values) pv = std::clamp(pv, 0.0, 1.0);
  r.worst_p = *std::min_element(r.p_values.begin(), r.p_values.end());
  r.passed = r.worst_p > alpha;
  return r;
}

const TestResult* SuiteReport::find(NistTest t) const {
  for (const auto& r : results)
    if (r.test == t) return &r;
  return nullptr;
}

SuiteReport run_suite(std::span<const std::uint8_t> bits, double alpha, const TestParams& params,
                      unsigned threads) {
  struct Slot {
    std::optional<TestResult> result;
    std::optional<SkippedTest> skipped;
  };
  std::array<Slot, 15> slots;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < kAllNistTests.size();) {
      const NistTest t = kAllNistTests[i];
      try {
        slots[i].result = run_test(bits, t, params, alpha);
      } catch (const MinLength& e) {
        slots[i].skipped = SkippedTest{t, "min-length", e.what(), e.required()};
      } catch (const DegenerateInput& e) {
        slots[i].skipped = SkippedTest{t, "degenerate", e.what(), 0};
      }
    }
  };
  threads = std::clamp(threads, 1u, 15u);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  SuiteReport rep;
  rep.alpha = alpha;
  rep.n_bits = bits.size();
  for (auto& s : slots) {
    if (s.result) rep.results.push_back(std::move(*s.result));
    if (s.skipped) rep.skipped.push_back(std::move(*s.skipped));
  }
  rep.overall_pass = !rep.results.empty() &&
                     std::all_of(rep.results.begin(), rep.results.end(), [](const auto& r) { return r.passed; });
  return rep;
}

nlohmann::json to_json(const TestResult& r) {
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : r.sub_results) subs.push_back({{"label", s.label}, {"p_value", s.p_value}});
  return {{"test", test_id(r.test)},    {"name", display_name(r.test)}, {"p_values", r.p_values},
          {"worst_p", r.worst_p},       {"passed", r.passed},           {"n_bits_used", r.n_bits_used},
          {"sub_results", subs},        {"parameters", r.parameters}};
}

nlohmann::json to_json(const SuiteReport& rep) {
  nlohmann::json results = nlohmann::json::array(), skipped = nlohmann::json::array();
  for (const auto& r : rep.results) results.push_back(to_json(r));
  for (const auto& s : rep.skipped)
    skipped.push_back({{"test", test_id(s.test)}, {"kind", s.kind}, {"reason", s.reason}, {"required", s.required}});
  return {{"alpha", rep.alpha},     {"n_bits", rep.n_bits},   {"overall_pass", rep.overall_pass},
          {"executed", rep.executed()}, {"results", results}, {"skipped", skipped}};
}

std::string format_table(const SuiteReport& rep) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-26s %12s  %s\n", "Statistical test", "P-value", "Result");
  os << line << std::string(48, '-') << '\n';
  for (auto t : kAllNistTests) {
    if (const TestResult* r = rep.find(t)) {
      std::snprintf(line, sizeof line, "%-26s %12.6f  %s\n", display_name(t).c_str(), r->worst_p,
                    r->passed ? "passed" : "FAILED");
    } else {
      std::snprintf(line, sizeof line, "%-26s %12s  %s\n", display_name(t).c_str(), "-", "skipped");
    }
    os << line;
  }
  os << std::string(48, '-') << '\n'
     << rep.n_bits << " bits, alpha = " << rep.alpha << ", " << rep.executed() << " executed, "
     << rep.skipped.size() << " skipped: " << (rep.overall_pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace brng
