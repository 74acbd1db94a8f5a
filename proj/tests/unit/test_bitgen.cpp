#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "brng/bitgen.hpp"
#include "brng/error.hpp"
#include "brng/params.hpp"

using namespace brng;

namespace {

BalancePoint point(double factor, double boundary) {
  const PhysicalParams p = reference_params();
  BalancePoint bp;
  bp.omega1_star = factor * closed_form_thresholds(p).omega_th;
  bp.boundary = boundary;
  bp.tau_ng = bp.tau_g = bp.tau = 36e-9;
  bp.half_life = std::log(2.0) * bp.tau;
  bp.lifetimes_equal = true;
  return bp;
}

BitGenOptions fast(double f_s) {
  BitGenOptions o;
  o.f_s = f_s;
  o.burn_in_time = 1e-8;
  return o;
}

}  // namespace

TEST_SUITE("bitgen") {
  TEST_CASE("sampling frequency") {
    DwellStats d;
    d.tau_ng = d.tau_g = 1.0;
    CHECK(sampling_frequency(d) == doctest::Approx(0.36067376022224085).epsilon(1e-12));
    d.tau_ng = d.tau_g = 72e-9;
    CHECK(sampling_frequency(d) == doctest::Approx(5.0093578e6).epsilon(1e-6));
    const double f = sampling_frequency(d);
    d.tau_ng = d.tau_g = 144e-9;
    CHECK(sampling_frequency(d) == doctest::Approx(f / 2));
    CHECK(sampling_frequency(d, {.divisor = 2.0}) == doctest::Approx(f));

    d.tau_ng = 100e-9;
    d.tau_g = 50e-9;
    CHECK_THROWS_AS(sampling_frequency(d), UnbalancedLifetimes);
    d.tau_ng = d.tau_g = 0.0;
    CHECK_THROWS_AS(sampling_frequency(d), DomainError);
  }

  TEST_CASE("degenerate boundaries") {
    const PhysicalParams p = reference_params();
    const auto zeros = generate_bits(p, point(0.8, std::numeric_limits<double>::infinity()), 200, 1, fast(1e8));
    CHECK(std::count(zeros.bits.begin(), zeros.bits.end(), 1) == 0);
    CHECK(zeros.ones_fraction == 0.0);
    const auto ones = generate_bits(p, point(0.8, 0.0), 200, 1, fast(1e8));
    CHECK(std::count(ones.bits.begin(), ones.bits.end(), 1) == 200);
    CHECK(ones.ones_fraction == 1.0);
    CHECK_THROWS_AS(generate_bits(p, point(0.8, std::nan("")), 10, 1, fast(1e8)), DomainError);
    CHECK_THROWS_AS(generate_bits(p, point(0.8, 1.0), 0, 1, fast(1e8)), DomainError);
  }

  TEST_CASE("metadata") {
    const PhysicalParams p = reference_params();
    const auto bs = generate_bits(p, point(0.8, 4000.0), 500, 3, fast(1e8));
    CHECK(bs.size() == 500);
    CHECK(bs.steps_per_sample == 10'000);
    CHECK(bs.f_s == doctest::Approx(1e8));
    CHECK(bs.simulated_time == doctest::Approx(500 / bs.f_s));
    BitStream copy = bs;
    copy.refresh_summary();
    CHECK(copy.ones_fraction == bs.ones_fraction);
    CHECK(copy.simulated_time == doctest::Approx(bs.simulated_time));
    CHECK(bs.boundary == 4000.0);
    CHECK(bs.seed == 3);
  }

  TEST_CASE("bits are reproducible from the stored trajectory") {
    const PhysicalParams p = reference_params();
    const BalancePoint bp = point(0.7977, 3900.0);
    const BitGenOptions o = fast(5e7);
    const auto bs = generate_bits(p, bp, 1000, 42, o);

    BitSource src(p, bp, 42, o);
    PhysicalParams at = p;
    at.omega_pump1 = bp.omega1_star;
    const Trajectory t = integrate(at, src.equivalent_sim_config(1000));
    CHECK(bits_from_trajectory(t, bp.boundary) == bs.bits);

    std::vector<std::uint8_t> streamed;
    const auto meta = generate_bits_to(
        p, bp, 1000, 42, [&](std::span<const std::uint8_t> b) { streamed.insert(streamed.end(), b.begin(), b.end()); },
        o, 64);
    CHECK(streamed == bs.bits);
    CHECK(meta.bits.empty());
    CHECK(meta.ones_fraction == bs.ones_fraction);
  }

  TEST_CASE("slower sampling decorrelates neighbouring bits") {
    const PhysicalParams p = reference_params();
    const BalancePoint bp = point(0.7977, 3900.0);
    const auto dense = generate_bits(p, bp, 1500, 9, fast(1.0 / 4.5e-9));
    const auto sparse = generate_bits(p, bp, 1500, 9, fast(1.0 / 18e-9));
    const double r_dense = bit_autocorrelation(dense.bits), r_sparse = bit_autocorrelation(sparse.bits);
    CHECK(r_dense > 0.0);
    CHECK(std::abs(r_sparse) < std::abs(r_dense));
  }

  TEST_CASE("comparator on recorded samples") {
    const std::vector<double> x{1, 5, 2, 6, 3, 7};
    CHECK(bits_from_samples(x, 4.0) == std::vector<std::uint8_t>{0, 1, 0, 1, 0, 1});
    CHECK(bits_from_samples(x, 4.0, 2) == std::vector<std::uint8_t>{1, 1, 1});
    CHECK(bits_from_samples(x, 6.0) == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 1});
    CHECK_THROWS_AS(bits_from_samples(x, 4.0, 0), DomainError);
  }

  TEST_CASE("lag autocorrelation") {
    std::vector<std::uint8_t> alt(100);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
    CHECK(bit_autocorrelation(alt) == doctest::Approx(-0.99).epsilon(1e-9));
    CHECK(bit_autocorrelation(alt, 2) == doctest::Approx(0.98).epsilon(1e-9));
    const std::vector<std::uint8_t> flat(50, 1);
    CHECK(bit_autocorrelation(flat) == 0.0);
    CHECK_THROWS_AS(bit_autocorrelation(std::vector<std::uint8_t>{1, 0}), DomainError);
  }
}
