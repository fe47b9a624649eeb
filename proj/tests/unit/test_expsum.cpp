#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "digitprime/arith.hpp"
#include "digitprime/digitclass.hpp"
#include "digitprime/expsum.hpp"
#include "oracles.hpp"

using namespace digitprime;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::complex<double>> u_table(int n, double lambda) {
    std::vector<std::complex<double>> f(std::size_t{1} << n);
    for (std::uint64_t x = 0; x < f.size(); ++x) f[x] = std::polar(1.0, lambda * oracle::popcount(x));
    return f;
}

}  // namespace

TEST_CASE("exponential sums at special frequencies") {
    const auto sums = digit_class_sums(16);
    const auto at0 = exp_sum(sums, 0.0);
    CHECK(at0.real() == doctest::Approx(sums.psi).epsilon(1e-14));
    CHECK(at0.imag() == 0.0);

    double alt = 0.0;
    for (int k = 0; k <= 16; ++k) alt += (k % 2 == 0 ? 1.0 : -1.0) * sums.s[k];
    const auto atpi = exp_sum(sums, kPi);
    CHECK(atpi.real() == doctest::Approx(alt).epsilon(1e-9));
    CHECK(std::fabs(atpi.imag()) <= 1e-9 * sums.psi);

    // Conjugate symmetry of a real weighting.
    const auto p = exp_sum(sums, 0.9);
    const auto m = exp_sum(sums, -0.9);
    CHECK(p.real() == doctest::Approx(m.real()).epsilon(1e-14));
    CHECK(p.imag() == doctest::Approx(-m.imag()).epsilon(1e-14));

    CHECK_THROWS_AS(exp_sum(sums, 3.2), std::invalid_argument);
}

TEST_CASE("exponential sum by two independent paths at n=16") {
    const int n = 16;
    const double lambda = 0.7;
    const auto table = oracle::von_mangoldt_table(n);
    std::complex<double> direct = 0.0;
    for (std::uint64_t x = 1; x < table.size(); ++x) {
        if (table[x] != 0.0) direct += table[x] * std::polar(1.0, lambda * oracle::popcount(x));
    }
    const auto streamed = exp_sum(n, lambda, StreamOptions{1 << 10, 2});
    CHECK(std::abs(streamed - direct) <= 1e-9 * std::abs(direct));
}

TEST_CASE("inversion grid") {
    const auto g = inversion_grid(6);
    REQUIRE(g.size() == 7);
    CHECK(g[0] == 0.0);
    for (const double l : g) CHECK(std::fabs(l) <= kPi);
    CHECK(g[1] == doctest::Approx(2 * kPi / 7));
    CHECK(g[6] == doctest::Approx(-2 * kPi / 7));

    ExpSumSeries bad{6, {0.0, 0.1}, {0.0, 0.0}};
    CHECK_THROWS_AS(recover_class_sums(bad), std::invalid_argument);
}

TEST_CASE("Fourier coefficients of U_lambda") {
    const double lambda = 1.3;
    const auto at0 = u_fourier_coefficient(10, lambda, 0);
    const auto expected = std::pow(0.5 * (1.0 + std::polar(1.0, lambda)), 10);
    CHECK(std::abs(at0 - expected) <= 1e-14);
    for (const std::uint64_t xi : {1ull, 7ull, 512ull, 1023ull}) {
        CHECK(std::abs(u_fourier_coefficient(10, 0.0, xi)) <= 1e-15);
    }

    const int n = 12;
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lam(-kPi, kPi);
    for (int trial = 0; trial < 6; ++trial) {
        const double l = lam(rng);
        const auto f = u_table(n, l);
        for (int probe = 0; probe < 5; ++probe) {
            const std::uint64_t xi = rng() % f.size();
            CHECK(std::abs(u_fourier_coefficient(n, l, xi) - oracle::dft_coefficient(f, xi)) <= 1e-9);
        }
    }
}

TEST_CASE("U_lambda coefficients are bounded and periodic in xi") {
    for (std::uint64_t xi = 0; xi < 4096; xi += 37) {
        const auto c = u_fourier_coefficient(12, 2.1, xi);
        CHECK(std::abs(c) <= 1.0 + 1e-15);
        CHECK(std::abs(c - u_fourier_coefficient(12, 2.1, xi + 4096)) <= 1e-15);
    }
}

TEST_CASE("maximum of the U_lambda spectrum") {
    const auto zero = u_fourier_max(14, 0.0, std::uint64_t{1} << 14);
    CHECK(zero.exhaustive);
    CHECK(zero.max == doctest::Approx(1.0));
    CHECK(zero.argmax == 0);
    CHECK(zero.evaluated == (1u << 14));

    const auto full = u_fourier_max(16, kPi, std::uint64_t{1} << 16);
    double brute = 0.0;
    for (std::uint64_t xi = 0; xi < (1u << 16); ++xi) brute = std::max(brute, std::abs(u_fourier_coefficient(16, kPi, xi)));
    CHECK(full.max == doctest::Approx(brute).epsilon(1e-12));

    const auto sampled = u_fourier_max(20, kPi, 1 << 14);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.evaluated == (1u << 14));
    CHECK(sampled.max <= u_fourier_max(20, kPi, std::uint64_t{1} << 20).max);
    CHECK(sampled.max < u_fourier_max(20, 0.2, 1 << 14).max);
    CHECK(u_fourier_max(20, 1.0, 1 << 14).max == u_fourier_max(20, 1.0, 1 << 14).max);

    CHECK_THROWS_AS(u_fourier_max(20, 1.0, 100), std::invalid_argument);
}

TEST_CASE("Fourier magnitudes of Walsh characters") {
    CHECK(walsh_char_fourier_magnitude(5, 0, 0) == 1.0);
    CHECK(walsh_char_fourier_magnitude(5, 3, 0) == 0.0);
    CHECK(walsh_char_fourier_magnitude(1, 1, 1) == doctest::Approx(1.0));
    for (int m = 1; m <= 8; ++m) {
        const std::uint64_t size = std::uint64_t{1} << m;
        for (SubsetMask s = 0; s < size; s += (m > 5 ? 7 : 1)) {
            std::vector<std::complex<double>> f(size);
            for (std::uint64_t x = 0; x < size; ++x) f[x] = oracle::walsh(s, x);
            for (std::uint64_t r = 0; r < size; ++r) {
                REQUIRE(walsh_char_fourier_magnitude(m, s, r) ==
                        doctest::Approx(std::abs(oracle::dft_coefficient(f, r))).epsilon(1e-9));
            }
        }
    }
    CHECK_THROWS_AS(walsh_char_fourier_magnitude(4, 16, 0), std::invalid_argument);
    CHECK_THROWS_AS(walsh_char_fourier_magnitude(4, 1, 16), std::invalid_argument);
}

TEST_CASE("rational approximation examples") {
    const auto half = rational_scan(10, 512, 50);
    CHECK(half.a == 1);
    CHECK(half.q == 2);
    CHECK(half.theta == 0.0);

    const auto zero = rational_scan(10, 0, 50);
    CHECK(zero.a == 0);
    CHECK(zero.q == 1);
    CHECK(zero.theta == 0.0);

    const auto third = rational_scan(10, 341, 10);
    CHECK(third.a == 1);
    CHECK(third.q == 3);
    CHECK(third.theta == doctest::Approx(341.0 / 1024 - 1.0 / 3).epsilon(1e-14));

    CHECK_THROWS_AS(rational_scan(10, 1024, 10), std::invalid_argument);
    CHECK_THROWS_AS(rational_scan(10, 1, 0), std::invalid_argument);
}

TEST_CASE("rational approximation agrees with exhaustive search") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 3000; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 24);
        const std::uint64_t r = rng() % (std::uint64_t{1} << m);
        const std::uint64_t max_q = 1 + rng() % 2000;
        const auto got = rational_scan(m, r, max_q);
        const auto want = oracle::brute_best_approx(m, r, max_q);
        REQUIRE(got.q <= max_q);
        CHECK(oracle::gcd(got.a, got.q) == 1);
        CHECK(got.a == want.a);
        CHECK(got.q == want.q);
        CHECK(std::fabs(got.theta) <= 1.0 / (static_cast<double>(got.q) * (max_q + 1)) + 1e-15);
    }
}

TEST_CASE("bilinear sums") {
    const auto one = BilinearSumConfig::type_one(12, 4);
    const auto flat = bilinear_sum(one, 0.0);
    CHECK(flat.raw == doctest::Approx(4096.0).epsilon(1e-12));
    CHECK(flat.normalized == doctest::Approx(1.0).epsilon(1e-12));

    for (const double lambda : {0.3, 1.1, kPi}) {
        const double t1 = bilinear_sum(one, lambda).raw;
        const double t2 = bilinear_sum(BilinearSumConfig::type_two_ones(12, 4), lambda).raw;
        CHECK(t2 <= t1 * (1 + 1e-12));
    }

    // Direct double loop for type I.
    const int n = 10;
    const int m1 = 3;
    const double lambda = 2.0;
    double direct = 0.0;
    for (std::uint64_t x1 = 8; x1 < 16; ++x1) {
        std::complex<double> inner = 0.0;
        for (std::uint64_t x2 = 128; x2 < 256; ++x2) inner += std::polar(1.0, lambda * oracle::popcount(x1 * x2));
        direct += std::abs(inner);
    }
    CHECK(bilinear_sum(BilinearSumConfig::type_one(n, m1), lambda).raw == doctest::Approx(direct).epsilon(1e-12));

    const auto pi20 = bilinear_sum(BilinearSumConfig::type_one(20, 6), kPi);
    CHECK(pi20.normalized < 0.2);

    const auto ml = BilinearSumConfig::type_two_moebius_lambda(12, 4);
    CHECK(ml.a.size() == 16);
    CHECK(ml.b.size() == 256);
    CHECK(ml.a[1] == -1.0);  // mu(17)
    CHECK(ml.a[2] == 0.0);   // mu(18)
    CHECK(ml.a[5] == 1.0);   // mu(21)
    CHECK(ml.b[3] == 0.0);  // 259 = 7 * 37
    CHECK(ml.b[1] == doctest::Approx(std::log(257.0) / std::log(512.0)));

    CHECK(bilinear_sum(ml, 1.0).raw <= bilinear_sum(BilinearSumConfig::type_one(12, 4), 1.0).raw);

    CHECK_THROWS_AS(BilinearSumConfig::type_one(12, 7), std::invalid_argument);
    CHECK_THROWS_AS(bilinear_sum(one, 4.0), std::invalid_argument);
    BilinearSumConfig bad = BilinearSumConfig::type_two_ones(8, 2);
    bad.a[0] = 2.0;
    CHECK_THROWS_AS(bilinear_sum(bad, 1.0), std::invalid_argument);
}
