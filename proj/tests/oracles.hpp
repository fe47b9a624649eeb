#pragma once

// Brute-force reference computations for the test suites. Nothing here
// calls into the library paths under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline int popcount(std::uint64_t x) {
    int c = 0;
    for (; x != 0; x >>= 1) c += static_cast<int>(x & 1);
    return c;
}

// Lambda(x) by trial division.
inline double von_mangoldt(std::uint64_t x) {
    if (x < 2) return 0.0;
    for (std::uint64_t p = 2; p * p <= x; ++p) {
        if (x % p != 0) continue;
        std::uint64_t y = x;
        while (y % p == 0) y /= p;
        return y == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(x));
}

// mu(x) by trial division.
inline int moebius(std::uint64_t x) {
    if (x == 0) return 0;
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= x; ++p) {
        if (x % p != 0) continue;
        x /= p;
        if (x % p == 0) return 0;
        sign = -sign;
    }
    if (x > 1) sign = -sign;
    return sign;
}

inline std::vector<double> von_mangoldt_table(int n) {
    std::vector<double> t(std::uint64_t{1} << n);
    for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = von_mangoldt(x);
    return t;
}

// Count of squarefree x in [1, limit) by crossing out multiples of p^2.
inline std::uint64_t squarefree_count(std::uint64_t limit) {
    std::vector<bool> bad(limit, false);
    for (std::uint64_t d = 2; d * d < limit; ++d) {
        for (std::uint64_t m = d * d; m < limit; m += d * d) bad[m] = true;
    }
    std::uint64_t c = 0;
    for (std::uint64_t x = 1; x < limit; ++x) c += bad[x] ? 0 : 1;
    return c;
}

inline int walsh(std::uint64_t s, std::uint64_t x) {
    int w = 1;
    for (int j = 0; j < 64; ++j) {
        if (((s >> j) & 1) != 0 && ((x >> j) & 1) != 0) w = -w;
    }
    return w;
}

// g^(S) = 2^-n sum_x g(x) w_S(x), O(4^n).
inline std::vector<double> slow_walsh_transform(const std::vector<double>& g) {
    std::vector<double> out(g.size(), 0.0);
    for (std::uint64_t s = 0; s < g.size(); ++s) {
        double acc = 0.0;
        for (std::uint64_t x = 0; x < g.size(); ++x) acc += g[x] * walsh(s, x);
        out[s] = acc / static_cast<double>(g.size());
    }
    return out;
}

// In-place butterfly written independently of the library's.
inline std::vector<double> reference_walsh_transform(std::vector<double> g) {
    for (std::size_t half = g.size() / 2; half >= 1; half /= 2) {
        for (std::size_t start = 0; start < g.size(); start += 2 * half) {
            for (std::size_t i = 0; i < half; ++i) {
                const double u = g[start + i];
                const double v = g[start + i + half];
                g[start + i] = u + v;
                g[start + i + half] = u - v;
            }
        }
    }
    for (double& v : g) v /= static_cast<double>(g.size());
    return g;
}

inline std::vector<double> majority_table(int n) {
    std::vector<double> t(std::uint64_t{1} << n);
    for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = 2 * popcount(x) > n ? 1.0 : 0.0;
    return t;
}

// sum over x with popcount j (x < 2^n) of w_S(x), S = {0..k-1}.
inline long long brute_class_sum(int n, int k, int j) {
    const std::uint64_t s = (std::uint64_t{1} << k) - 1;
    long long total = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        if (popcount(x) == j) total += walsh(s, x);
    }
    return total;
}

// (1/2^n) sum_x f(x) e^{-2 pi i x xi / 2^n}
inline std::complex<double> dft_coefficient(const std::vector<std::complex<double>>& f, std::uint64_t xi) {
    const double size = static_cast<double>(f.size());
    std::complex<double> acc = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>((x * xi) % f.size()) / size;
        acc += f[x] * std::polar(1.0, angle);
    }
    return acc / size;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct Fraction {
    std::uint64_t a = 0;
    std::uint64_t q = 1;
};

// a/q minimizing |q r / 2^m - a| over q <= max_q; ties keep the smaller q
// and, for a, the smaller numerator.
inline Fraction brute_best_approx(int m, std::uint64_t r, std::uint64_t max_q) {
    const std::int64_t den = std::int64_t{1} << m;
    Fraction best{0, 1};
    std::int64_t best_gap = static_cast<std::int64_t>(r);
    for (std::uint64_t q = 1; q <= max_q; ++q) {
        const std::int64_t rq = static_cast<std::int64_t>(r * q);
        const std::int64_t a = rq / den;
        std::int64_t gap = rq - a * den;
        std::int64_t pick = a;
        if (den - gap < gap) {
            gap = den - gap;
            pick = a + 1;
        }
        if (gap < best_gap) {
            best_gap = gap;
            const auto g = gcd(static_cast<std::uint64_t>(pick), q);
            best = {static_cast<std::uint64_t>(pick) / g, q / g};
        }
    }
    return best;
}

inline std::vector<double> random_vector(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(size);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace oracle
