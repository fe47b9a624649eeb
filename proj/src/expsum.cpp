#include "digitprime/expsum.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "digitprime/kahan.hpp"

namespace digitprime {

namespace {

constexpr double kPi = std::numbers::pi;

void check_lambda(double lambda) {
    if (!(std::fabs(lambda) <= kPi + 1e-12)) throw std::invalid_argument("lambda outside [-pi, pi]");
}

class ComplexSum {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    Complex value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_;
    KahanSum im_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// |U^_lambda(xi)| via the digit product of |cos((lambda - theta_j) / 2)|,
// theta_j = 2 pi (2^j xi mod 2^n) / 2^n.
double u_fourier_abs(int n, double lambda, std::uint64_t xi) {
    const std::uint64_t mod_mask = (std::uint64_t{1} << n) - 1;
    double prod = 1.0;
    for (int j = 0; j < n && prod != 0.0; ++j) {
        const std::uint64_t v = (xi << j) & mod_mask;
        const double theta = std::ldexp(2.0 * kPi * static_cast<double>(v), -n);
        prod *= std::fabs(std::cos(0.5 * (lambda - theta)));
    }
    return prod;
}

}  // namespace

Complex exp_sum(const DigitClassSums& sums, double lambda) {
    check_lambda(lambda);
    ComplexSum total;
    for (int k = 0; k <= sums.n; ++k) {
        if (sums.s[k] != 0.0) total.add(sums.s[k] * std::polar(1.0, lambda * k));
    }
    return total.value();
}

Complex exp_sum(int n, double lambda, const StreamOptions& opts) {
    check_lambda(lambda);
    return exp_sum(digit_class_sums(n, opts), lambda);
}

ExpSumSeries exp_sum_series(const DigitClassSums& sums, std::vector<double> grid) {
    ExpSumSeries out{sums.n, std::move(grid), {}};
    out.values.reserve(out.grid.size());
    for (const double lambda : out.grid) out.values.push_back(exp_sum(sums, lambda));
    return out;
}

std::vector<double> inversion_grid(int n) {
    if (n < 1) throw std::invalid_argument("inversion_grid: n must be >= 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (int t = 0; t <= n; ++t) {
        double lambda = 2.0 * kPi * t / (n + 1);
        if (lambda > kPi) lambda -= 2.0 * kPi;
        grid.push_back(lambda);
    }
    return grid;
}

std::vector<double> recover_class_sums(const ExpSumSeries& series) {
    const auto expected = inversion_grid(series.n);
    if (series.grid.size() != expected.size() || series.values.size() != expected.size()) {
        throw std::invalid_argument("recover_class_sums: series is not on the inversion grid");
    }
    for (std::size_t t = 0; t < expected.size(); ++t) {
        if (std::fabs(series.grid[t] - expected[t]) > 1e-12) {
            throw std::invalid_argument("recover_class_sums: series is not on the inversion grid");
        }
    }
    const int n = series.n;
    std::vector<double> s(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        ComplexSum acc;
        for (int t = 0; t <= n; ++t) acc.add(series.values[t] * std::polar(1.0, -series.grid[t] * k));
        s[k] = acc.value().real() / (n + 1);
    }
    return s;
}

Complex u_fourier_coefficient(int n, double lambda, std::uint64_t xi) {
    if (n < 1 || n > 62) throw std::invalid_argument("u_fourier_coefficient: n outside [1, 62]");
    const std::uint64_t mod_mask = (std::uint64_t{1} << n) - 1;
    xi &= mod_mask;
    const Complex rotation = std::polar(1.0, lambda);
    Complex prod = 1.0;
    for (int j = 0; j < n; ++j) {
        const std::uint64_t v = (xi << j) & mod_mask;
        const double theta = std::ldexp(2.0 * kPi * static_cast<double>(v), -n);
        prod *= 0.5 * (1.0 + rotation * std::polar(1.0, -theta));
    }
    return prod;
}

UFourierMax u_fourier_max(int n, double lambda, std::uint64_t sample_budget) {
    if (n < 1 || n > 62) throw std::invalid_argument("u_fourier_max: n outside [1, 62]");
    const std::uint64_t size = std::uint64_t{1} << n;
    UFourierMax out;
    out.exhaustive = size <= sample_budget;
    if (!out.exhaustive && sample_budget < kMinFourierSamples) {
        throw std::invalid_argument("u_fourier_max: sample budget below 4096");
    }
    auto consider = [&](std::uint64_t xi) {
        const double v = u_fourier_abs(n, lambda, xi);
        ++out.evaluated;
        if (v > out.max || out.evaluated == 1) {
            out.max = v;
            out.argmax = xi;
        }
    };
    if (out.exhaustive) {
        for (std::uint64_t xi = 0; xi < size; ++xi) consider(xi);
        return out;
    }
    const std::uint64_t strata = std::bit_floor(sample_budget);
    const std::uint64_t stride = size / strata;
    for (std::uint64_t i = 0; i < strata; ++i) {
        const std::uint64_t offset = i == 0 ? 0 : splitmix64(i) % stride;
        consider(i * stride + offset);
    }
    return out;
}

double walsh_char_fourier_magnitude(int m, SubsetMask s, std::uint64_t r) {
    if (m < 1 || m > 62) throw std::invalid_argument("walsh_char_fourier_magnitude: m outside [1, 62]");
    const std::uint64_t mod_mask = (std::uint64_t{1} << m) - 1;
    if (r > mod_mask) throw std::invalid_argument("walsh_char_fourier_magnitude: r >= 2^m");
    if ((s & ~mod_mask) != 0) throw std::invalid_argument("walsh_char_fourier_magnitude: S not inside [0, m)");
    double prod = 1.0;
    for (int j = 0; j < m; ++j) {
        // pi 2^j phi reduced mod pi
        const std::uint64_t v = (r << j) & mod_mask;
        const double angle = std::ldexp(kPi * static_cast<double>(v), -m);
        prod *= ((s >> j) & 1) != 0 ? std::fabs(std::sin(angle)) : std::fabs(std::cos(angle));
    }
    return prod;
}

RationalApprox rational_scan(int m, std::uint64_t r, std::uint64_t max_q) {
    if (m < 0 || m > 62) throw std::invalid_argument("rational_scan: m outside [0, 62]");
    if (max_q < 1 || max_q >= (std::uint64_t{1} << 32)) throw std::invalid_argument("rational_scan: Q outside [1, 2^32)");
    const std::uint64_t den = std::uint64_t{1} << m;
    if (r >= den) throw std::invalid_argument("rational_scan: r >= 2^m");

    // Convergents p/q of r / 2^m while q <= Q.
    std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    std::uint64_t num = r, rem = den;
    while (true) {
        const std::uint64_t a = num / rem;
        const Int128 q2_wide = static_cast<Int128>(q0) + static_cast<Int128>(a) * q1;
        if (q2_wide > static_cast<Int128>(max_q)) break;
        const auto q2 = static_cast<std::uint64_t>(q2_wide);
        const std::uint64_t p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const std::uint64_t next = num - a * rem;
        num = rem;
        rem = next;
        if (rem == 0) break;
    }

    RationalApprox out;
    out.m = m;
    out.r = r;
    out.a = p1;
    out.q = q1;
    const Int128 diff = static_cast<Int128>(r) * out.q - static_cast<Int128>(out.a) * den;
    out.theta = static_cast<double>(static_cast<long double>(diff) /
                                    (static_cast<long double>(out.q) * static_cast<long double>(den)));
    return out;
}

void BilinearSumConfig::validate_shape() const {
    if (n < 2 || n > kMaxStreamBits) {
        throw BudgetExceeded("bilinear_sum: n=" + std::to_string(n) + " outside [2, " +
                             std::to_string(kMaxStreamBits) + "]");
    }
    if (m1 < 0 || m1 > m2()) throw std::invalid_argument("bilinear_sum: need 0 <= m1 <= m2");
}

void BilinearSumConfig::validate() const {
    validate_shape();
    if (mode == BilinearMode::typeII) {
        if (a.size() != (std::uint64_t{1} << m1) || b.size() != (std::uint64_t{1} << m2())) {
            throw std::invalid_argument("bilinear_sum: coefficient lengths must be M1 and M2");
        }
        for (const double v : a) {
            if (!(std::fabs(v) <= 1.0)) throw std::invalid_argument("bilinear_sum: |a| > 1");
        }
        for (const double v : b) {
            if (!(std::fabs(v) <= 1.0)) throw std::invalid_argument("bilinear_sum: |b| > 1");
        }
    }
}

BilinearSumConfig BilinearSumConfig::type_one(int n, int m1) {
    BilinearSumConfig c{n, m1, BilinearMode::typeI, {}, {}};
    c.validate();
    return c;
}

BilinearSumConfig BilinearSumConfig::type_two_ones(int n, int m1) {
    BilinearSumConfig c{n, m1, BilinearMode::typeII, {}, {}};
    c.validate_shape();
    c.a.assign(std::uint64_t{1} << m1, 1.0);
    c.b.assign(std::uint64_t{1} << c.m2(), 1.0);
    return c;
}

BilinearSumConfig BilinearSumConfig::type_two_moebius_lambda(int n, int m1) {
    BilinearSumConfig c{n, m1, BilinearMode::typeII, {}, {}};
    c.validate_shape();
    // restriction of the arithmetic function to the top half [2^m, 2^(m+1))
    auto top_block = [](ArithKind kind, int m, double scale) {
        const std::uint64_t lo = std::uint64_t{1} << m;
        std::vector<double> out(lo, 0.0);
        stream_windows(m + 1, kind, std::uint64_t{1} << 16, [&](const SieveWindow& w) {
            for (std::uint64_t x = std::max(w.lo, lo); x < w.hi; ++x) out[x - lo] = w.value(x) * scale;
        });
        return out;
    };
    c.a = top_block(ArithKind::moebius, m1, 1.0);
    c.b = top_block(ArithKind::vonMangoldt, c.m2(), 1.0 / std::log(std::ldexp(2.0, c.m2())));
    return c;
}

BilinearSumResult bilinear_sum(const BilinearSumConfig& config, double lambda) {
    config.validate();
    check_lambda(lambda);
    std::array<Complex, 65> unit{};
    for (int k = 0; k <= 64; ++k) unit[k] = std::polar(1.0, lambda * k);
    const std::uint64_t m1_size = std::uint64_t{1} << config.m1;
    const std::uint64_t m2_size = std::uint64_t{1} << config.m2();

    BilinearSumResult out;
    if (config.mode == BilinearMode::typeI) {
        KahanSum total;
        for (std::uint64_t x1 = m1_size; x1 < 2 * m1_size; ++x1) {
            ComplexSum inner;
            for (std::uint64_t x2 = m2_size; x2 < 2 * m2_size; ++x2) inner.add(unit[digit_sum(x1 * x2)]);
            total.add(std::abs(inner.value()));
        }
        out.raw = total.value();
    } else {
        ComplexSum total;
        for (std::uint64_t i = 0; i < m1_size; ++i) {
            const double ax = config.a[i];
            if (ax == 0.0) continue;
            const std::uint64_t x1 = m1_size + i;
            ComplexSum inner;
            for (std::uint64_t j = 0; j < m2_size; ++j) {
                if (config.b[j] != 0.0) inner.add(config.b[j] * unit[digit_sum(x1 * (m2_size + j))]);
            }
            total.add(ax * inner.value());
        }
        out.raw = std::abs(total.value());
    }
    out.normalized = std::ldexp(out.raw, -config.n);
    return out;
}

}  // namespace digitprime
