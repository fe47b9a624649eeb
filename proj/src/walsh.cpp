#include "digitprime/walsh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "digitprime/kahan.hpp"

namespace digitprime {

namespace {

Int128 checked_add(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("128-bit overflow in class sum");
    return r;
}

Int128 checked_mul(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("128-bit overflow in binomial");
    return r;
}

void check_level_args(int n, int k, const char* what) {
    if (n < 1 || k < 0 || k > n) {
        throw std::invalid_argument(std::string(what) + ": need 0 <= k <= n, n >= 1");
    }
}

}  // namespace

std::string to_string(Int128 v) {
    if (v == 0) return "0";
    const bool negative = v < 0;
    std::string out;
    // digits are produced from the low end; work with non-positive values
    // so INT128_MIN does not overflow on negation
    Int128 t = negative ? v : -v;
    while (t != 0) {
        out.push_back(static_cast<char>('0' - static_cast<int>(t % 10)));
        t /= 10;
    }
    if (negative) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

Int128 binomial(int n, int k) {
    if (n < 0) throw std::invalid_argument("binomial: n < 0");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    Int128 c = 1;
    for (int i = 1; i <= k; ++i) {
        // c * (n - k + i) is divisible by i since the product is C(n-k+i, i) * i
        c = checked_mul(c, n - k + i) / i;
    }
    return c;
}

SpectrumVector::SpectrumVector(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
    if (n < 0 || n > 62 || coeffs_.size() != (std::uint64_t{1} << n)) {
        throw std::invalid_argument("SpectrumVector: expected 2^n coefficients");
    }
}

double SpectrumVector::energy() const {
    KahanSum s;
    for (const double c : coeffs_) s.add(c * c);
    return s.value();
}

void hadamard_inplace(std::span<double> v) {
    const std::size_t len = v.size();
    if (len == 0 || !std::has_single_bit(len)) {
        throw std::invalid_argument("hadamard_inplace: length must be a power of two");
    }
    for (std::size_t h = 1; h < len; h *= 2) {
        for (std::size_t i = 0; i < len; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = v[j];
                const double b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

SpectrumVector fwht(std::span<const double> values, const Budget& budget) {
    if (values.empty() || !std::has_single_bit(values.size())) {
        throw std::invalid_argument("fwht: length must be a power of two");
    }
    const int n = std::countr_zero(values.size());
    budget.require_dense(n, sizeof(double), "fwht");
    std::vector<double> coeffs(values.begin(), values.end());
    hadamard_inplace(coeffs);
    for (double& c : coeffs) c = std::ldexp(c, -n);
    return SpectrumVector(n, std::move(coeffs));
}

std::vector<double> inverse_fwht(const SpectrumVector& spectrum) {
    std::vector<double> values(spectrum.coeffs().begin(), spectrum.coeffs().end());
    hadamard_inplace(values);
    return values;
}

double walsh_coefficient_streaming(int n, ArithKind kind, SubsetMask s, const StreamOptions& opts) {
    if (n < 64 && (s >> n) != 0) throw std::invalid_argument("mask has digits beyond n");
    const KahanSum total = reduce_windows(
        n, kind, opts, KahanSum{},
        [s](const SieveWindow& w) {
            KahanSum part;
            for (std::uint64_t x = w.lo; x < w.hi; ++x) {
                const double v = w.value(x);
                if (v != 0.0) part.add(walsh_character(s, x) > 0 ? v : -v);
            }
            return part;
        },
        [](KahanSum& acc, const KahanSum& part) { acc.merge(part); });
    return std::ldexp(total.value(), -n);
}

std::vector<SubsetMask> masks_of_level(int n, int k) {
    check_level_args(n, k, "masks_of_level");
    if (n > 63) throw std::invalid_argument("masks_of_level: n > 63");
    std::vector<SubsetMask> out;
    if (k == 0) return {0};
    const SubsetMask limit = SubsetMask{1} << n;
    // Gosper's hack: next larger integer with the same popcount
    for (SubsetMask s = (SubsetMask{1} << k) - 1; s < limit;) {
        out.push_back(s);
        const SubsetMask c = s & (~s + 1);
        const SubsetMask r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    return out;
}

LowLevelSpectrum low_level_coefficients_streaming(int n, ArithKind kind, int level_max,
                                                  const StreamOptions& opts) {
    if (level_max < 0) throw std::invalid_argument("level_max must be >= 0");
    LowLevelSpectrum out;
    out.n = n;
    for (int k = 0; k <= std::min(level_max, n); ++k) {
        const auto masks = masks_of_level(n, k);
        out.masks.insert(out.masks.end(), masks.begin(), masks.end());
    }
    const WindowPlan plan(n, opts);
    const int low_bits = std::countr_zero(plan.segment);
    const SubsetMask low_mask = plan.segment - 1;
    const auto& masks = out.masks;

    using Partials = std::vector<double>;
    auto totals = reduce_windows(
        n, kind, opts, std::vector<KahanSum>(masks.size()),
        [&](const SieveWindow& w) {
            // window covers the aligned block [index*segment, (index+1)*segment)
            std::vector<double> block(plan.segment, 0.0);
            const std::uint64_t base = w.index * plan.segment;
            std::copy(w.values.begin(), w.values.end(),
                      block.begin() + static_cast<std::ptrdiff_t>(w.lo - base));
            hadamard_inplace(block);
            Partials part(masks.size());
            for (std::size_t i = 0; i < masks.size(); ++i) {
                const double local = block[masks[i] & low_mask];
                const SubsetMask high = masks[i] >> low_bits;
                part[i] = walsh_character(high, w.index) > 0 ? local : -local;
            }
            return part;
        },
        [](std::vector<KahanSum>& acc, const Partials& part) {
            for (std::size_t i = 0; i < part.size(); ++i) acc[i].add(part[i]);
        });
    out.coeffs.resize(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) out.coeffs[i] = std::ldexp(totals[i].value(), -n);
    return out;
}

double LevelWeights::total() const {
    KahanSum s;
    for (const double w : weights) s.add(w);
    return s.value();
}

LevelWeights level_weights(const SpectrumVector& spectrum) {
    const int n = spectrum.bits();
    std::vector<KahanSum> sums(static_cast<std::size_t>(n) + 1);
    const auto coeffs = spectrum.coeffs();
    for (std::uint64_t s = 0; s < coeffs.size(); ++s) sums[level(s)].add(coeffs[s] * coeffs[s]);
    LevelWeights out{n, {}};
    out.weights.reserve(sums.size());
    for (const auto& s : sums) out.weights.push_back(s.value());
    return out;
}

Int128 krawtchouk_class_sum(int n, int k, int j) {
    check_level_args(n, k, "krawtchouk_class_sum");
    if (j < 0 || j > n) throw std::invalid_argument("krawtchouk_class_sum: need 0 <= j <= n");
    // i of the j ones fall inside S, each contributing a factor -1
    Int128 total = 0;
    for (int i = 0; i <= std::min(k, j); ++i) {
        const Int128 term = checked_mul(binomial(k, i), binomial(n - k, j - i));
        total = checked_add(total, (i % 2 == 0) ? term : -term);
    }
    return total;
}

double majority_level_coefficient(int n, int k) {
    if (n % 2 == 0) throw std::invalid_argument("majority needs odd n (no ties)");
    check_level_args(n, k, "majority_level_coefficient");
    Int128 total = 0;
    for (int j = (n + 1) / 2; j <= n; ++j) total = checked_add(total, krawtchouk_class_sum(n, k, j));
    return std::ldexp(static_cast<double>(static_cast<long double>(total)), -n);
}

MajorityProfile majority_spectrum_profile(int n, int k_max) {
    if (n % 2 == 0) throw std::invalid_argument("majority needs odd n (no ties)");
    check_level_args(n, k_max, "majority_spectrum_profile");
    constexpr int kExactTailBits = 13;
    MajorityProfile out;
    out.tail_exact = n <= kExactTailBits;
    const int levels = out.tail_exact ? n : k_max;
    std::vector<double> weights;
    for (int k = 0; k <= levels; ++k) {
        const double c = majority_level_coefficient(n, k);
        weights.push_back(static_cast<double>(static_cast<long double>(binomial(n, k))) * c * c);
    }
    out.tail.resize(static_cast<std::size_t>(k_max) + 1);
    if (out.tail_exact) {
        for (int k = 0; k <= k_max; ++k) {
            KahanSum t;
            for (int kk = k + 1; kk <= n; ++kk) t.add(weights[kk]);
            out.tail[k] = t.value();
        }
    } else {
        // majority is the indicator of half the cube: total energy is 1/2
        KahanSum head;
        for (int k = 0; k <= k_max; ++k) {
            head.add(weights[k]);
            out.tail[k] = std::max(0.0, 0.5 - head.value());
        }
    }
    weights.resize(static_cast<std::size_t>(k_max) + 1);
    out.levels = LevelWeights{n, std::move(weights)};
    return out;
}

}  // namespace digitprime
