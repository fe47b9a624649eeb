#include "digitprime/digitclass.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "digitprime/kahan.hpp"
#include "digitprime/walsh.hpp"

namespace digitprime {

namespace {

void check_class(const DigitClassSums& sums, int k) {
    if (k < 0 || k > sums.n) throw std::invalid_argument("class index k outside [0, n]");
}

}  // namespace

DigitClassSums make_digit_class_sums(int n, std::vector<double> s) {
    if (n < 1 || s.size() != static_cast<std::size_t>(n) + 1) {
        throw std::invalid_argument("digit class sums need n + 1 entries");
    }
    KahanSum total;
    for (const double v : s) total.add(v);
    return DigitClassSums{n, std::move(s), total.value()};
}

DigitClassSums digit_class_sums(int n, const StreamOptions& opts) {
    using Buckets = std::vector<KahanSum>;
    const std::size_t classes = static_cast<std::size_t>(n) + 1;
    const Buckets totals = reduce_windows(
        n, ArithKind::vonMangoldt, opts, Buckets(classes),
        [classes](const SieveWindow& w) {
            Buckets part(classes);
            for (std::uint64_t x = w.lo; x < w.hi; ++x) {
                const double v = w.value(x);
                if (v != 0.0) part[digit_sum(x)].add(v);
            }
            return part;
        },
        [](Buckets& acc, const Buckets& part) {
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k].merge(part[k]);
        });
    std::vector<double> s;
    s.reserve(classes);
    for (const auto& b : totals) s.push_back(b.value());
    return make_digit_class_sums(n, std::move(s));
}

DigitClassSums digit_class_sums(const ArithTable& table) {
    const int n = table.bits();
    std::vector<KahanSum> buckets(static_cast<std::size_t>(n) + 1);
    const auto values = table.values();
    for (std::uint64_t x = 1; x < values.size(); ++x) {
        if (values[x] != 0.0) buckets[digit_sum(x)].add(values[x]);
    }
    std::vector<double> s;
    for (const auto& b : buckets) s.push_back(b.value());
    return make_digit_class_sums(n, std::move(s));
}

double symmetrized_value(const DigitClassSums& sums, int k) {
    check_class(sums, k);
    if (sums.s[k] == 0.0) return 0.0;
    return sums.s[k] / static_cast<double>(static_cast<long double>(binomial(sums.n, k)));
}

double symmetrized_inner_product(const DigitClassSums& sums, const BooleanFunctionSpec& spec) {
    if (spec.bits() != sums.n) throw std::invalid_argument("symmetrized_inner_product: bit-length mismatch");
    KahanSum total;
    for (int k = 0; k <= sums.n; ++k) total.add(sums.s[k] * spec.class_average(k));
    return total.value();
}

double central_moment(const DigitClassSums& sums, int order) {
    if (order < 0 || order > kMaxMomentOrder) {
        throw std::invalid_argument("moment order R outside [0, " + std::to_string(kMaxMomentOrder) + "]");
    }
    KahanSum total;
    for (int k = 0; k <= sums.n; ++k) {
        const double d = 0.5 * sums.n - k;
        total.add(sums.s[k] * std::pow(d * d, order));
    }
    return total.value();
}

TailReport tail_mass(const DigitClassSums& sums, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("tail_mass: delta must be >= 0");
    const double radius = delta * std::sqrt(static_cast<double>(sums.n));
    KahanSum mass;
    for (int k = 0; k <= sums.n; ++k) {
        if (std::fabs(k - 0.5 * sums.n) >= radius) mass.add(sums.s[k]);
    }
    TailReport out;
    out.delta = delta;
    out.mass = mass.value();
    out.normalized = std::ldexp(out.mass, -sums.n);
    return out;
}

double max_central_class(const DigitClassSums& sums, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("max_central_class: window must be > 0");
    const double radius = window * std::sqrt(static_cast<double>(sums.n));
    double best = 0.0;
    for (int k = 0; k <= sums.n; ++k) {
        if (std::fabs(k - 0.5 * sums.n) <= radius) best = std::max(best, sums.s[k]);
    }
    return std::ldexp(best, -sums.n);
}

}  // namespace digitprime
