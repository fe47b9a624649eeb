#include "digitprime/arith.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "digitprime/kahan.hpp"

namespace digitprime {

namespace {

void check_bits(int n, int max_bits) {
    if (n < 1) throw std::invalid_argument("bit-length n=" + std::to_string(n) + " must be >= 1");
    if (n > max_bits) {
        throw BudgetExceeded("bit-length n=" + std::to_string(n) + " exceeds the limit " + std::to_string(max_bits));
    }
}

std::uint64_t isqrt(std::uint64_t v) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

std::string_view to_string(ArithKind kind) {
    return kind == ArithKind::vonMangoldt ? "vonMangoldt" : "moebius";
}

ArithKind parse_arith_kind(std::string_view text) {
    if (text == "lambda" || text == "vonmangoldt" || text == "vonMangoldt") return ArithKind::vonMangoldt;
    if (text == "mu" || text == "moebius") return ArithKind::moebius;
    throw std::invalid_argument("unknown arithmetic function '" + std::string(text) + "'");
}

ArithTable::ArithTable(int n, ArithKind kind, std::vector<double> values)
    : n_(n), kind_(kind), values_(std::move(values)) {
    check_bits(n, 62);
    if (values_.size() != (std::uint64_t{1} << n)) {
        throw std::invalid_argument("ArithTable: expected 2^n values");
    }
    values_[0] = 0.0;
}

ArithTable ArithTable::zeros(int n, ArithKind kind) {
    return ArithTable(n, kind, std::vector<double>(std::uint64_t{1} << n, 0.0));
}

BasePrimes::BasePrimes(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes_.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
    }
}

WindowFiller::WindowFiller(std::shared_ptr<const BasePrimes> base, ArithKind kind)
    : base_(std::move(base)), kind_(kind) {}

SieveWindow WindowFiller::fill(std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) throw std::invalid_argument("WindowFiller: empty window");
    values_.assign(hi - lo, 0.0);
    if (kind_ == ArithKind::vonMangoldt) {
        fill_von_mangoldt(lo, hi);
    } else {
        fill_moebius(lo, hi);
    }
    return SieveWindow{0, lo, hi, values_};
}

void WindowFiller::fill_von_mangoldt(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t len = hi - lo;
    composite_.assign(len, 0);
    const auto primes = base_->primes();
    for (const std::uint64_t p : primes) {
        if (p * p >= hi) break;
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        for (std::uint64_t m = start; m < hi; m += p) composite_[m - lo] = 1;
    }
    for (std::uint64_t i = 0; i < len; ++i) {
        const std::uint64_t x = lo + i;
        if (x >= 2 && composite_[i] == 0) values_[i] = std::log(static_cast<double>(x));
    }
    // Higher prime powers p^m, m >= 2, all have p below sqrt(hi).
    for (const std::uint64_t p : primes) {
        if (p * p >= hi) break;
        const double log_p = std::log(static_cast<double>(p));
        for (std::uint64_t pk = p * p; pk < hi; pk *= p) {
            if (pk >= lo) values_[pk - lo] = log_p;
            if (pk > hi / p) break;
        }
    }
}

void WindowFiller::fill_moebius(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t len = hi - lo;
    product_.assign(len, 1);
    std::fill(values_.begin(), values_.end(), 1.0);
    for (const std::uint64_t p : base_->primes()) {
        if (p * p >= hi) break;
        for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
            values_[m - lo] = -values_[m - lo];
            product_[m - lo] *= p;
        }
        const std::uint64_t sq = p * p;
        for (std::uint64_t m = (lo + sq - 1) / sq * sq; m < hi; m += sq) values_[m - lo] = 0.0;
    }
    // A squarefree cofactor left over is a single prime above sqrt(hi).
    for (std::uint64_t i = 0; i < len; ++i) {
        if (values_[i] != 0.0 && product_[i] != lo + i) values_[i] = -values_[i];
    }
    if (lo == 0) values_[0] = 0.0;
}

WindowPlan::WindowPlan(int bits, const StreamOptions& opts) : n(bits) {
    check_bits(bits, kMaxStreamBits);
    if (opts.segment_size == 0 || !std::has_single_bit(opts.segment_size)) {
        throw std::invalid_argument("segment size must be a power of two");
    }
    segment = std::min(opts.segment_size, std::uint64_t{1} << bits);
    count = (std::uint64_t{1} << bits) / segment;
}

namespace detail {

std::shared_ptr<const BasePrimes> base_primes_for_bits(int n) {
    check_bits(n, kMaxStreamBits);
    return std::make_shared<const BasePrimes>(isqrt((std::uint64_t{1} << n) - 1));
}

void run_windows(const WindowPlan& plan, ArithKind kind,
                 const std::shared_ptr<const BasePrimes>& base, std::uint64_t first,
                 std::uint64_t count, unsigned threads,
                 const std::function<void(const SieveWindow&)>& visitor) {
    auto work = [&](std::uint64_t begin, std::uint64_t stride) {
        WindowFiller filler(base, kind);
        for (std::uint64_t i = first + begin; i < first + count; i += stride) {
            SieveWindow w = filler.fill(plan.lo(i), plan.hi(i));
            w.index = i;
            visitor(w);
        }
    };
    const std::uint64_t workers = std::min<std::uint64_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        work(0, 1);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
}

}  // namespace detail

ArithTable sieve_table(int n, ArithKind kind, const Budget& budget) {
    check_bits(n, kMaxStreamBits);
    budget.require_dense(n, sizeof(double), "sieve_table");
    std::vector<double> values(std::uint64_t{1} << n, 0.0);
    stream_windows(n, kind, std::uint64_t{1} << 16, [&](const SieveWindow& w) {
        std::copy(w.values.begin(), w.values.end(), values.begin() + static_cast<std::ptrdiff_t>(w.lo));
    });
    return ArithTable(n, kind, std::move(values));
}

void stream_windows(int n, ArithKind kind, std::uint64_t segment_size,
                    const std::function<void(const SieveWindow&)>& visitor) {
    const WindowPlan plan(n, StreamOptions{segment_size, 1});
    detail::run_windows(plan, kind, detail::base_primes_for_bits(n), 0, plan.count, 1, visitor);
}

double chebyshev_psi(int n, const StreamOptions& opts) {
    const KahanSum total = reduce_windows(
        n, ArithKind::vonMangoldt, opts, KahanSum{},
        [](const SieveWindow& w) {
            KahanSum s;
            for (const double v : w.values) {
                if (v != 0.0) s.add(v);
            }
            return s;
        },
        [](KahanSum& acc, const KahanSum& part) { acc.merge(part); });
    return total.value();
}

}  // namespace digitprime
