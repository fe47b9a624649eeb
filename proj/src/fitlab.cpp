#include "digitprime/fitlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "digitprime/boolfn.hpp"
#include "digitprime/kahan.hpp"
#include "digitprime/walsh.hpp"

#ifndef DIGITPRIME_VERSION
#define DIGITPRIME_VERSION "0.1.0"
#endif

namespace digitprime {

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) out[order[t]] = avg;
        i = j + 1;
    }
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

void require_odd(std::span<const int> n_list) {
    for (const int n : n_list) {
        if (n % 2 == 0) throw std::invalid_argument("theorem1_scan: n=" + std::to_string(n) + " is even");
    }
}

}  // namespace

const char* code_version() { return DIGITPRIME_VERSION; }

const char* to_string(DecayModel model) { return model == DecayModel::powerLaw ? "powerLaw" : "expLaw"; }

double DecayFit::predict(double x) const {
    return model == DecayModel::powerLaw ? amplitude * std::pow(x, -exponent)
                                         : amplitude * std::exp(-exponent * x);
}

Json DecayFit::to_json() const {
    Json pts = Json::array();
    for (const auto& p : points) pts.push_back(Json::array({p.x, p.y}));
    return Json{{"model", to_string(model)},
                {"amplitude", amplitude},
                {"exponent", exponent},
                {"r_squared", r_squared},
                {"points", pts}};
}

DecayFit fit_decay(std::span<const FitPoint> points, DecayModel model) {
    if (points.size() < 3) throw std::invalid_argument("fit_decay: need at least 3 points");
    DecayFit fit;
    fit.model = model;
    fit.points.assign(points.begin(), points.end());
    // sorted input makes the fit independent of the caller's ordering
    std::sort(fit.points.begin(), fit.points.end(),
              [](const FitPoint& a, const FitPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });

    std::vector<double> u, v;
    for (const auto& p : fit.points) {
        if (!(p.y > 0.0)) throw std::invalid_argument("fit_decay: y must be > 0");
        if (model == DecayModel::powerLaw && !(p.x > 0.0)) {
            throw std::invalid_argument("fit_decay: power law needs x > 0");
        }
        u.push_back(model == DecayModel::powerLaw ? std::log(p.x) : p.x);
        v.push_back(std::log(p.y));
    }
    const double count = static_cast<double>(u.size());
    const double mu = std::accumulate(u.begin(), u.end(), 0.0) / count;
    const double mv = std::accumulate(v.begin(), v.end(), 0.0) / count;
    double suu = 0.0, suv = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
        svv += (v[i] - mv) * (v[i] - mv);
    }
    if (suu == 0.0) throw std::invalid_argument("fit_decay: degenerate input, all x equal");
    const double slope = suv / suu;
    const double intercept = mv - slope * mu;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double e = v[i] - (intercept + slope * u[i]);
        ss_res += e * e;
    }
    fit.exponent = -slope;
    fit.amplitude = std::exp(intercept);
    fit.r_squared = svv == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / svv, 0.0, 1.0);
    return fit;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length series");
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return pearson(rx, ry);
}

bool decreasing_trend(std::span<const double> values) {
    if (values.size() < 2) return false;
    if (!(values.front() > values.back())) return false;
    std::vector<double> diffs;
    for (std::size_t i = 1; i < values.size(); ++i) diffs.push_back(values[i] - values[i - 1]);
    std::sort(diffs.begin(), diffs.end());
    const std::size_t mid = diffs.size() / 2;
    const double median = diffs.size() % 2 == 1 ? diffs[mid] : 0.5 * (diffs[mid - 1] + diffs[mid]);
    return median <= 0.0;
}

Json ExperimentRecord::to_json() const {
    return Json{{"experiment", experiment},
                {"params", params},
                {"results", results},
                {"wall_time", wall_time},
                {"version", version}};
}

ScanResult theorem1_scan(std::span<const int> n_list, const StreamOptions& opts) {
    require_odd(n_list);
    ScanResult out;
    std::vector<FitPoint> points;
    for (const int n : n_list) {
        const Stopwatch clock;
        const auto majority = BooleanFunctionSpec::majority(n);
        struct Partial {
            KahanSum psi;
            KahanSum correlation;
        };
        const Partial total = reduce_windows(
            n, ArithKind::vonMangoldt, opts, Partial{},
            [&majority](const SieveWindow& w) {
                Partial part;
                for (std::uint64_t x = w.lo; x < w.hi; ++x) {
                    const double v = w.value(x);
                    if (v == 0.0) continue;
                    part.psi.add(v);
                    if (majority.evaluate(x) != 0) part.correlation.add(v);
                }
                return part;
            },
            [](Partial& acc, const Partial& part) {
                acc.psi.merge(part.psi);
                acc.correlation.merge(part.correlation);
            });
        const double psi = total.psi.value();
        const double correlation = total.correlation.value();
        const double deviation = std::fabs(std::ldexp(correlation, -n) - 0.5);
        const double ratio = correlation / psi;

        ExperimentRecord rec;
        rec.experiment = "theorem1";
        rec.params = Json{{"n", n}, {"function", "majority"}};
        rec.results = Json{{"n", n},
                           {"correlation", correlation},
                           {"psi", psi},
                           {"deviation", deviation},
                           {"ratio", ratio},
                           {"ratio_deviation", std::fabs(ratio - 0.5)}};
        rec.wall_time = clock.seconds();
        out.records.push_back(std::move(rec));
        points.push_back({static_cast<double>(n), deviation});
    }
    if (points.size() >= 3) out.fit = fit_decay(points, DecayModel::powerLaw);
    return out;
}

ExperimentRecord theorem2_scan(int n, int r, const StreamOptions& opts) {
    if (r < 1 || 3 * r > n) throw std::invalid_argument("theorem2_scan: need 1 <= r <= n/3");
    const Stopwatch clock;
    const std::uint64_t low_ones = (std::uint64_t{1} << r) - 1;  // x_0..x_{r-1} = 1
    const std::uint64_t low_zeros = low_ones & ~std::uint64_t{1};  // x_1..x_{r-1} = 0
    const double high = 0.5 * n + r / 3.0;
    const double low = 0.5 * n - r / 3.0;

    struct Counts {
        std::uint64_t primes = 0;
        std::uint64_t omega1 = 0;
        std::uint64_t omega1_biased = 0;
        std::uint64_t omega0 = 0;
        std::uint64_t omega0_biased = 0;
    };
    const Counts c = reduce_windows(
        n, ArithKind::vonMangoldt, opts, Counts{},
        [&](const SieveWindow& w) {
            Counts part;
            for (std::uint64_t x = w.lo; x < w.hi; ++x) {
                const double v = w.value(x);
                // primes carry ln x itself, proper prime powers ln p < ln x
                if (v == 0.0 || v != std::log(static_cast<double>(x))) continue;
                ++part.primes;
                const int s = digit_sum(x);
                if ((x & low_ones) == low_ones) {
                    ++part.omega1;
                    if (s > high) ++part.omega1_biased;
                }
                if ((x & low_zeros) == 0) {
                    ++part.omega0;
                    if (s < low) ++part.omega0_biased;
                }
            }
            return part;
        },
        [](Counts& acc, const Counts& part) {
            acc.primes += part.primes;
            acc.omega1 += part.omega1;
            acc.omega1_biased += part.omega1_biased;
            acc.omega0 += part.omega0;
            acc.omega0_biased += part.omega0_biased;
        });

    const double expected = std::ldexp(static_cast<double>(c.primes), -(r - 1));
    auto fraction = [](std::uint64_t part, std::uint64_t whole) {
        return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
    };
    constexpr std::uint64_t kViableCount = 100;

    ExperimentRecord rec;
    rec.experiment = "theorem2";
    rec.params = Json{{"n", n}, {"r", r}};
    rec.results = Json{{"n", n},
                       {"r", r},
                       {"prime_count", c.primes},
                       {"expected_count", expected},
                       {"high_threshold", high},
                       {"low_threshold", low},
                       {"omega1_count", c.omega1},
                       {"omega1_ratio", static_cast<double>(c.omega1) / expected},
                       {"omega1_biased", c.omega1_biased},
                       {"omega1_fraction", fraction(c.omega1_biased, c.omega1)},
                       {"omega0_count", c.omega0},
                       {"omega0_ratio", static_cast<double>(c.omega0) / expected},
                       {"omega0_biased", c.omega0_biased},
                       {"omega0_fraction", fraction(c.omega0_biased, c.omega0)},
                       {"count_viable", c.omega1 >= kViableCount && c.omega0 >= kViableCount}};
    rec.wall_time = clock.seconds();
    return rec;
}

ScanResult spectral_decay_scan(std::span<const int> n_list, int level_max, const StreamOptions& opts) {
    if (level_max < 1 || level_max > 3) throw std::invalid_argument("spectral_decay_scan: level_max outside [1, 3]");
    ScanResult out;
    std::vector<FitPoint> points;
    for (const int n : n_list) {
        const Stopwatch clock;
        const auto spectrum = low_level_coefficients_streaming(n, ArithKind::vonMangoldt, level_max, opts);
        double best = 0.0;
        SubsetMask best_mask = 0;
        double excluded = 0.0;
        std::uint64_t considered = 0;
        for (std::size_t i = 0; i < spectrum.masks.size(); ++i) {
            const SubsetMask s = spectrum.masks[i];
            if (s == 1) {
                excluded = spectrum.coeffs[i];
                continue;
            }
            if (s == 0) continue;
            ++considered;
            if (std::fabs(spectrum.coeffs[i]) > best) {
                best = std::fabs(spectrum.coeffs[i]);
                best_mask = s;
            }
        }
        ExperimentRecord rec;
        rec.experiment = "decay";
        rec.params = Json{{"n", n}, {"level_max", level_max}};
        rec.results = Json{{"n", n},
                           {"max_coefficient", best},
                           {"argmax_mask", best_mask},
                           {"argmax_level", level(best_mask)},
                           {"masks_considered", considered},
                           {"lambda_hat_0", excluded},
                           {"sqrt_n", std::sqrt(static_cast<double>(n))}};
        rec.wall_time = clock.seconds();
        out.records.push_back(std::move(rec));
        points.push_back({std::sqrt(static_cast<double>(n)), best});
    }
    if (points.size() >= 3) out.fit = fit_decay(points, DecayModel::expLaw);
    return out;
}

}  // namespace digitprime
