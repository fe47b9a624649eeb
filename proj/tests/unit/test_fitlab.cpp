#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "digitprime/boolfn.hpp"
#include "digitprime/digitclass.hpp"
#include "digitprime/fitlab.hpp"
#include "digitprime/walsh.hpp"
#include "oracles.hpp"

using namespace digitprime;

TEST_CASE("exact power and exponential laws") {
    std::vector<FitPoint> pw;
    for (const double x : {1.0, 2.0, 3.0, 5.0, 8.0}) pw.push_back({x, 4.0 * std::pow(x, -2.0)});
    const auto a = fit_decay(pw, DecayModel::powerLaw);
    CHECK(a.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.amplitude == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.predict(4.0) == doctest::Approx(0.25).epsilon(1e-12));

    std::vector<FitPoint> ex;
    for (const double x : {0.0, 0.5, 1.0, 1.5}) ex.push_back({x, std::exp(-3.0 * x)});
    const auto b = fit_decay(ex, DecayModel::expLaw);
    CHECK(b.exponent == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(b.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noisy power law") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::vector<FitPoint> pts;
    for (int i = 1; i <= 40; ++i) {
        const double x = i;
        pts.push_back({x, std::pow(x, -0.5) * (1.0 + noise(rng))});
    }
    const auto fit = fit_decay(pts, DecayModel::powerLaw);
    CHECK(fit.exponent >= 0.4);
    CHECK(fit.exponent <= 0.6);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("fit does not depend on point order") {
    std::vector<FitPoint> pts{{1.0, 0.9}, {2.0, 0.55}, {3.0, 0.31}, {4.0, 0.27}, {6.0, 0.12}};
    const auto a = fit_decay(pts, DecayModel::expLaw);
    std::reverse(pts.begin(), pts.end());
    std::swap(pts[1], pts[3]);
    const auto b = fit_decay(pts, DecayModel::expLaw);
    CHECK(a.exponent == b.exponent);
    CHECK(a.amplitude == b.amplitude);
    CHECK(a.r_squared == b.r_squared);
    for (std::size_t i = 0; i + 1 < b.points.size(); ++i) CHECK(b.points[i].x <= b.points[i + 1].x);
}

TEST_CASE("degenerate fits are rejected") {
    const std::vector<FitPoint> two{{1.0, 1.0}, {2.0, 0.5}};
    CHECK_THROWS_AS(fit_decay(two, DecayModel::powerLaw), std::invalid_argument);
    const std::vector<FitPoint> same_x{{2.0, 1.0}, {2.0, 0.5}, {2.0, 0.2}};
    CHECK_THROWS_AS(fit_decay(same_x, DecayModel::expLaw), std::invalid_argument);
    const std::vector<FitPoint> zero_y{{1.0, 1.0}, {2.0, 0.0}, {3.0, 0.2}};
    CHECK_THROWS_AS(fit_decay(zero_y, DecayModel::expLaw), std::invalid_argument);
    const std::vector<FitPoint> neg_x{{-1.0, 1.0}, {2.0, 0.5}, {3.0, 0.2}};
    CHECK_THROWS_AS(fit_decay(neg_x, DecayModel::powerLaw), std::invalid_argument);
}

TEST_CASE("fit serialization") {
    const std::vector<FitPoint> pts{{1.0, 1.0}, {2.0, 0.5}, {4.0, 0.25}};
    const auto j = fit_decay(pts, DecayModel::powerLaw).to_json();
    CHECK(j["model"] == "powerLaw");
    CHECK(j["exponent"].get<double>() == doctest::Approx(1.0));
    CHECK(j["points"].size() == 3);
}

TEST_CASE("rank correlation and trend") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> up{2, 4, 5, 9, 10};
    const std::vector<double> down{9, 7, 7, 3, 1};
    CHECK(spearman(x, up) == doctest::Approx(1.0));
    CHECK(spearman(x, down) < -0.9);
    CHECK(decreasing_trend(down));
    CHECK_FALSE(decreasing_trend(up));
    const std::vector<double> bumpy{1.0, 0.8, 0.85, 0.6, 0.5};
    CHECK(decreasing_trend(bumpy));
}

TEST_CASE("theorem1 scan") {
    const std::vector<int> ns{11, 13, 15};
    const auto scan = theorem1_scan(ns);
    REQUIRE(scan.records.size() == 3);
    REQUIRE(scan.fit.has_value());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const int n = ns[i];
        const auto& r = scan.records[i].results;
        CHECK(scan.records[i].experiment == "theorem1");
        CHECK(r["n"] == n);
        const auto table = oracle::von_mangoldt_table(n);
        double psi = 0.0;
        double corr = 0.0;
        for (std::uint64_t x = 1; x < table.size(); ++x) {
            psi += table[x];
            if (2 * oracle::popcount(x) > n) corr += table[x];
        }
        CHECK(r["psi"].get<double>() == doctest::Approx(psi).epsilon(1e-12));
        CHECK(r["correlation"].get<double>() == doctest::Approx(corr).epsilon(1e-12));
        CHECK(r["deviation"].get<double>() == doctest::Approx(std::fabs(std::ldexp(corr, -n) - 0.5)).epsilon(1e-9));

        // Same deviation through the symmetrized path.
        const double sym = symmetrized_inner_product(digit_class_sums(n), BooleanFunctionSpec::majority(n));
        CHECK(std::fabs(std::ldexp(sym, -n) - 0.5) == doctest::Approx(r["deviation"].get<double>()).epsilon(1e-9));
    }
    const std::vector<int> even{12};
    CHECK_THROWS_AS(theorem1_scan(even), std::invalid_argument);
}

TEST_CASE("theorem2 scan") {
    const int n = 18;
    const int r = 4;
    const auto rec = theorem2_scan(n, r);
    const auto& res = rec.results;
    std::uint64_t primes = 0, omega1 = 0, biased1 = 0, omega0 = 0, biased0 = 0;
    for (std::uint64_t x = 2; x < (1u << n); ++x) {
        bool prime = true;
        for (std::uint64_t p = 2; p * p <= x; ++p) {
            if (x % p == 0) {
                prime = false;
                break;
            }
        }
        if (!prime) continue;
        ++primes;
        const int s = oracle::popcount(x);
        if ((x & 15) == 15) {
            ++omega1;
            if (s > n / 2.0 + r / 3.0) ++biased1;
        }
        if ((x & 14) == 0) {
            ++omega0;
            if (s < n / 2.0 - r / 3.0) ++biased0;
        }
    }
    CHECK(res["prime_count"] == primes);
    CHECK(res["omega1_count"] == omega1);
    CHECK(res["omega1_biased"] == biased1);
    CHECK(res["omega0_count"] == omega0);
    CHECK(res["omega0_biased"] == biased0);
    CHECK(res["expected_count"].get<double>() == doctest::Approx(primes / 8.0));

    // r = 1 keeps every odd prime.
    const auto all = theorem2_scan(12, 1);
    CHECK(all.results["omega1_count"].get<std::uint64_t>() + 1 == all.results["prime_count"].get<std::uint64_t>());

    CHECK_THROWS_AS(theorem2_scan(12, 5), std::invalid_argument);
    CHECK_THROWS_AS(theorem2_scan(12, 0), std::invalid_argument);
}

TEST_CASE("spectral decay scan") {
    const std::vector<int> ns{10, 12, 14};
    const auto scan = spectral_decay_scan(ns, 2);
    REQUIRE(scan.records.size() == 3);
    REQUIRE(scan.fit.has_value());
    CHECK(scan.fit->model == DecayModel::expLaw);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const int n = ns[i];
        const auto spec = fwht(oracle::von_mangoldt_table(n));
        double best = 0.0;
        for (SubsetMask s = 2; s < spec.size(); ++s) {
            if (level(s) <= 2) best = std::max(best, std::fabs(spec[s]));
        }
        const auto& r = scan.records[i].results;
        CHECK(r["max_coefficient"].get<double>() == doctest::Approx(best).epsilon(1e-9));
        CHECK(r["lambda_hat_0"].get<double>() == doctest::Approx(spec[1]).epsilon(1e-9));
        CHECK(r["masks_considered"] == n + n * (n - 1) / 2 - 1);
    }
    CHECK_THROWS_AS(spectral_decay_scan(ns, 4), std::invalid_argument);
}

TEST_CASE("scans are reproducible") {
    const std::vector<int> ns{13, 15, 17};
    const auto a = theorem1_scan(ns);
    const auto b = theorem1_scan(ns, StreamOptions{1 << 12, 3});
    for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(a.records[i].results.dump() == theorem1_scan(ns).records[i].results.dump());
        CHECK(a.records[i].results["correlation"].get<double>() ==
              doctest::Approx(b.records[i].results["correlation"].get<double>()).epsilon(1e-12));
    }
    CHECK(theorem2_scan(15, 3).results.dump() == theorem2_scan(15, 3).results.dump());
    const auto rec = a.records[0].to_json();
    CHECK(rec.contains("experiment"));
    CHECK(rec.contains("params"));
    CHECK(rec.contains("results"));
    CHECK(rec.contains("wall_time"));
    CHECK(rec["version"] == code_version());
}
