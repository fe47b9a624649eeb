#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "digitprime/arith.hpp"

namespace digitprime {

using Json = nlohmann::ordered_json;

const char* code_version();

enum class DecayModel { powerLaw, expLaw };

const char* to_string(DecayModel model);

struct FitPoint {
    double x = 0.0;
    double y = 0.0;
};

// powerLaw: y = A x^-exponent, fitted on (ln x, ln y)
// expLaw:   y = A e^{-exponent x}, fitted on (x, ln y)
struct DecayFit {
    DecayModel model = DecayModel::powerLaw;
    double amplitude = 0.0;
    double exponent = 0.0;
    double r_squared = 0.0;
    std::vector<FitPoint> points;  // sorted by (x, y)

    double predict(double x) const;
    Json to_json() const;
};

// Ordinary least squares on the log-transformed points. Needs >= 3 points
// with y > 0 (and x > 0 for powerLaw); throws std::invalid_argument when
// all x coincide.
DecayFit fit_decay(std::span<const FitPoint> points, DecayModel model);

// Spearman rank correlation, ties sharing their average rank.
double spearman(std::span<const double> x, std::span<const double> y);

// first > last, and the median successive difference is <= 0.
bool decreasing_trend(std::span<const double> values);

struct ExperimentRecord {
    std::string experiment;
    Json params = Json::object();
    Json results = Json::object();
    double wall_time = 0.0;  // seconds
    std::string version = code_version();

    Json to_json() const;
};

struct ScanResult {
    std::vector<ExperimentRecord> records;
    std::optional<DecayFit> fit;  // set when there are >= 3 points
};

// Per odd n: correlation <Lambda, majority>, psi, deviation
// |correlation / 2^n - 1/2| and ratio correlation / psi; deviation is
// fitted to a power law in n.
ScanResult theorem1_scan(std::span<const int> n_list, const StreamOptions& opts = {});

// Primes with the r lowest digits all 1 (and the mirror set with digits
// 1..r-1 all 0), and how many of them have a biased digit sum.
ExperimentRecord theorem2_scan(int n, int r, const StreamOptions& opts = {});

// Per n: largest |Lambda^(S)| over 1 <= |S| <= level_max with S != {0},
// fitted as M(n) = A e^{-c sqrt(n)}.
ScanResult spectral_decay_scan(std::span<const int> n_list, int level_max,
                               const StreamOptions& opts = {});

}  // namespace digitprime
