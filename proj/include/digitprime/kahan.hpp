#pragma once

#include <cmath>

namespace digitprime {

// Neumaier-compensated running sum. merge() folds another partial sum in,
// so per-window partials can be combined in a fixed order.
class KahanSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    void merge(const KahanSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace digitprime
