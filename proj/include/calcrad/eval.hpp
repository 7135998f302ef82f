#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace calcrad::eval {

/// Positive class is NonZero calcification.
struct ConfusionCounts {
    std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
    [[nodiscard]] std::int64_t total() const noexcept { return tp + fn + fp + tn; }
};

/// Undefined metrics (zero denominator) are empty.
struct MetricsReport {
    std::optional<double> accuracy;
    std::optional<double> balanced_accuracy;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> ppv;
    std::optional<double> f1;
    std::optional<double> npv;
};

[[nodiscard]] MetricsReport metrics(const ConfusionCounts& c);

/// Counts from truth/prediction vectors with 1 = NonZero.
[[nodiscard]] ConfusionCounts confusion(const std::vector<int>& truth, const std::vector<int>& predicted);

/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double incomplete_beta(double a, double b, double x);

/// Student-t cumulative distribution function.
[[nodiscard]] double student_t_cdf(double t, double df);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    int df = 0;
    bool zero_variance = false;  // t and p are not meaningful when set
    double mean_difference = 0.0;
};

/// Two-sided paired t-test on a_i - b_i with sample standard deviation.
[[nodiscard]] TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace calcrad::eval
