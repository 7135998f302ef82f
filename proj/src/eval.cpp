#include "calcrad/eval.hpp"

#include <cmath>
#include <limits>

#include "calcrad/error.hpp"

namespace calcrad::eval {

namespace {

std::optional<double> ratio(double num, double den) {
    if (den == 0.0) return std::nullopt;
    return num / den;
}

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

MetricsReport metrics(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fn < 0 || c.fp < 0 || c.tn < 0) throw Error(ErrorCode::BadRange, "negative confusion count");
    if (c.total() == 0) throw Error(ErrorCode::EmptyCounts, "confusion counts are all zero");
    const auto tp = static_cast<double>(c.tp), fn = static_cast<double>(c.fn);
    const auto fp = static_cast<double>(c.fp), tn = static_cast<double>(c.tn);
    MetricsReport r;
    r.accuracy = (tp + tn) / static_cast<double>(c.total());
    r.sensitivity = ratio(tp, tp + fn);
    r.specificity = ratio(tn, tn + fp);
    r.ppv = ratio(tp, tp + fp);
    r.npv = ratio(tn, tn + fn);
    if (r.sensitivity && r.specificity) r.balanced_accuracy = (*r.sensitivity + *r.specificity) / 2.0;
    if (r.sensitivity && r.ppv) {
        const double s = *r.sensitivity + *r.ppv;
        r.f1 = s > 0.0 ? std::optional<double>(2.0 * *r.ppv * *r.sensitivity / s) : std::optional<double>(0.0);
    }
    return r;
}

ConfusionCounts confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) throw Error(ErrorCode::LengthMismatch, "truth and prediction lengths differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] != 0, p = predicted[i] != 0;
        if (t && p) ++c.tp;
        else if (t) ++c.fn;
        else if (p) ++c.fp;
        else ++c.tn;
    }
    return c;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::BadRange, "incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::BadRange, "incomplete beta needs x in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw Error(ErrorCode::BadRange, "degrees of freedom must be > 0");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, x);
    return t > 0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "paired samples differ in length");
    if (a.size() < 2) throw Error(ErrorCode::TooFewPairs, "paired t-test needs >= 2 pairs");
    const auto n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    TTestResult r;
    r.df = static_cast<int>(a.size()) - 1;
    r.mean_difference = mean;
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) {
        r.zero_variance = true;
        r.t = 0.0;
        r.p = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.t = mean / (sd / std::sqrt(n));
    // Two-sided tail: I_{df/(df+t^2)}(df/2, 1/2).
    const double dfd = r.df;
    r.p = r.t == 0.0 ? 1.0 : incomplete_beta(dfd / 2.0, 0.5, dfd / (dfd + r.t * r.t));
    return r;
}

}  // namespace calcrad::eval
