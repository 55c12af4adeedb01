#include "rspan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rspan {

namespace {

constexpr double kLogGammaHalf = 0.57236494292470008707; // ln Gamma(1/2)

// Regularized lower incomplete gamma P(1/2, z) by power series; good for
// z < 1.5.
double gamma_p_half_series(double z) {
    const double a = 0.5;
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= z / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17)
            break;
    }
    return sum * std::exp(-z + a * std::log(z) - kLogGammaHalf);
}

// Regularized upper incomplete gamma Q(1/2, z) by modified Lentz continued
// fraction; good for z >= 1.5.
double gamma_q_half_cf(double z) {
    const double a = 0.5;
    const double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17)
            break;
    }
    return std::exp(-z + a * std::log(z) - kLogGammaHalf) * h;
}

} // namespace

double erf_own(double x) {
    if (std::isnan(x))
        return x;
    const double z = x * x;
    if (z == 0.0)
        return 0.0;
    double p;
    if (z < 1.5)
        p = gamma_p_half_series(z);
    else
        p = 1.0 - gamma_q_half_cf(z);
    return x < 0.0 ? -p : p;
}

double erfc_own(double x) {
    if (std::isnan(x))
        return x;
    if (x < 0.0)
        return 2.0 - erfc_own(-x);
    const double z = x * x;
    if (z < 1.5)
        return 1.0 - erf_own(x);
    if (z > 1400.0) // erfc underflows past ~27
        return 0.0;
    return gamma_q_half_cf(z);
}

double normal_cdf(double x) {
    return 0.5 * erfc_own(-x * M_SQRT1_2);
}

double sample_variance(std::span<const double> values) {
    const size_t n = values.size();
    if (n < 2)
        return 0.0;
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(n - 1);
}

SummaryStats summarize(std::span<const double> values, int batches) {
    SummaryStats st;
    st.n = values.size();
    if (st.n == 0)
        return st;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    st.mean = sum / static_cast<double>(st.n);
    if (st.n < 2)
        return st;
    st.variance = sample_variance(values);
    st.std_error_mean = std::sqrt(st.variance / static_cast<double>(st.n));

    const int b = std::max(2, std::min<int>(batches, static_cast<int>(st.n / 2)));
    if (static_cast<size_t>(b) >= 2 && st.n >= 4) {
        std::vector<double> leave_out(static_cast<size_t>(b));
        std::vector<double> buf;
        buf.reserve(st.n);
        double vbar = 0.0;
        for (int k = 0; k < b; ++k) {
            const size_t lo = st.n * static_cast<size_t>(k) / static_cast<size_t>(b);
            const size_t hi = st.n * static_cast<size_t>(k + 1) / static_cast<size_t>(b);
            buf.clear();
            for (size_t i = 0; i < st.n; ++i)
                if (i < lo || i >= hi)
                    buf.push_back(values[i]);
            leave_out[static_cast<size_t>(k)] = sample_variance(buf);
            vbar += leave_out[static_cast<size_t>(k)];
        }
        vbar /= b;
        double ss = 0.0;
        for (double v : leave_out) {
            const double d = v - vbar;
            ss += d * d;
        }
        st.std_error_variance = std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
    }
    return st;
}

double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf) {
    if (samples.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double upper = (static_cast<double>(i) + 1.0) / n - f;
        const double lower = f - static_cast<double>(i) / n;
        d = std::max({d, upper, lower});
    }
    return d;
}

double kolmogorov_distance(std::span<const double> samples) {
    return ks_distance(samples, [](double x) { return normal_cdf(x); });
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("regression_slope: need two equal-length series");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace rspan
