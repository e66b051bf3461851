#pragma once

#include <vector>

namespace lfperf::sim {

struct KsResult {
    std::size_t n = 0;
    double mean = 0.0;
    double statistic = 0.0;  // sup |F_n - F|
    double p_value = 0.0;
};

/// Kolmogorov-Smirnov distance to the exponential whose mean equals the
/// sample mean. The p-value uses the asymptotic Kolmogorov distribution with
/// the Stephens small-sample correction.
KsResult ks_exponential(std::vector<double> samples);

/// Complementary Kolmogorov CDF, Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace lfperf::sim
