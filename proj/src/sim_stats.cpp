#include "lfperf/sim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lfperf::sim {

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0, sign = 1.0, prev = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) <= 1e-12 * std::abs(sum) || std::abs(term) <= 1e-16 * prev) break;
        prev = std::abs(term);
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_exponential(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("KS test needs samples");
    KsResult r;
    r.n = x.size();
    r.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    if (!(r.mean > 0.0)) throw std::invalid_argument("KS test needs a positive mean");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = -std::expm1(-x[i] / r.mean);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    r.statistic = d;
    const double sn = std::sqrt(n);
    r.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

}  // namespace lfperf::sim
