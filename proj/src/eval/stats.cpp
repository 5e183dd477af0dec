#include "caif/eval/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

namespace caif::eval {

nlohmann::json ci_to_json(const CiResult& ci) {
    return {{"successes", ci.successes},
            {"trials", ci.trials},
            {"point_pct", ci.point_pct},
            {"lo_pct", ci.lo_pct},
            {"hi_pct", ci.hi_pct}};
}

double z_for_confidence(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0, 1)");
    boost::math::normal_distribution<double> n;
    return boost::math::quantile(n, 1.0 - (1.0 - confidence) / 2.0);
}

CiResult wilson_ci(long successes, long trials, double confidence) {
    if (trials < 1 || successes < 0 || successes > trials) {
        throw InvalidCounts("need 0 <= successes <= trials and trials >= 1");
    }
    const double z = z_for_confidence(confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    CiResult out;
    out.successes = successes;
    out.trials = trials;
    out.point_pct = 100.0 * p;
    out.lo_pct = std::clamp(100.0 * (centre - half), 0.0, out.point_pct);
    out.hi_pct = std::clamp(100.0 * (centre + half), out.point_pct, 100.0);
    return out;
}

MeanCi mean_ci(std::span<const double> xs, double confidence) {
    MeanCi out;
    out.n = xs.size();
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) {
        out.lo = out.hi = out.mean;
        return out;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    double half = z_for_confidence(confidence) * sd / std::sqrt(static_cast<double>(xs.size()));
    out.lo = out.mean - half;
    out.hi = out.mean + half;
    return out;
}

}  // namespace caif::eval
