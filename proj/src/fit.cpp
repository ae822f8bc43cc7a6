#include "dwdirac/fit.hpp"

#include <cmath>

namespace dwdirac {

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3)
        throw invalid_parameter("fit: need at least 3 samples for a decay rate");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, err] : samples) {
        if (!(err > 0.0) || !std::isfinite(err) || !std::isfinite(x))
            throw invalid_sample("fit: errors must be finite and strictly positive");
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(samples.size());
    const double var = sxx - sx * sx / n;
    if (!(var > 0.0))
        throw invalid_sample("fit: abscissae are all equal");

    DecayFit out;
    out.samples = samples;
    out.slope = (sxy - sx * sy / n) / var;
    out.intercept = (sy - out.slope * sx) / n;
    for (const auto& [x, err] : samples)
        out.max_log_residual = std::max(
            out.max_log_residual, std::abs(std::log(err) - out.intercept - out.slope * x));
    return out;
}

} // namespace dwdirac
