#include "pmdep/dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmdep/errors.hpp"

namespace pmdep {

double chi2_1_sf(double v) {
    if (!std::isfinite(v) || v < 0.0)
        throw input_error("chi2_1_sf: argument must be finite and nonnegative");
    return std::erfc(std::sqrt(0.5 * v));
}

namespace {

// P(N(0,1) > z).
double normal_sf(double z) { return 0.5 * std::erfc(z * M_SQRT1_2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

void check_pvalues(std::span<const double> p, const char* who) {
    if (p.empty()) throw input_error(std::string(who) + ": empty p-value vector");
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0))
            throw input_error(std::string(who) + ": p-value outside [0,1]");
}

} // namespace

double normal_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw input_error("normal_quantile: alpha must lie in (0,1)");

    // Bisection brackets the root; a few Newton steps polish it well past
    // the 1e-10 contract. normal_sf is strictly decreasing.
    double lo = -14.0, hi = 14.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (normal_sf(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double f = normal_sf(z) - alpha;
        const double d = -normal_pdf(z);
        if (d == 0.0) break;
        const double step = f / d;
        if (!std::isfinite(step)) break;
        z -= step;
    }
    return z;
}

double cauchy_combine(std::span<const double> pvalues) {
    check_pvalues(pvalues, "cauchy_combine");
    constexpr double eps = 1e-15;
    double t = 0.0;
    for (double p : pvalues) {
        const double pc = std::clamp(p, eps, 1.0 - eps);
        t += std::tan((0.5 - pc) * M_PI);
    }
    t /= static_cast<double>(pvalues.size());
    const double q = 0.5 - std::atan(t) / M_PI;
    return std::clamp(q, 0.0, 1.0);
}

double quantile_combine(std::span<const double> pvalues, double gamma_min) {
    check_pvalues(pvalues, "quantile_combine");
    if (!(gamma_min > 0.0 && gamma_min < 1.0))
        throw input_error("quantile_combine: gamma_min must lie in (0,1)");

    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    const auto b = static_cast<double>(sorted.size());

    constexpr int grid_size = 100;
    double best = 1.0;
    for (int k = 0; k < grid_size; ++k) {
        const double gamma =
            gamma_min + (1.0 - gamma_min) * static_cast<double>(k) / (grid_size - 1);
        // ceil(gamma*B)-th order statistic of {p_b / gamma}.
        auto rank = static_cast<std::size_t>(std::ceil(gamma * b));
        rank = std::clamp<std::size_t>(rank, 1, sorted.size());
        const double q = std::min(1.0, sorted[rank - 1] / gamma);
        best = std::min(best, q);
    }
    return std::min(1.0, (1.0 - std::log(gamma_min)) * best);
}

} // namespace pmdep
