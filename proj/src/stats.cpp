#include "fishnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fishnet {

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line: need at least two (x, y) pairs");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_line: x values do not vary");
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values))
{
    if (values_.empty()) {
        throw std::invalid_argument("EmpiricalDistribution: empty sample");
    }
    std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::mean() const
{
    return std::accumulate(values_.begin(), values_.end(), 0.0) / values_.size();
}

double empirical_cdf(const EmpiricalDistribution& e, double sigma)
{
    const auto& v = e.sorted();
    const auto i = std::upper_bound(v.begin(), v.end(), sigma) - v.begin();
    if (i == 0) {
        return 0.0;
    }
    return e.position(static_cast<int>(i));
}

WeibullPoint weibull_coords(double sigma, double pf)
{
    if (!(sigma > 0.0)) {
        throw std::domain_error("weibull_coords: stress must be positive");
    }
    if (!(pf > 0.0 && pf < 1.0)) {
        throw std::domain_error("weibull_coords: P_f must lie strictly inside (0, 1)");
    }
    return {std::log(sigma), std::log(-std::log1p(-pf))};
}

namespace {

double band_slope(std::span<const double> sigma, std::span<const double> pf,
                  ProbabilityBand band)
{
    std::vector<double> x, y;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (pf[k] >= band.lo && pf[k] <= band.hi && pf[k] > 0.0 && pf[k] < 1.0) {
            const auto w = weibull_coords(sigma[k], pf[k]);
            x.push_back(w.x);
            y.push_back(w.y);
        }
    }
    if (x.size() < 10) {
        throw std::invalid_argument("tail_slope: fewer than 10 points inside the band");
    }
    return fit_line(x, y).slope;
}

}  // namespace

double tail_slope(const CdfCurve& curve, ProbabilityBand band)
{
    // Y* from the curve itself stays exact where P_f has underflowed to 0.
    std::vector<double> x, y;
    for (std::size_t k = 0; k < curve.sigma.size(); ++k) {
        const double pf = curve.pf[k];
        const double ys = curve.ystar[k];
        const double p_eff = pf > 0.0 ? pf : std::exp(ys);
        if (p_eff >= band.lo && p_eff <= band.hi && std::isfinite(ys) && curve.sigma[k] > 0.0) {
            x.push_back(std::log(curve.sigma[k]));
            y.push_back(ys);
        }
    }
    if (x.size() < 10) {
        throw std::invalid_argument("tail_slope: fewer than 10 points inside the band");
    }
    return fit_line(x, y).slope;
}

double tail_slope(const EmpiricalDistribution& e, ProbabilityBand band)
{
    std::vector<double> pf(e.count());
    for (int i = 1; i <= e.count(); ++i) {
        pf[i - 1] = e.position(i);
    }
    return band_slope(e.sorted(), pf, band);
}

ConvergenceReport convergence_check(const EmpiricalDistribution& half,
                                    const EmpiricalDistribution& full, double y_floor)
{
    ConvergenceReport rep;
    const auto& v = full.sorted();
    // Walk down from the top so the converged region is the upper tail run.
    bool run = true;
    for (int i = full.count(); i >= 1; --i) {
        const double s = v[i - 1];
        if (i < full.count() && v[i] == s) {
            continue;  // same stress as the previous point
        }
        const double pf_full = empirical_cdf(full, s);
        const double y_full = std::log(-std::log1p(-pf_full));
        if (y_full < y_floor) {
            break;
        }
        const double pf_half = empirical_cdf(half, s);
        if (pf_half <= 0.0) {
            rep.max_discrepancy = std::numeric_limits<double>::infinity();
            run = false;
            continue;
        }
        const double d = std::abs(std::log(-std::log1p(-pf_half)) - y_full);
        rep.max_discrepancy = std::max(rep.max_discrepancy, d);
        if (run && d < 0.1) {
            if (!rep.has_region) {
                rep.region_hi = s;
                rep.has_region = true;
            }
            rep.region_lo = s;
        }
        else {
            run = false;
        }
    }
    return rep;
}

Histogram histogram(const EmpiricalDistribution& e, int bins)
{
    if (bins < 2) {
        throw std::invalid_argument("histogram: need at least 2 bins");
    }
    Histogram hist;
    const double lo = e.min();
    const double hi = e.max();
    if (!(hi > lo)) {
        hist.width = std::max(std::abs(lo) * 1e-9, 1e-12);
        hist.center.push_back(lo);
        hist.density.push_back(1.0 / hist.width);
        return hist;
    }
    hist.width = (hi - lo) / bins;
    std::vector<long long> counts(bins, 0);
    for (double s : e.sorted()) {
        const int b = std::min(bins - 1, static_cast<int>((s - lo) / hist.width));
        ++counts[b];
    }
    const double n = e.count();
    for (int b = 0; b < bins; ++b) {
        hist.center.push_back(lo + (b + 0.5) * hist.width);
        hist.density.push_back(counts[b] / (n * hist.width));
    }
    return hist;
}

}  // namespace fishnet
