#pragma once

// Empirical strength distributions and Weibull-scale diagnostics.

#include <span>
#include <vector>

#include "fishnet/models.hpp"

namespace fishnet {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope x + intercept; needs two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

class EmpiricalDistribution {
  public:
    /// Takes the sample in any order; must be nonempty.
    explicit EmpiricalDistribution(std::vector<double> values);

    const std::vector<double>& sorted() const { return values_; }
    int count() const { return static_cast<int>(values_.size()); }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }
    double mean() const;

    /// Plotting position (i - 0.5) / n of the i-th order statistic.
    double position(int i) const { return (i - 0.5) / count(); }

  private:
    std::vector<double> values_;
};

/// Step function through the plotting positions; 0 below the minimum.
double empirical_cdf(const EmpiricalDistribution& e, double sigma);

struct WeibullPoint {
    double x = 0.0;  ///< ln sigma
    double y = 0.0;  ///< ln(-ln(1 - P_f))
};

WeibullPoint weibull_coords(double sigma, double pf);

struct ProbabilityBand {
    double lo = 0.0;
    double hi = 1.0;
};

/// Slope of Y* against ln sigma over points whose P_f lies in the band.
double tail_slope(const CdfCurve& curve, ProbabilityBand band);
double tail_slope(const EmpiricalDistribution& e, ProbabilityBand band);

struct ConvergenceReport {
    double max_discrepancy = 0.0;  ///< max |Y*_half - Y*_full| on Y*_full >= floor
    double region_lo = 0.0;        ///< converged stresses: [region_lo, region_hi]
    double region_hi = 0.0;
    bool has_region = false;
};

/// Compares the first-half and full empirical curves at the full sample's
/// order statistics. The converged region is the upper stress range over
/// which |dY*| stays below 0.1.
ConvergenceReport convergence_check(const EmpiricalDistribution& half,
                                    const EmpiricalDistribution& full, double y_floor);

struct Histogram {
    std::vector<double> center;
    std::vector<double> density;
    double width = 0.0;
};

/// Equal-width bins over [min, max], normalized to unit area. A sample with
/// no spread collapses to one narrow bin at the common value.
Histogram histogram(const EmpiricalDistribution& e, int bins);

}  // namespace fishnet
