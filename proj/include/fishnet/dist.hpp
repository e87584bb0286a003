#pragma once

// Link strength distributions P1(sigma).
//
// The two grafted families join a lower tail (power law or Weibull) to an
// erf-shaped Gaussian core at a graft point (sigma_g, P_gr). The tail
// coefficient and the additive offset of the core branch are both derived
// from continuity at the graft point; every other constant is taken as given.

#include <optional>
#include <string>
#include <variant>

namespace fishnet {

/// One-sided density values at a point where the pdf may jump.
struct PdfSides {
    double left = 0.0;
    double right = 0.0;
};

/// Gaussian core branch: P_gr + offset - core_scale * erf(erf_scale * (mean - s)).
struct GaussianCore {
    double mean = 10.0;
    double core_scale = 0.504;
    double erf_scale = 0.884;
    double offset = 0.0;  // derived

    double cdf(double s, double graft_prob) const;
    double pdf(double s) const;
    /// Approximate inverse of the branch, or -1 when p is out of its range.
    double guess_inverse(double p, double graft_prob) const;
};

/// Power-law tail alpha * (s / mean)^m0 grafted onto a Gaussian core.
class GraftedGaussianPower {
  public:
    struct Params {
        double mean = 10.0;
        double sd = 0.8;
        double tail_exponent = 38.0;
        double graft_stress = 8.4;
        double graft_prob = 0.015;
        double core_scale = 0.504;
        double erf_scale = 0.884;
    };

    GraftedGaussianPower() : GraftedGaussianPower(Params{}) {}
    explicit GraftedGaussianPower(Params params);

    double cdf(double s) const;
    PdfSides pdf(double s) const;
    double inverse_cdf(double p) const;

    const Params& params() const { return params_; }
    /// alpha, from alpha * (graft_stress / mean)^m0 = graft_prob.
    double tail_coef() const { return tail_coef_; }
    double core_offset() const { return core_.offset; }
    /// Upper end of the root-finding bracket on the core branch.
    double upper_stress() const;

  private:
    Params params_;
    double tail_coef_ = 0.0;
    GaussianCore core_;
};

/// Scaled Weibull tail multiplier * (1 - exp(-(s/scale)^shape)) grafted onto
/// a Gaussian core.
class GraftedWeibullGaussian {
  public:
    struct Params {
        double mean = 10.0;
        double sd = 0.8;
        double weibull_shape = 10.0;
        double weibull_scale = 12.0;
        double graft_stress = 8.6;
        double graft_prob = 0.08955;
        double core_scale = 0.474;
        double erf_scale = 0.884;
    };

    GraftedWeibullGaussian() : GraftedWeibullGaussian(Params{}) {}
    explicit GraftedWeibullGaussian(Params params);

    double cdf(double s) const;
    PdfSides pdf(double s) const;
    double inverse_cdf(double p) const;

    const Params& params() const { return params_; }
    double multiplier() const { return multiplier_; }
    double core_offset() const { return core_.offset; }
    double upper_stress() const;

  private:
    Params params_;
    double multiplier_ = 0.0;
    GaussianCore core_;
};

/// Two-parameter Weibull law 1 - exp(-(s/scale)^shape).
struct Weibull {
    double shape = 5.0;
    double scale = 1.0;

    double cdf(double s) const;
    PdfSides pdf(double s) const;
    double inverse_cdf(double p) const;
};

/// Normal law left-truncated at zero, so that cdf(0) = 0 like the others.
struct Gaussian {
    double mean = 10.0;
    double sd = 0.8;

    double cdf(double s) const;
    PdfSides pdf(double s) const;
    double inverse_cdf(double p) const;
};

using Distribution =
    std::variant<GraftedGaussianPower, GraftedWeibullGaussian, Weibull, Gaussian>;

double cdf(const Distribution& d, double s);
/// Density; at a graft point this returns the right-hand value.
double pdf(const Distribution& d, double s);
PdfSides pdf_sides(const Distribution& d, double s);
double inverse_cdf(const Distribution& d, double p);

/// Graft stress of the grafted families, empty otherwise.
std::optional<double> graft_stress(const Distribution& d);
/// Exponent of the lower power-law tail (m0 for the power graft, shape for
/// Weibull-type tails); empty for the Gaussian.
std::optional<double> tail_exponent(const Distribution& d);
std::string family_name(const Distribution& d);

/// Inverse-transform draw; `uniform` yields variates in (0, 1).
template <class UniformSource>
double sample(const Distribution& d, UniformSource& uniform)
{
    return inverse_cdf(d, uniform());
}

}  // namespace fishnet
