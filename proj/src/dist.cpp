#include "fishnet/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fishnet {
namespace {

void check_stress(double s)
{
    if (!(s >= 0.0)) {
        throw std::domain_error("strength cdf: stress must be non-negative");
    }
}

void check_prob(double p)
{
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::domain_error("inverse cdf: probability must lie in [0, 1)");
    }
}

// Safeguarded Newton on a bracket [lo, hi] with f(lo) <= p <= f(hi).
template <class Cdf, class Pdf>
double invert_bracketed(const Cdf& f, const Pdf& df, double p, double lo, double hi, double x0)
{
    double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double r = f(x) - p;
        if (r == 0.0) {
            return x;
        }
        if (r < 0.0) {
            lo = x;
        }
        else {
            hi = x;
        }
        const double d = df(x);
        double next = (d > 0.0) ? x - r / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) ||
            hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) {
            return next;
        }
        x = next;
    }
    return x;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Single-precision rational approximation of erf^-1 (Giles 2010); only used
// as a Newton starting point.
double erfinv_guess(double y)
{
    double w = -std::log((1.0 - y) * (1.0 + y));
    double p;
    if (w < 5.0) {
        w -= 2.5;
        p = 2.81022636e-08;
        p = 3.43273939e-07 + p * w;
        p = -3.5233877e-06 + p * w;
        p = -4.39150654e-06 + p * w;
        p = 0.00021858087 + p * w;
        p = -0.00125372503 + p * w;
        p = -0.00417768164 + p * w;
        p = 0.246640727 + p * w;
        p = 1.50140941 + p * w;
    }
    else {
        w = std::sqrt(w) - 3.0;
        p = -0.000200214257;
        p = 0.000100950558 + p * w;
        p = 0.00134934322 + p * w;
        p = -0.00367342844 + p * w;
        p = 0.00573950773 + p * w;
        p = -0.0076224613 + p * w;
        p = 0.00943887047 + p * w;
        p = 1.00167406 + p * w;
        p = 2.83297682 + p * w;
    }
    return p * y;
}

}  // namespace

double GaussianCore::cdf(double s, double graft_prob) const
{
    return graft_prob + offset - core_scale * std::erf(erf_scale * (mean - s));
}

double GaussianCore::guess_inverse(double p, double graft_prob) const
{
    const double y = (graft_prob + offset - p) / core_scale;
    if (!(y > -1.0 && y < 1.0)) {
        return -1.0;
    }
    return mean - erfinv_guess(y) / erf_scale;
}

double GaussianCore::pdf(double s) const
{
    const double z = erf_scale * (mean - s);
    return core_scale * erf_scale * 2.0 / std::sqrt(std::numbers::pi) * std::exp(-z * z);
}

// ---------------------------------------------------------------------------
// GraftedGaussianPower

GraftedGaussianPower::GraftedGaussianPower(Params params) : params_(params)
{
    if (!(params_.mean > 0 && params_.tail_exponent > 0 && params_.graft_stress > 0 &&
          params_.graft_prob > 0 && params_.graft_prob < 1 && params_.core_scale > 0 &&
          params_.erf_scale > 0)) {
        throw std::invalid_argument("grafted gaussian-power: invalid parameters");
    }
    tail_coef_ = params_.graft_prob /
                 std::pow(params_.graft_stress / params_.mean, params_.tail_exponent);
    core_ = GaussianCore{params_.mean, params_.core_scale, params_.erf_scale, 0.0};
    core_.offset =
        params_.core_scale * std::erf(params_.erf_scale * (params_.mean - params_.graft_stress));
}

double GraftedGaussianPower::cdf(double s) const
{
    check_stress(s);
    if (s <= params_.graft_stress) {
        return tail_coef_ * std::pow(s / params_.mean, params_.tail_exponent);
    }
    return std::min(1.0, core_.cdf(s, params_.graft_prob));
}

PdfSides GraftedGaussianPower::pdf(double s) const
{
    check_stress(s);
    const double m0 = params_.tail_exponent;
    const double tail =
        tail_coef_ * m0 / params_.mean * std::pow(s / params_.mean, m0 - 1.0);
    if (s < params_.graft_stress) {
        return {tail, tail};
    }
    if (s == params_.graft_stress) {
        return {tail, core_.pdf(s)};
    }
    const double core = core_.cdf(s, params_.graft_prob) < 1.0 ? core_.pdf(s) : 0.0;
    return {core, core};
}

double GraftedGaussianPower::upper_stress() const
{
    return params_.mean + 40.0 / params_.erf_scale;
}

double GraftedGaussianPower::inverse_cdf(double p) const
{
    check_prob(p);
    if (p <= params_.graft_prob) {
        return params_.mean * std::pow(p / tail_coef_, 1.0 / params_.tail_exponent);
    }
    const double hi = upper_stress();
    if (p >= core_.cdf(hi, params_.graft_prob)) {
        return hi;
    }
    return invert_bracketed([this](double x) { return core_.cdf(x, params_.graft_prob); },
                            [this](double x) { return core_.pdf(x); }, p,
                            params_.graft_stress, hi,
                            core_.guess_inverse(p, params_.graft_prob));
}

// ---------------------------------------------------------------------------
// GraftedWeibullGaussian

GraftedWeibullGaussian::GraftedWeibullGaussian(Params params) : params_(params)
{
    if (!(params_.mean > 0 && params_.weibull_shape > 0 && params_.weibull_scale > 0 &&
          params_.graft_stress > 0 && params_.graft_prob > 0 && params_.graft_prob < 1 &&
          params_.core_scale > 0 && params_.erf_scale > 0)) {
        throw std::invalid_argument("grafted weibull-gaussian: invalid parameters");
    }
    const double base = -std::expm1(
        -std::pow(params_.graft_stress / params_.weibull_scale, params_.weibull_shape));
    multiplier_ = params_.graft_prob / base;
    if (multiplier_ < 1.0) {
        throw std::invalid_argument(
            "grafted weibull-gaussian: graft point lies above the Weibull branch");
    }
    core_ = GaussianCore{params_.mean, params_.core_scale, params_.erf_scale, 0.0};
    core_.offset =
        params_.core_scale * std::erf(params_.erf_scale * (params_.mean - params_.graft_stress));
}

double GraftedWeibullGaussian::cdf(double s) const
{
    check_stress(s);
    if (s <= params_.graft_stress) {
        return multiplier_ *
               -std::expm1(-std::pow(s / params_.weibull_scale, params_.weibull_shape));
    }
    return std::min(1.0, core_.cdf(s, params_.graft_prob));
}

PdfSides GraftedWeibullGaussian::pdf(double s) const
{
    check_stress(s);
    const double k = params_.weibull_shape;
    const double lam = params_.weibull_scale;
    const double x = std::pow(s / lam, k);
    const double tail = multiplier_ * k / lam * std::pow(s / lam, k - 1.0) * std::exp(-x);
    if (s < params_.graft_stress) {
        return {tail, tail};
    }
    if (s == params_.graft_stress) {
        return {tail, core_.pdf(s)};
    }
    const double core = core_.cdf(s, params_.graft_prob) < 1.0 ? core_.pdf(s) : 0.0;
    return {core, core};
}

double GraftedWeibullGaussian::upper_stress() const
{
    return params_.mean + 40.0 / params_.erf_scale;
}

double GraftedWeibullGaussian::inverse_cdf(double p) const
{
    check_prob(p);
    if (p <= params_.graft_prob) {
        return params_.weibull_scale *
               std::pow(-std::log1p(-p / multiplier_), 1.0 / params_.weibull_shape);
    }
    // The core branch tops out at graft_prob + offset + core_scale, which can be
    // slightly below one; probabilities beyond it map to the bracket end.
    const double hi = upper_stress();
    if (p >= core_.cdf(hi, params_.graft_prob)) {
        return hi;
    }
    return invert_bracketed([this](double x) { return core_.cdf(x, params_.graft_prob); },
                            [this](double x) { return core_.pdf(x); }, p,
                            params_.graft_stress, hi,
                            core_.guess_inverse(p, params_.graft_prob));
}

// ---------------------------------------------------------------------------
// Weibull, Gaussian

double Weibull::cdf(double s) const
{
    check_stress(s);
    return -std::expm1(-std::pow(s / scale, shape));
}

PdfSides Weibull::pdf(double s) const
{
    check_stress(s);
    const double v = shape / scale * std::pow(s / scale, shape - 1.0) *
                     std::exp(-std::pow(s / scale, shape));
    return {v, v};
}

double Weibull::inverse_cdf(double p) const
{
    check_prob(p);
    return scale * std::pow(-std::log1p(-p), 1.0 / shape);
}

double Gaussian::cdf(double s) const
{
    check_stress(s);
    const double lo = normal_cdf(-mean / sd);
    return (normal_cdf((s - mean) / sd) - lo) / (1.0 - lo);
}

PdfSides Gaussian::pdf(double s) const
{
    check_stress(s);
    const double lo = normal_cdf(-mean / sd);
    const double z = (s - mean) / sd;
    const double v = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi)) /
                     (1.0 - lo);
    return {v, v};
}

double Gaussian::inverse_cdf(double p) const
{
    check_prob(p);
    if (p == 0.0) {
        return 0.0;
    }
    double hi = mean + 40.0 * sd;
    if (p >= cdf(hi)) {
        return hi;
    }
    return invert_bracketed([this](double x) { return cdf(x); },
                            [this](double x) { return pdf(x).right; }, p, 0.0, hi,
                            mean + sd * std::numbers::sqrt2 * erfinv_guess(2.0 * p - 1.0));
}

// ---------------------------------------------------------------------------
// Variant dispatch

double cdf(const Distribution& d, double s)
{
    return std::visit([s](const auto& law) { return law.cdf(s); }, d);
}

double pdf(const Distribution& d, double s) { return pdf_sides(d, s).right; }

PdfSides pdf_sides(const Distribution& d, double s)
{
    return std::visit([s](const auto& law) { return law.pdf(s); }, d);
}

double inverse_cdf(const Distribution& d, double p)
{
    return std::visit([p](const auto& law) { return law.inverse_cdf(p); }, d);
}

std::optional<double> graft_stress(const Distribution& d)
{
    if (auto* pg = std::get_if<GraftedGaussianPower>(&d)) {
        return pg->params().graft_stress;
    }
    if (auto* wg = std::get_if<GraftedWeibullGaussian>(&d)) {
        return wg->params().graft_stress;
    }
    return std::nullopt;
}

std::optional<double> tail_exponent(const Distribution& d)
{
    if (auto* pg = std::get_if<GraftedGaussianPower>(&d)) {
        return pg->params().tail_exponent;
    }
    if (auto* wg = std::get_if<GraftedWeibullGaussian>(&d)) {
        return wg->params().weibull_shape;
    }
    if (auto* w = std::get_if<Weibull>(&d)) {
        return w->shape;
    }
    return std::nullopt;
}

std::string family_name(const Distribution& d)
{
    switch (d.index()) {
        case 0: return "grafted_gaussian_power";
        case 1: return "grafted_weibull_gaussian";
        case 2: return "weibull";
        default: return "gaussian";
    }
}

}  // namespace fishnet
