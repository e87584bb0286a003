#pragma once

// Closed-form failure probabilities of the fishnet and its limits.
//
// All models are evaluated through the hazard H = -ln(1 - P_f), which stays
// accurate deep in the tail where P_f itself would lose every digit to the
// cancellation 1 - S. Y* = ln H is returned alongside P_f.

#include <span>
#include <string>
#include <vector>

#include "fishnet/dist.hpp"
#include "fishnet/mesh.hpp"

namespace fishnet {

struct ModelParams {
    int N = 512;
    int nu1 = 6;
    double eta_a = 1.36;
    double eta_b = 1.36;
    int nu2 = 6;
    double eta2 = 1.5;
};

enum class Model { weakest_link, two_term, three_term, bundle };

std::string model_name(Model m);

struct ModelValue {
    double pf = 0.0;
    double ystar = 0.0;    ///< ln(-ln(1 - pf)); -inf when pf = 0
    bool clamped = false;  ///< truncated series left [0, 1] and was clipped
};

ModelValue evaluate(Model model, const Distribution& P1, const ModelParams& params, double sigma);

double weakest_link_cdf(const Distribution& P1, int N, double sigma);

/// N P1(s) prod_i [1 - P1(lambda_i s)], lambda_i = max(eta_i, 1), with N taken
/// as eta.size() + 1 (the eta list excludes the failed link).
double exact_two_term_survival_factor(const Distribution& P1, std::span<const double> eta,
                                      double sigma);

double p_delta(const Distribution& P1, double eta_a, int nu1, double sigma);

double two_term_cdf(const Distribution& P1, const ModelParams& params, double sigma);

/// Clamped to [0, 1]; `clamped` reports whether the clip was needed.
ModelValue three_term_cdf(const Distribution& P1, const ModelParams& params, double sigma);

/// Terms of the three-term survival bracket, each relative to (1 - P1)^N.
struct ThreeTermParts {
    double p_s1 = 0.0;   ///< N P1 P_delta
    double p_s21 = 0.0;  ///< second failure next to the first
    double p_s22 = 0.0;  ///< second failure far from the first
    double p_delta21 = 1.0;
    double p_delta22 = 1.0;
};

ThreeTermParts three_term_parts(const Distribution& P1, const ModelParams& params, double sigma);

/// Equal-load-sharing bundle truncated after two failures. N >= 3.
double bundle_series_cdf(const Distribution& P1, int N, double sigma);

/// First stress where P_delta drops through 1/2.
double sigma_transition(const Distribution& P1, double eta_a, int nu1);

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationOptions {
    double threshold = 1.1;  ///< links with eta below this count as unamplified
};

/// Lattice constants plus the redistribution fields they came from.
struct Calibration {
    ModelParams params;
    int first_link = -1;
    int second_link = -1;
    std::vector<double> eta1;  ///< stress ratios after the first failure, per link id
    std::vector<double> eta2;  ///< after the second
};

/// Interior link near the middle of the mesh.
int central_link(const FishnetMesh& mesh);

/// Log-spaced stresses whose P1 spans [p_lo, p_hi].
std::vector<double> sigma_band(const Distribution& P1, double p_lo, double p_hi, int points);

/// Averaged amplification: nu copies of P1(eta_a s) reproduce the excess
/// hazard of the full product prod [1 - P1(max(eta_i, 1) s)] on the band.
double fit_eta_a(const Distribution& P1, std::span<const double> eta, int nu);

/// eta_b with nu P1(eta_b s) matching the summed P1(eta_j s) of the given links.
double fit_eta_b(const Distribution& P1, std::span<const double> amplified);

/// Mesh of at least 16 x 16. Throws when no link reaches the threshold.
Calibration calibrate_params(const FishnetMesh& mesh, const Distribution& P1,
                             const CalibrationOptions& options = {});

// ---------------------------------------------------------------------------
// Deep-tail asymptotes

enum class TailForm { weakest_link, two_term_simplified, two_term, bundle };

struct TailFit {
    double slope = 0.0;      ///< dY*/d ln(sigma)
    double intercept = 0.0;  ///< c in Y* = k ln P1 + c
    double order = 0.0;      ///< k
};

/// Fits the model over the band P1 in [1e-14, 1e-10]. two_term_simplified
/// sets P_delta = 1; two_term uses `params`.
TailFit weibull_asymptote_check(const Distribution& P1, int N, TailForm form = TailForm::two_term_simplified,
                                const ModelParams& params = {});

// ---------------------------------------------------------------------------

struct CdfCurve {
    std::string model;
    std::vector<double> sigma;
    std::vector<double> pf;
    std::vector<double> ystar;
};

CdfCurve tabulate(Model model, const Distribution& P1, const ModelParams& params,
                  std::span<const double> sigmas);

}  // namespace fishnet
