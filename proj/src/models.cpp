#include "fishnet/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "fishnet/solver.hpp"
#include "fishnet/stats.hpp"

namespace fishnet {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -ln(1 - p) - p, without cancellation for small p.
double g1(double p)
{
    if (p < 1e-4) {
        return p * p * (0.5 + p * (1.0 / 3.0 + p * 0.25));
    }
    return -std::log1p(-p) - p;
}

// x - ln(1 + x)
double h(double x)
{
    if (std::abs(x) < 1e-4) {
        return x * x * (0.5 - x * (1.0 / 3.0 - x * 0.25));
    }
    return x - std::log1p(x);
}

// expm1(y) - y
double em1x(double y)
{
    if (std::abs(y) < 1e-4) {
        return y * y * (0.5 + y * (1.0 / 6.0 + y / 24.0));
    }
    return std::expm1(y) - y;
}

// Hazard with its log kept separately for when H itself underflows.
struct Hazard {
    double H = 0.0;
    double lnH = -kInf;
    bool clamped = false;
};

Hazard from_hazard(double H)
{
    Hazard z;
    if (!(H > 0.0)) {
        z.H = 0.0;
        z.lnH = -kInf;
        z.clamped = H < 0.0;
        return z;
    }
    z.H = H;
    z.lnH = std::log(H);
    return z;
}

ModelValue to_value(const Hazard& z)
{
    ModelValue v;
    v.pf = -std::expm1(-z.H);
    v.ystar = z.lnH;
    v.clamped = z.clamped;
    return v;
}

bool tiny(double p) { return p > 0.0 && p < 1e-100; }

Hazard weakest_link_hazard(double p, int N)
{
    if (p >= 1.0) {
        return {kInf, kInf, false};
    }
    if (p <= 0.0) {
        return {};
    }
    const double lq = -std::log1p(-p);
    return {N * lq, std::log(static_cast<double>(N)) + std::log(lq), false};
}

// ln P_delta; pe = P1(eta_a sigma).
double log_p_delta(double p, double pe, int nu)
{
    const double lq = std::log1p(-p);
    if (nu == 0) {
        return -lq;
    }
    return -lq + nu * (std::log1p(-pe) - lq);
}

// 1 - P_f = (1 - p)^N (1 + N p P_delta); `simplified` fixes P_delta = 1.
Hazard two_term_hazard(double p, double pe, int N, int nu, bool simplified)
{
    if (p >= 1.0) {
        return {kInf, kInf, false};
    }
    if (p <= 0.0) {
        return {};
    }
    const double Nd = N;
    if (tiny(p) && Nd * pe < 1e-8) {
        // Leading order in p; H itself may be below the double range.
        const double c = simplified ? p * Nd * (Nd + 1) / 2
                                    : p * Nd * (Nd - 1 - 2.0 * nu) / 2 + Nd * nu * pe;
        Hazard z;
        z.H = p * c;
        z.lnH = std::log(p) + std::log(c);
        return z;
    }
    const double lpd = simplified ? 0.0 : log_p_delta(p, pe, nu);
    const double x = Nd * p * std::exp(lpd);
    double H;
    if (p < 0.5) {
        H = Nd * g1(p) + h(x) - Nd * p * std::expm1(lpd);
    }
    else {
        H = -Nd * std::log1p(-p) - std::log1p(x);
    }
    return from_hazard(H);
}

}  // namespace

ThreeTermParts three_term_parts(const Distribution& P1, const ModelParams& q, double sigma)
{
    const double p = cdf(P1, sigma);
    if (p >= 1.0) {
        throw std::domain_error("three_term_parts: P1(sigma) = 1 is a pole");
    }
    const double pe = cdf(P1, q.eta_a * sigma);
    const double pb = cdf(P1, q.eta_b * sigma);
    const double p2 = cdf(P1, q.eta2 * sigma);
    const double Nd = q.N;
    const double lq = std::log1p(-p);
    ThreeTermParts t;
    t.p_delta21 = std::exp(q.nu2 * std::log1p(-p2) - (q.nu2 + 2) * lq);
    t.p_delta22 = std::exp(2.0 * q.nu1 * std::log1p(-pe) - (2.0 * q.nu1 + 2) * lq);
    t.p_s1 = Nd * p * std::exp(log_p_delta(p, pe, q.nu1));
    t.p_s21 = Nd * q.nu1 * (p * pb - 0.5 * p * p) * t.p_delta21;
    t.p_s22 = 0.5 * Nd * (Nd - q.nu1 - 1) * p * p * t.p_delta22;
    return t;
}

namespace {

Hazard three_term_hazard(const Distribution& P1, const ModelParams& q, double sigma)
{
    const double p = cdf(P1, sigma);
    if (p >= 1.0) {
        return {kInf, kInf, false};
    }
    if (p <= 0.0) {
        return {};
    }
    const double pe = cdf(P1, q.eta_a * sigma);
    const double pb = cdf(P1, q.eta_b * sigma);
    const double p2 = cdf(P1, q.eta2 * sigma);
    const double Nd = q.N;

    if (tiny(p) && Nd * std::max({pe, pb, p2}) < 1e-8) {
        // The p^2 terms cancel exactly, leaving N nu1 p (pe - pb).
        const double c = Nd * q.nu1 * (pe - pb);
        Hazard z;
        if (c > 0.0) {
            z.H = p * c;
            z.lnH = std::log(p) + std::log(c);
        }
        else {
            z.clamped = c < 0.0;
        }
        return z;
    }

    const auto t = three_term_parts(P1, q, sigma);
    const double lpd = log_p_delta(p, pe, q.nu1);
    const double X = t.p_s1 + t.p_s21 + t.p_s22;
    double H;
    if (p < 0.5) {
        H = Nd * g1(p) + h(X) + (-Nd * p * std::expm1(lpd) - t.p_s21 - t.p_s22);
    }
    else {
        H = -Nd * std::log1p(-p) - std::log1p(X);
    }
    return from_hazard(H);
}

Hazard bundle_hazard(const Distribution& P1, int N, double sigma)
{
    if (N < 3) {
        throw std::invalid_argument("bundle_series_cdf: need N >= 3");
    }
    const double Nd = N;
    const double p = cdf(P1, sigma);
    if (p <= 0.0) {
        return {};
    }
    if (p >= 1.0) {
        return {kInf, kInf, false};
    }
    const double p1 = cdf(P1, Nd * sigma / (Nd - 1));
    const double p2 = cdf(P1, Nd * sigma / (Nd - 2));
    const double K = Nd * (Nd - 1) * (p * p1 - 0.5 * p * p);

    if (Nd * std::max({p, p1, p2}) < 1e-6) {
        // Third-order expansion of 1 - P_S0 - P_S1 - P_S2.
        const double r1 = p1 / p;
        const double r2 = p2 / p;
        const double c = Nd * (Nd - 1) * (Nd - 2) *
                         (1.0 / 6.0 - 0.5 * r1 * r1 + r1 * r2 - 0.5 * r2);
        Hazard z;
        if (c > 0.0) {
            z.lnH = 3.0 * std::log(p) + std::log(c);
            z.H = std::exp(z.lnH);
        }
        else {
            z.clamped = c < 0.0;
        }
        return z;
    }

    // Each bracket is O(p^2) and computed without cancellation.
    const double y0 = Nd * std::log1p(-p);
    const double e1 = p1 < 1.0 ? std::expm1((Nd - 1) * std::log1p(-p1)) : -1.0;
    const double e2 = p2 < 1.0 ? std::expm1((Nd - 2) * std::log1p(-p2)) : -1.0;
    double pf;
    if (p < 0.5) {
        pf = (-em1x(y0) + Nd * g1(p)) - Nd * p * e1 - K - K * e2;
    }
    else {
        pf = 1.0 - (std::exp(y0) + Nd * p * (1.0 + e1) + K * (1.0 + e2));
    }
    Hazard z;
    if (pf <= 0.0) {
        z.clamped = pf < 0.0;
        return z;
    }
    if (pf >= 1.0) {
        z.clamped = pf > 1.0;
        z.H = kInf;
        z.lnH = kInf;
        return z;
    }
    return from_hazard(-std::log1p(-pf));
}

std::vector<double> amplified_only(std::span<const double> eta, double threshold)
{
    std::vector<double> out;
    for (double e : eta) {
        if (e >= threshold) {
            out.push_back(e);
        }
    }
    return out;
}

template <class F>
double minimize_on(F f, double lo, double hi)
{
    const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 40);
    return r.first;
}

}  // namespace

std::string model_name(Model m)
{
    switch (m) {
    case Model::weakest_link: return "weakest_link";
    case Model::two_term: return "two_term";
    case Model::three_term: return "three_term";
    case Model::bundle: return "bundle";
    }
    return "unknown";
}

ModelValue evaluate(Model model, const Distribution& P1, const ModelParams& q, double sigma)
{
    switch (model) {
    case Model::weakest_link:
        return to_value(weakest_link_hazard(cdf(P1, sigma), q.N));
    case Model::two_term:
        return to_value(
            two_term_hazard(cdf(P1, sigma), cdf(P1, q.eta_a * sigma), q.N, q.nu1, false));
    case Model::three_term:
        return to_value(three_term_hazard(P1, q, sigma));
    case Model::bundle:
        return to_value(bundle_hazard(P1, q.N, sigma));
    }
    throw std::invalid_argument("evaluate: unknown model");
}

double weakest_link_cdf(const Distribution& P1, int N, double sigma)
{
    return to_value(weakest_link_hazard(cdf(P1, sigma), N)).pf;
}

double exact_two_term_survival_factor(const Distribution& P1, std::span<const double> eta,
                                      double sigma)
{
    if (eta.empty()) {
        throw std::invalid_argument("exact_two_term_survival_factor: empty eta list");
    }
    const double p = cdf(P1, sigma);
    if (p <= 0.0) {
        return 0.0;
    }
    double log_prod = 0.0;
    for (double e : eta) {
        log_prod += std::log1p(-cdf(P1, std::max(e, 1.0) * sigma));
    }
    return static_cast<double>(eta.size() + 1) * p * std::exp(log_prod);
}

double p_delta(const Distribution& P1, double eta_a, int nu1, double sigma)
{
    const double p = cdf(P1, sigma);
    if (p >= 1.0) {
        throw std::domain_error("p_delta: P1(sigma) = 1 is a pole");
    }
    return std::exp(log_p_delta(p, cdf(P1, eta_a * sigma), nu1));
}

double two_term_cdf(const Distribution& P1, const ModelParams& params, double sigma)
{
    return evaluate(Model::two_term, P1, params, sigma).pf;
}

ModelValue three_term_cdf(const Distribution& P1, const ModelParams& params, double sigma)
{
    return evaluate(Model::three_term, P1, params, sigma);
}

double bundle_series_cdf(const Distribution& P1, int N, double sigma)
{
    return to_value(bundle_hazard(P1, N, sigma)).pf;
}

double sigma_transition(const Distribution& P1, double eta_a, int nu1)
{
    const double lo = inverse_cdf(P1, 1e-15);
    const double hi = inverse_cdf(P1, 1.0 - 1e-6);
    auto f = [&](double s) { return p_delta(P1, eta_a, nu1, s) - 0.5; };

    constexpr int points = 2000;
    double prev_s = lo;
    double prev_f = f(lo);
    for (int k = 1; k <= points; ++k) {
        const double s = lo * std::pow(hi / lo, static_cast<double>(k) / points);
        const double v = f(s);
        if (prev_f > 0.0 && v <= 0.0) {
            if (v == 0.0) {
                return s;
            }
            auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::abs(b); };
            const auto r = boost::math::tools::bisect(f, prev_s, s, tol);
            return 0.5 * (r.first + r.second);
        }
        prev_s = s;
        prev_f = v;
    }
    throw std::runtime_error("sigma_transition: P_delta never falls through 1/2");
}

// ---------------------------------------------------------------------------
// Calibration

int central_link(const FishnetMesh& mesh)
{
    return mesh.link_at((mesh.rows() - 1) / 2, mesh.cols() / 2);
}

std::vector<double> sigma_band(const Distribution& P1, double p_lo, double p_hi, int points)
{
    const double lo = inverse_cdf(P1, p_lo);
    const double hi = inverse_cdf(P1, p_hi);
    if (!(lo > 0.0 && hi > lo) || points < 2) {
        throw std::invalid_argument("sigma_band: empty stress band");
    }
    std::vector<double> s(points);
    for (int k = 0; k < points; ++k) {
        s[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
    }
    return s;
}

double fit_eta_a(const Distribution& P1, std::span<const double> eta, int nu)
{
    if (nu < 1) {
        throw std::invalid_argument("fit_eta_a: need at least one amplified link");
    }
    std::vector<double> lambda;
    for (double e : eta) {
        if (e > 1.0) {
            lambda.push_back(e);
        }
    }
    if (lambda.empty()) {
        throw std::invalid_argument("fit_eta_a: no link is amplified");
    }
    const double top = *std::max_element(lambda.begin(), lambda.end());
    const auto band = sigma_band(P1, 1e-10, 0.5, 60);

    // Stresses where some amplified link is certain to fail carry no
    // information about the average and are dropped.
    std::vector<double> sig, lq, log_excess;
    for (double s : band) {
        const double q = std::log1p(-cdf(P1, s));
        double e = 0.0;
        for (double l : lambda) {
            e += q - std::log1p(-cdf(P1, l * s));
        }
        if (std::isfinite(e) && e > 0.0) {
            sig.push_back(s);
            lq.push_back(q);
            log_excess.push_back(std::log(e));
        }
    }
    if (sig.size() < 2) {
        throw std::runtime_error("fit_eta_a: fitting band is empty");
    }
    auto objective = [&](double ea) {
        double sum = 0.0;
        for (std::size_t k = 0; k < sig.size(); ++k) {
            const double e = nu * (lq[k] - std::log1p(-cdf(P1, ea * sig[k])));
            const double r = log_excess[k] - std::log(e);
            sum += r * r;
        }
        return sum;
    };
    return minimize_on(objective, 1.0 + 1e-9, top);
}

double fit_eta_b(const Distribution& P1, std::span<const double> amplified)
{
    if (amplified.empty()) {
        throw std::invalid_argument("fit_eta_b: no amplified links");
    }
    const double nu = static_cast<double>(amplified.size());
    const double top = *std::max_element(amplified.begin(), amplified.end());
    const double bottom = *std::min_element(amplified.begin(), amplified.end());
    const auto band = sigma_band(P1, 1e-10, 0.5, 60);
    std::vector<double> log_target(band.size());
    for (std::size_t k = 0; k < band.size(); ++k) {
        double t = 0.0;
        for (double e : amplified) {
            t += cdf(P1, e * band[k]);
        }
        log_target[k] = std::log(t);
    }
    if (top == bottom) {
        return top;
    }
    auto objective = [&](double eb) {
        double sum = 0.0;
        for (std::size_t k = 0; k < band.size(); ++k) {
            const double r = log_target[k] - std::log(nu * cdf(P1, eb * band[k]));
            sum += r * r;
        }
        return sum;
    };
    return minimize_on(objective, bottom, top);
}

Calibration calibrate_params(const FishnetMesh& mesh, const Distribution& P1,
                             const CalibrationOptions& options)
{
    if (mesh.rows() < 16 || mesh.cols() < 16) {
        throw std::invalid_argument("calibrate_params: mesh must be at least 16 x 16");
    }
    Calibration cal;
    cal.params.N = mesh.link_count();
    LaplaceSolver solver(mesh);

    auto surviving = [&](const LinkStressField& f) {
        std::vector<double> out;
        for (int id = 0; id < mesh.link_count(); ++id) {
            if (!f.failed[id]) {
                out.push_back(f.eta[id]);
            }
        }
        return out;
    };

    DamageState damage(mesh.link_count());
    cal.first_link = central_link(mesh);
    damage.fail(cal.first_link);
    auto field = solver.solve(damage.mask());
    if (!field.connected) {
        throw std::runtime_error("calibrate_params: a single failure disconnects the mesh");
    }
    cal.eta1.assign(field.eta.data(), field.eta.data() + field.eta.size());
    const auto eta1 = surviving(field);
    const auto amp1 = amplified_only(eta1, options.threshold);
    if (amp1.empty()) {
        throw std::runtime_error("calibrate_params: no link reaches the amplification threshold");
    }
    cal.params.nu1 = static_cast<int>(amp1.size());
    cal.params.eta_a = fit_eta_a(P1, eta1, cal.params.nu1);
    cal.params.eta_b = fit_eta_b(P1, amp1);

    int next = -1;
    for (int id = 0; id < mesh.link_count(); ++id) {
        if (!field.failed[id] && (next < 0 || field.eta[id] > field.eta[next])) {
            next = id;
        }
    }
    cal.second_link = next;
    damage.fail(next);
    field = solver.solve(damage.mask());
    if (!field.connected) {
        throw std::runtime_error("calibrate_params: two failures disconnect the mesh");
    }
    cal.eta2.assign(field.eta.data(), field.eta.data() + field.eta.size());
    const auto eta2 = surviving(field);
    const auto amp2 = amplified_only(eta2, options.threshold);
    if (amp2.empty()) {
        throw std::runtime_error("calibrate_params: no link amplified after the second failure");
    }
    cal.params.nu2 = static_cast<int>(amp2.size());
    cal.params.eta2 = fit_eta_a(P1, eta2, cal.params.nu2);
    return cal;
}

// ---------------------------------------------------------------------------

TailFit weibull_asymptote_check(const Distribution& P1, int N, TailForm form,
                                const ModelParams& params)
{
    const auto band = sigma_band(P1, 1e-14, 1e-10, 41);
    std::vector<double> x, lp, y;
    for (double s : band) {
        const double p = cdf(P1, s);
        Hazard z;
        switch (form) {
        case TailForm::weakest_link: z = weakest_link_hazard(p, N); break;
        case TailForm::two_term_simplified: z = two_term_hazard(p, 0.0, N, 0, true); break;
        case TailForm::two_term:
            z = two_term_hazard(p, cdf(P1, params.eta_a * s), N, params.nu1, false);
            break;
        case TailForm::bundle: z = bundle_hazard(P1, N, s); break;
        }
        if (!std::isfinite(z.lnH)) {
            continue;
        }
        x.push_back(std::log(s));
        lp.push_back(std::log(p));
        y.push_back(z.lnH);
    }
    if (x.size() < 2) {
        throw std::runtime_error("weibull_asymptote_check: band holds no usable points");
    }
    TailFit fit;
    fit.slope = fit_line(x, y).slope;
    const auto in_p = fit_line(lp, y);
    fit.order = in_p.slope;
    fit.intercept = in_p.intercept;
    return fit;
}

CdfCurve tabulate(Model model, const Distribution& P1, const ModelParams& params,
                  std::span<const double> sigmas)
{
    CdfCurve c;
    c.model = model_name(model);
    for (double s : sigmas) {
        const auto v = evaluate(model, P1, params, s);
        c.sigma.push_back(s);
        c.pf.push_back(v.pf);
        c.ystar.push_back(v.ystar);
    }
    return c;
}

}  // namespace fishnet
