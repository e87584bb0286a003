#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fishnet/dist.hpp"
#include "fishnet/rng.hpp"

using namespace fishnet;

namespace {

std::vector<Distribution> all_families()
{
    return {GraftedGaussianPower{}, GraftedWeibullGaussian{}, Weibull{5.0, 2.0}, Gaussian{}};
}

double ks_statistic(const Distribution& d, int n, std::uint64_t seed)
{
    UniformStream u(seed);
    std::vector<double> x(n);
    for (auto& v : x) {
        v = sample(d, u);
    }
    std::sort(x.begin(), x.end());
    double D = 0.0;
    for (int i = 0; i < n; ++i) {
        const double F = cdf(d, x[i]);
        D = std::max({D, F - double(i) / n, double(i + 1) / n - F});
    }
    return D;
}

}  // namespace

TEST_CASE("grafted weibull-gaussian reference values")
{
    const Distribution wg = GraftedWeibullGaussian{};
    CHECK(std::abs(cdf(wg, 8.6) - 0.08955) < 1e-4);
    CHECK(std::abs(cdf(wg, 6.7) - 7.5e-3) < 2e-4);
}

TEST_CASE("grafted gaussian-power reference value and coefficient")
{
    const GraftedGaussianPower pg;
    CHECK(cdf(Distribution{pg}, 6.05) == doctest::Approx(5.76e-8).epsilon(0.02));
    CHECK(pg.tail_coef() == doctest::Approx(11.32).epsilon(1e-3));
}

TEST_CASE("zero stress has zero probability")
{
    for (const auto& d : all_families()) {
        CHECK(cdf(d, 0.0) == 0.0);
    }
}

TEST_CASE("negative stress is a domain error")
{
    for (const auto& d : all_families()) {
        CHECK_THROWS_AS(cdf(d, -1e-9), std::domain_error);
    }
}

TEST_CASE("inverse endpoints")
{
    const Distribution pg = GraftedGaussianPower{};
    const Distribution wg = GraftedWeibullGaussian{};
    CHECK(inverse_cdf(pg, 0.0) == 0.0);
    CHECK(std::abs(inverse_cdf(pg, 0.015) - 8.4) < 1e-8);
    CHECK(std::abs(inverse_cdf(wg, 0.08955) - 8.6) < 1e-8);
    const double med = inverse_cdf(pg, 0.5);
    CHECK(med > 9.9);
    CHECK(med < 10.1);
    for (double p : {-1e-12, 1.0, 1.5}) {
        CHECK_THROWS_AS(inverse_cdf(pg, p), std::domain_error);
    }
}

TEST_CASE("sampling a zero variate gives zero")
{
    auto zero = [] { return 0.0; };
    for (const auto& d : all_families()) {
        CHECK(sample(d, zero) == 0.0);
    }
}

TEST_CASE("sample streams are reproducible")
{
    const Distribution d = GraftedWeibullGaussian{};
    UniformStream a(77), b(77);
    for (int k = 0; k < 1000; ++k) {
        REQUIRE(sample(d, a) == sample(d, b));
    }
}

TEST_CASE("KS statistic inside the 99% band")
{
    const int n = 200000;
    for (const auto& d : {Distribution{GraftedGaussianPower{}}, Distribution{GraftedWeibullGaussian{}}}) {
        CAPTURE(family_name(d));
        CHECK(ks_statistic(d, n, 2024) < 1.63 / std::sqrt(double(n)));
    }
}

TEST_CASE("cdf is monotone on random pairs")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(0.0, 20.0);
    for (const auto& d : all_families()) {
        for (int k = 0; k < 20000; ++k) {
            double a = U(gen), b = U(gen);
            if (a > b) {
                std::swap(a, b);
            }
            REQUIRE(cdf(d, a) <= cdf(d, b));
        }
    }
}

TEST_CASE("round trip on a log grid")
{
    for (const auto& d : all_families()) {
        CAPTURE(family_name(d));
        for (int k = 0; k <= 200; ++k) {
            const double p = std::pow(10.0, -12.0 + k * (12.0 + std::log10(0.999)) / 200.0);
            CAPTURE(p);
            REQUIRE(std::abs(cdf(d, inverse_cdf(d, p)) - p) < 1e-9);
        }
    }
}

TEST_CASE("power tail below the graft")
{
    const GraftedGaussianPower pg;
    const Distribution d = pg;
    std::vector<double> lx, ly;
    for (int k = 0; k < 50; ++k) {
        const double s = 0.5 + k * (8.4 - 0.5) / 49.0;
        lx.push_back(std::log(s));
        ly.push_back(std::log(cdf(d, s)));
    }
    for (std::size_t k = 1; k < lx.size(); ++k) {
        const double slope = (ly[k] - ly[k - 1]) / (lx[k] - lx[k - 1]);
        REQUIRE(std::abs(slope - 38.0) < 1e-6);
    }
}

TEST_CASE("continuity at the graft point")
{
    for (const auto& d : {Distribution{GraftedGaussianPower{}}, Distribution{GraftedWeibullGaussian{}}}) {
        const double g = *graft_stress(d);
        const double below = cdf(d, std::nextafter(g, 0.0));
        const double above = cdf(d, std::nextafter(g, 100.0));
        CHECK(std::abs(below - above) < 1e-9);
    }
}

TEST_CASE("pdf is the derivative away from the graft")
{
    for (const auto& d : all_families()) {
        CAPTURE(family_name(d));
        const auto g = graft_stress(d);
        for (double s = 0.5; s < 15.0; s += 0.37) {
            if (g && std::abs(s - *g) < 1e-3) {
                continue;
            }
            const double h = 1e-5;
            const double fd = (cdf(d, s + h) - cdf(d, s - h)) / (2 * h);
            CAPTURE(s);
            REQUIRE(std::abs(fd - pdf(d, s)) < 1e-6 * std::max(1.0, pdf(d, s)));
        }
    }
}

TEST_CASE("pdf exposes both sides at the graft")
{
    const Distribution d = GraftedGaussianPower{};
    const auto sides = pdf_sides(d, 8.4);
    CHECK(sides.left == doctest::Approx(38.0 * 0.015 / 8.4));
    CHECK(sides.right > 0.0);
    CHECK(sides.left != doctest::Approx(sides.right));
}

TEST_CASE("probability at large stress stays within 1e-3 of one")
{
    for (const auto& d : {Distribution{GraftedGaussianPower{}}, Distribution{GraftedWeibullGaussian{}}}) {
        CHECK(std::abs(cdf(d, 1e3) - 1.0) < 1e-3);
    }
}

TEST_CASE("tail exponent and names")
{
    CHECK(*tail_exponent(Distribution{GraftedGaussianPower{}}) == 38.0);
    CHECK(*tail_exponent(Distribution{GraftedWeibullGaussian{}}) == 10.0);
    CHECK_FALSE(tail_exponent(Distribution{Gaussian{}}).has_value());
    CHECK(family_name(Distribution{Weibull{}}) == "weibull");
}

TEST_CASE("stream seeds differ between samples")
{
    CHECK(stream_seed(1, 0) != stream_seed(1, 1));
    CHECK(stream_seed(1, 0) != stream_seed(2, 0));
    UniformStream u(0);
    for (int k = 0; k < 10000; ++k) {
        const double x = u();
        REQUIRE(x > 0.0);
        REQUIRE(x < 1.0);
    }
}
