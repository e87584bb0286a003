#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fishnet/solver.hpp"

using namespace fishnet;

namespace {

FishnetMesh grid(int m, int n, double modulus = 1.0)
{
    FishnetGeometry g;
    g.rows = m;
    g.cols = n;
    g.modulus = modulus;
    return FishnetMesh(g);
}

double gap_force(const FishnetMesh& mesh, const LinkStressField& f, int gap)
{
    double s = 0.0;
    for (int l : cross_section_links(mesh, gap)) {
        s += f.stress[l] * mesh.geometry().link_area;
    }
    return s;
}

}  // namespace

TEST_CASE("undamaged field is uniform")
{
    const auto mesh = grid(16, 32);
    LaplaceSolver solver(mesh);
    const auto f = solver.solve(LinkMask(mesh.link_count(), 0));
    CHECK(f.connected);
    for (int l = 0; l < mesh.link_count(); ++l) {
        REQUIRE(std::abs(f.eta[l] - 1.0) < 1e-12);
    }
    CHECK(solver.last_relative_residual() < 1e-12);
}

TEST_CASE("force balance and reaction symmetry under damage")
{
    const auto mesh = grid(16, 32);
    std::mt19937_64 gen(3);
    DamageState dmg(mesh.link_count());
    std::uniform_int_distribution<int> pick(0, mesh.link_count() - 1);
    while (dmg.step() < 40) {
        const int l = pick(gen);
        if (!dmg.is_failed(l)) {
            dmg.fail(l);
        }
    }
    const auto f = solve(mesh, dmg);
    REQUIRE(f.connected);
    CHECK(f.left_reaction == doctest::Approx(f.reaction).epsilon(1e-10));
    for (int gap = 0; gap < mesh.cols(); ++gap) {
        REQUIRE(gap_force(mesh, f, gap) == doctest::Approx(f.reaction).epsilon(1e-10));
    }
    for (int l : dmg.order()) {
        CHECK(f.stress[l] == 0.0);
    }
}

TEST_CASE("stresses scale with the modulus")
{
    const auto a = grid(8, 8, 1.0);
    const auto b = grid(8, 8, 2.5);
    DamageState dmg(a.link_count());
    dmg.fail(a.link_at(3, 4));
    dmg.fail(a.link_at(4, 2));
    const auto fa = solve(a, dmg);
    const auto fb = solve(b, dmg);
    for (int l = 0; l < a.link_count(); ++l) {
        REQUIRE(fb.stress[l] == doctest::Approx(2.5 * fa.stress[l]).epsilon(1e-12));
        REQUIRE(fb.eta[l] == doctest::Approx(fa.eta[l]).epsilon(1e-12));
    }
}

TEST_CASE("adding a failure never stiffens the mesh")
{
    const auto mesh = grid(8, 12);
    LaplaceSolver solver(mesh);
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> order(mesh.link_count());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), gen);
        LinkMask failed(mesh.link_count(), 0);
        double last = solver.solve(failed).reaction;
        for (int l : order) {
            failed[l] = 1;
            const auto f = solver.solve(failed);
            if (!f.connected) {
                CHECK(f.reaction == 0.0);
                break;
            }
            REQUIRE(f.reaction <= last * (1 + 1e-12));
            last = f.reaction;
        }
    }
}

TEST_CASE("chain limit")
{
    const int n = 7;
    const auto mesh = grid(1, n);
    const auto f = solve(mesh, DamageState(n));
    for (int l = 0; l < n; ++l) {
        CHECK(f.stress[l] == doctest::Approx(1.0 / n));
    }
    DamageState one(n);
    one.fail(3);
    CHECK_FALSE(solve(mesh, one).connected);
}

TEST_CASE("bundle limit")
{
    const int m = 9;
    const auto mesh = grid(m, 1);
    DamageState dmg(m);
    for (int k = 0; k < m - 1; ++k) {
        const auto f = solve(mesh, dmg);
        REQUIRE(f.connected);
        CHECK(f.reaction == doctest::Approx(double(m - k)));
        for (int l = 0; l < m; ++l) {
            if (!dmg.is_failed(l)) {
                REQUIRE(f.stress[l] == doctest::Approx(1.0));
            }
        }
        dmg.fail((k * 4) % m);
    }
}

TEST_CASE("floating fragment carries no stress")
{
    const auto mesh = grid(4, 6);
    const int floating = mesh.link_at(0, 2);
    DamageState dmg(mesh.link_count());
    for (int l : {mesh.link_at(0, 1), mesh.link_at(1, 2), mesh.link_at(0, 3), mesh.link_at(1, 3)}) {
        dmg.fail(l);
    }
    const auto reach = boundary_reach(mesh, dmg.mask());
    CHECK(reach[floating] == 0);
    const auto f = solve(mesh, dmg);
    CHECK(f.connected);
    CHECK(f.stress[floating] == 0.0);
    const auto& link = mesh.links()[floating];
    CHECK(f.displacement[link.tail] == 0.0);
    CHECK(f.displacement[link.head] == 0.0);
}

TEST_CASE("single failure in a 64x64 mesh")
{
    const auto mesh = grid(64, 64);
    const int origin = mesh.link_at(31, 32);
    DamageState dmg(mesh.link_count());
    dmg.fail(origin);
    const auto f = solve(mesh, dmg);
    double hi = 0.0, lo = 2.0;
    int over = 0;
    for (int l = 0; l < mesh.link_count(); ++l) {
        if (l == origin) {
            continue;
        }
        hi = std::max(hi, f.eta[l]);
        lo = std::min(lo, f.eta[l]);
        over += std::abs(f.eta[l] - 1.0) > 0.05;
    }
    CHECK(lo == doctest::Approx(0.64).epsilon(0.05 / 0.64));
    // Nearly antisymmetric about the failed link: the end neighbours gain
    // about what the side neighbours lose.
    CHECK(hi - 1.0 == doctest::Approx(1.0 - lo).epsilon(0.01));
    CHECK(over < 30);

    const auto shells = eta_profile(f, mesh, origin);
    REQUIRE(shells.size() >= 4);
    CHECK(shells[0].distance == 1);
    for (const auto& s : shells) {
        CHECK(s.max_deviation <= shells[0].max_deviation);
        if (s.distance >= 4) {
            CHECK(s.max_deviation < 0.05);
        }
    }
    CHECK(shells[0].max_deviation == doctest::Approx(hi - 1.0));
}

TEST_CASE("eta profile preconditions")
{
    const auto mesh = grid(8, 8);
    const auto f = solve(mesh, DamageState(mesh.link_count()));
    CHECK_THROWS(eta_profile(f, mesh, 5));
    CHECK(eta_profile(f, mesh).empty());
}

TEST_CASE("far field decay")
{
    const auto mesh = grid(64, 64);
    DamageState one(mesh.link_count());
    one.fail(mesh.link_at(31, 32));
    const double e = far_field_decay_exponent(mesh, one);
    CHECK(e < 0.0);
    CHECK(std::abs(e) >= 1.0);
    CHECK(std::abs(e) <= 3.0);
    CHECK_THROWS(far_field_decay_exponent(mesh, DamageState(mesh.link_count())));
    const auto small = grid(16, 16);
    DamageState s(small.link_count());
    s.fail(small.link_at(7, 8));
    CHECK_THROWS(far_field_decay_exponent(small, s));
}

TEST_CASE("a slit amplifies its tips more than one failure")
{
    const auto mesh = grid(64, 64);
    DamageState one(mesh.link_count());
    one.fail(mesh.link_at(31, 32));
    DamageState slit(mesh.link_count());
    for (int r = 30; r < 34; ++r) {
        slit.fail(mesh.link_at(r, 32));
    }
    const auto s1 = eta_profile(solve(mesh, one), mesh);
    const auto s4 = eta_profile(solve(mesh, slit), mesh);
    CHECK(s4[0].max_deviation > s1[0].max_deviation);
}

TEST_CASE("damage state bookkeeping")
{
    DamageState d(5);
    d.fail(2);
    d.fail(4);
    CHECK(d.step() == 2);
    CHECK(d.order() == std::vector<int>{2, 4});
    CHECK_THROWS(d.fail(2));
    CHECK_THROWS(d.fail(5));
}
