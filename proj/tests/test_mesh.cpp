#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fishnet/mesh.hpp"

using namespace fishnet;

namespace {

FishnetMesh grid(int m, int n)
{
    FishnetGeometry g;
    g.rows = m;
    g.cols = n;
    return FishnetMesh(g);
}

// Nodes (i, j) with i + j even, 0 <= i <= m, 0 <= j <= n, that have at
// least one of the four diagonal neighbours.
int expected_degree(int m, int n, int i, int j)
{
    int d = 0;
    for (int di : {-1, 1}) {
        for (int dj : {-1, 1}) {
            const int a = i + di, b = j + dj;
            d += (a >= 0 && a <= m && b >= 0 && b <= n) ? 1 : 0;
        }
    }
    return d;
}

}  // namespace

TEST_CASE("chain 1x4")
{
    const auto mesh = grid(1, 4);
    CHECK(mesh.link_count() == 4);
    CHECK(mesh.node_count() == 5);
    int maxdeg = 0;
    for (int v = 0; v < mesh.node_count(); ++v) {
        maxdeg = std::max(maxdeg, mesh.degree(v));
    }
    CHECK(maxdeg == 2);
}

TEST_CASE("2x3 mesh")
{
    const auto mesh = grid(2, 3);
    CHECK(mesh.link_count() == 6);
    CHECK(mesh.node_count() == 6);
    const auto v = mesh.node_at(1, 1);
    REQUIRE(v.has_value());
    CHECK(mesh.degree(*v) == 4);
    CHECK_FALSE(mesh.node_at(0, 1).has_value());
}

TEST_CASE("16x32 mesh")
{
    CHECK(grid(16, 32).link_count() == 512);
}

TEST_CASE("empty geometry is rejected")
{
    CHECK_THROWS(grid(0, 3));
    CHECK_THROWS(grid(3, 0));
}

TEST_CASE("cross sections")
{
    CHECK(cross_section_links(grid(2, 3), 0).size() == 2);
    CHECK(cross_section_links(grid(1, 4), 2).size() == 1);
    const auto mesh = grid(16, 32);
    std::set<int> all;
    for (int gap = 0; gap < 32; ++gap) {
        const auto cs = cross_section_links(mesh, gap);
        REQUIRE(cs.size() == 16);
        for (int l : cs) {
            REQUIRE(all.insert(l).second);
            REQUIRE(mesh.links()[l].gap == gap);
        }
    }
    CHECK(int(all.size()) == mesh.link_count());
    CHECK_THROWS(cross_section_links(mesh, 32));
    CHECK_THROWS(cross_section_links(mesh, -1));
}

TEST_CASE("degree histogram over small meshes")
{
    for (int m = 1; m <= 8; ++m) {
        for (int n = 1; n <= 8; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            const auto mesh = grid(m, n);
            REQUIRE(mesh.link_count() == m * n);
            int total = 0;
            int present = 0;
            for (int i = 0; i <= m; ++i) {
                for (int j = 0; j <= n; ++j) {
                    const auto v = mesh.node_at(i, j);
                    const int want = (i + j) % 2 == 0 ? expected_degree(m, n, i, j) : 0;
                    if (want == 0) {
                        REQUIRE_FALSE(v.has_value());
                        continue;
                    }
                    REQUIRE(v.has_value());
                    REQUIRE(mesh.degree(*v) == want);
                    total += want;
                    ++present;
                }
            }
            REQUIRE(present == mesh.node_count());
            REQUIRE(total == 2 * m * n);
        }
    }
}

TEST_CASE("boundaries are the end columns")
{
    const auto mesh = grid(4, 6);
    for (int v : mesh.left_boundary()) {
        CHECK(mesh.nodes()[v].j == 0);
    }
    for (int v : mesh.right_boundary()) {
        CHECK(mesh.nodes()[v].j == 6);
    }
    CHECK(mesh.left_boundary().size() == 3);
    CHECK(mesh.right_boundary().size() == 3);
}

TEST_CASE("connectivity")
{
    for (int m = 1; m <= 6; ++m) {
        for (int n = 1; n <= 6; ++n) {
            const auto mesh = grid(m, n);
            LinkMask none(mesh.link_count(), 0);
            REQUIRE(is_connected(mesh, none));
            LinkMask cut(mesh.link_count(), 0);
            for (int l : cross_section_links(mesh, n / 2)) {
                cut[l] = 1;
            }
            REQUIRE_FALSE(is_connected(mesh, cut));
        }
    }
    const auto chain = grid(1, 4);
    for (int l = 0; l < 4; ++l) {
        LinkMask f(4, 0);
        f[l] = 1;
        CHECK_FALSE(is_connected(chain, f));
    }
}

TEST_CASE("link distances")
{
    const auto mesh = grid(8, 8);
    const int src = mesh.link_at(3, 4);
    const std::vector<int> s{src};
    const auto d = link_distances(mesh, s);
    CHECK(d[src] == 0);
    int ones = 0;
    for (int x : d) {
        ones += x == 1;
    }
    CHECK(ones == 6);
}
