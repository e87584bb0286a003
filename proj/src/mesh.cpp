#include "fishnet/mesh.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace fishnet {

FishnetMesh::FishnetMesh(const FishnetGeometry& g) : geometry_(g)
{
    if (g.rows < 1 || g.cols < 1) {
        throw std::invalid_argument("fishnet mesh needs rows >= 1 and cols >= 1");
    }
    if (!(g.link_length > 0 && g.link_area > 0 && g.modulus > 0)) {
        throw std::invalid_argument("fishnet mesh needs positive link length, area and modulus");
    }
    const int m = g.rows;
    const int n = g.cols;

    node_index_.assign(static_cast<std::size_t>(m + 1) * (n + 1), -1);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= m; ++i) {
            if ((i + j) % 2 == 0) {
                node_index_[static_cast<std::size_t>(j) * (m + 1) + i] =
                    static_cast<int>(nodes_.size());
                nodes_.push_back({i, j});
            }
        }
    }

    links_.reserve(static_cast<std::size_t>(m) * n);
    for (int j = 0; j < n; ++j) {
        for (int r = 0; r < m; ++r) {
            // Exactly one of (r, j), (r + 1, j) exists; it is the tail.
            const int ti = ((r + j) % 2 == 0) ? r : r + 1;
            const int hi = (ti == r) ? r + 1 : r;
            links_.push_back({*node_at(ti, j), *node_at(hi, j + 1), r, j});
        }
    }

    std::vector<int> count(nodes_.size(), 0);
    for (const auto& l : links_) {
        ++count[l.tail];
        ++count[l.head];
    }
    adj_offsets_.assign(nodes_.size() + 1, 0);
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        adj_offsets_[k + 1] = adj_offsets_[k] + count[k];
    }
    adj_links_.resize(adj_offsets_.back());
    std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (int id = 0; id < link_count(); ++id) {
        adj_links_[fill[links_[id].tail]++] = id;
        adj_links_[fill[links_[id].head]++] = id;
    }

    for (int k = 0; k < node_count(); ++k) {
        if (nodes_[k].j == 0) {
            left_.push_back(k);
        }
        if (nodes_[k].j == n) {
            right_.push_back(k);
        }
    }
}

std::span<const int> FishnetMesh::incident(int node) const
{
    return {adj_links_.data() + adj_offsets_[node],
            static_cast<std::size_t>(adj_offsets_[node + 1] - adj_offsets_[node])};
}

std::optional<int> FishnetMesh::node_at(int i, int j) const
{
    if (i < 0 || j < 0 || i > geometry_.rows || j > geometry_.cols) {
        return std::nullopt;
    }
    const int k = node_index_[static_cast<std::size_t>(j) * (geometry_.rows + 1) + i];
    if (k < 0) {
        return std::nullopt;
    }
    return k;
}

bool FishnetMesh::is_boundary(int node) const
{
    const int j = nodes_[node].j;
    return j == 0 || j == geometry_.cols;
}

Eigen::Vector2d FishnetMesh::position(int node) const
{
    // Diagonal net: link (i, j) -> (i +/- 1, j + 1) spans a / sqrt(2) in each axis.
    const double h = geometry_.link_length / std::sqrt(2.0);
    return {h * nodes_[node].j, h * nodes_[node].i};
}

FishnetMesh build_mesh(const FishnetGeometry& g) { return FishnetMesh(g); }

std::vector<int> cross_section_links(const FishnetMesh& mesh, int gap)
{
    if (gap < 0 || gap >= mesh.cols()) {
        throw std::out_of_range("cross_section_links: gap out of range");
    }
    std::vector<int> ids(mesh.rows());
    for (int r = 0; r < mesh.rows(); ++r) {
        ids[r] = mesh.link_at(r, gap);
    }
    return ids;
}

std::vector<std::uint8_t> boundary_reach(const FishnetMesh& mesh,
                                         std::span<const std::uint8_t> failed)
{
    std::vector<std::uint8_t> reach;
    std::vector<int> stack;
    boundary_reach(mesh, failed, reach, stack);
    return reach;
}

void boundary_reach(const FishnetMesh& mesh, std::span<const std::uint8_t> failed,
                    std::vector<std::uint8_t>& reach, std::vector<int>& stack)
{
    reach.assign(mesh.node_count(), 0);
    auto flood = [&](const std::vector<int>& seeds, std::uint8_t bit) {
        stack.assign(seeds.begin(), seeds.end());
        for (int s : seeds) {
            reach[s] |= bit;
        }
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int l : mesh.incident(v)) {
                if (failed[l]) {
                    continue;
                }
                const auto& link = mesh.links()[l];
                const int w = (link.tail == v) ? link.head : link.tail;
                if (!(reach[w] & bit)) {
                    reach[w] |= bit;
                    stack.push_back(w);
                }
            }
        }
    };
    flood(mesh.left_boundary(), 1);
    flood(mesh.right_boundary(), 2);
}

bool is_connected(const FishnetMesh& mesh, std::span<const std::uint8_t> failed)
{
    if (static_cast<int>(failed.size()) != mesh.link_count()) {
        throw std::invalid_argument("is_connected: mask size does not match link count");
    }
    const auto reach = boundary_reach(mesh, failed);
    for (int v : mesh.right_boundary()) {
        if (reach[v] & 1) {
            return true;
        }
    }
    return false;
}

std::vector<int> link_distances(const FishnetMesh& mesh, std::span<const int> sources)
{
    std::vector<int> dist(mesh.link_count(), -1);
    std::deque<int> queue;
    for (int s : sources) {
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const int l = queue.front();
        queue.pop_front();
        for (int v : {mesh.links()[l].tail, mesh.links()[l].head}) {
            for (int k : mesh.incident(v)) {
                if (dist[k] < 0) {
                    dist[k] = dist[l] + 1;
                    queue.push_back(k);
                }
            }
        }
    }
    return dist;
}

}  // namespace fishnet
