#pragma once

// Collapsed-configuration fishnet lattice.
//
// Nodes sit at integer pairs (i, j), 0 <= i <= rows, 0 <= j <= cols, and exist
// when i + j is even. Each link joins (i, j) to (i +/- 1, j + 1). Column j = 0
// is the fixed (left) boundary and column j = cols the loaded (right) one.
// Link ids are gap-major: the m links crossing the gap between node columns
// j and j + 1 are ids [j * m, (j + 1) * m), ordered by the strip (row) index.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fishnet {

struct FishnetGeometry {
    int rows = 1;  ///< m, links per cross-section
    int cols = 1;  ///< n, cross-sections along the load
    double link_length = 1.0;
    double link_area = 1.0;
    double modulus = 1.0;

    int link_count() const { return rows * cols; }
};

struct MeshNode {
    int i = 0;  ///< transverse index
    int j = 0;  ///< longitudinal index
};

struct MeshLink {
    int tail = 0;  ///< node in column j
    int head = 0;  ///< node in column j + 1
    int row = 0;   ///< strip between transverse indices row and row + 1
    int gap = 0;   ///< j of the tail node
};

/// Per-link flag, nonzero when the link has failed.
using LinkMask = std::vector<std::uint8_t>;

class FishnetMesh {
  public:
    explicit FishnetMesh(const FishnetGeometry& g);

    const FishnetGeometry& geometry() const { return geometry_; }
    int rows() const { return geometry_.rows; }
    int cols() const { return geometry_.cols; }

    const std::vector<MeshNode>& nodes() const { return nodes_; }
    const std::vector<MeshLink>& links() const { return links_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int link_count() const { return static_cast<int>(links_.size()); }

    /// Links incident to a node.
    std::span<const int> incident(int node) const;
    int degree(int node) const { return static_cast<int>(incident(node).size()); }

    std::optional<int> node_at(int i, int j) const;
    /// Id of the link in strip `row` of gap `gap`.
    int link_at(int row, int gap) const { return gap * geometry_.rows + row; }

    const std::vector<int>& left_boundary() const { return left_; }
    const std::vector<int>& right_boundary() const { return right_; }
    bool is_boundary(int node) const;

    /// Node coordinates in the uncollapsed (plotting) configuration.
    Eigen::Vector2d position(int node) const;

  private:
    FishnetGeometry geometry_;
    std::vector<MeshNode> nodes_;
    std::vector<MeshLink> links_;
    std::vector<int> node_index_;  // (rows + 1) * (cols + 1), -1 if absent
    std::vector<int> adj_offsets_;
    std::vector<int> adj_links_;
    std::vector<int> left_;
    std::vector<int> right_;
};

FishnetMesh build_mesh(const FishnetGeometry& g);

/// The m links crossing the cut between node columns gap and gap + 1.
std::vector<int> cross_section_links(const FishnetMesh& mesh, int gap);

/// True iff surviving links join some left-boundary node to some right one.
bool is_connected(const FishnetMesh& mesh, std::span<const std::uint8_t> failed);

/// Component labels over surviving links: 1 reaches the left boundary,
/// 2 the right, 3 both, 0 neither (a floating fragment).
std::vector<std::uint8_t> boundary_reach(const FishnetMesh& mesh,
                                         std::span<const std::uint8_t> failed);
/// Same, reusing caller-owned buffers.
void boundary_reach(const FishnetMesh& mesh, std::span<const std::uint8_t> failed,
                    std::vector<std::uint8_t>& reach, std::vector<int>& stack);

/// Graph distance (in link hops through shared nodes) from a set of source
/// links to every link of the intact mesh.
std::vector<int> link_distances(const FishnetMesh& mesh, std::span<const int> sources);

}  // namespace fishnet
