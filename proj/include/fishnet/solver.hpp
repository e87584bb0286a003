#pragma once

// Scalar equilibrium of the collapsed fishnet.
//
// Nodal x-displacements u minimize the link energy sum k (u_head - u_tail)^2
// with u = 0 on the left boundary and u = u0 = 1 on the right one, i.e. a
// weighted graph Laplacian with Dirichlet ends. Nodes in fragments touching
// neither boundary are pinned at u = 0, so their links carry no stress.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fishnet/mesh.hpp"

namespace fishnet {

/// Set of failed links, grown one deletion at a time.
class DamageState {
  public:
    explicit DamageState(int link_count) : failed_(link_count, 0) {}
    DamageState(int link_count, std::span<const int> failed_links);

    void fail(int link);
    bool is_failed(int link) const { return failed_[link] != 0; }
    /// k, the number of failed links.
    int step() const { return static_cast<int>(order_.size()); }
    const LinkMask& mask() const { return failed_; }
    const std::vector<int>& order() const { return order_; }

  private:
    LinkMask failed_;
    std::vector<int> order_;
};

/// Per-link solution under unit boundary displacement.
struct LinkStressField {
    Eigen::VectorXd displacement;  ///< per node
    Eigen::VectorXd stress;        ///< per link; zero on failed links
    Eigen::VectorXd eta;           ///< stress / nominal_stress
    LinkMask failed;
    double reaction = 0.0;         ///< F, total force through the right boundary
    double left_reaction = 0.0;
    double nominal_stress = 0.0;   ///< F / (m A)
    bool connected = true;
};

/// Reusable solve workspace bound to one mesh.
///
/// The sparsity pattern of the intact mesh is analysed once; each solve only
/// refills values (failed links contribute zeros) and refactorizes. Not
/// thread-safe; use one instance per thread.
class LaplaceSolver {
  public:
    explicit LaplaceSolver(const FishnetMesh& mesh);
    ~LaplaceSolver();
    LaplaceSolver(LaplaceSolver&&) noexcept;
    LaplaceSolver& operator=(LaplaceSolver&&) noexcept;

    /// Solves in place into `out`; sets out.connected = false (and zero stress)
    /// when no surviving path joins the two boundaries.
    void solve(std::span<const std::uint8_t> failed, LinkStressField& out);
    LinkStressField solve(std::span<const std::uint8_t> failed);

    /// Relative residual ||A u - b|| / ||b|| of the last reduced system;
    /// only computed while residual checking is on (the default).
    double last_relative_residual() const { return last_residual_; }
    void set_residual_check(bool on) { check_residual_ = on; }
    /// Number of free (non-boundary) unknowns.
    int unknowns() const { return unknowns_; }
    /// Whether the iterative path is used (very large meshes).
    bool iterative() const;

    const FishnetMesh& mesh() const { return *mesh_; }

  private:
    struct Backend;

    const FishnetMesh* mesh_;
    int unknowns_ = 0;
    std::vector<int> unknown_of_node_;
    Eigen::SparseMatrix<double> matrix_;  // lower triangle
    std::vector<int> diag_slot_;          // per unknown
    struct LinkSlots {
        int tail_diag = -1;
        int head_diag = -1;
        int offdiag = -1;
    };
    std::vector<LinkSlots> link_slots_;
    Eigen::VectorXd rhs_;
    Eigen::VectorXd free_u_;
    std::unique_ptr<Backend> backend_;
    std::vector<std::uint8_t> reach_;
    std::vector<int> stack_;
    bool check_residual_ = true;
    double last_residual_ = 0.0;
};

/// Solve for one damage state on a fresh workspace.
LinkStressField solve(const FishnetMesh& mesh, const DamageState& damage);

/// Maximum |eta - 1| per graph-distance shell around a failed link.
struct ShellDeviation {
    int distance = 0;
    double max_deviation = 0.0;
    int links = 0;
};

/// Shells at distance >= 1 from `origin`, which must be failed in `field`.
std::vector<ShellDeviation> eta_profile(const LinkStressField& field, const FishnetMesh& mesh,
                                        int origin);

/// Shells measured from the whole failed set (multi-source distance); empty
/// for an undamaged field.
std::vector<ShellDeviation> eta_profile(const LinkStressField& field, const FishnetMesh& mesh);

/// Least-squares slope of log(max |eta - 1|) against log(distance) over shells
/// 2..8 around the damage. Requires a mesh of at least 64 x 64 and nonempty
/// damage.
double far_field_decay_exponent(const FishnetMesh& mesh, const DamageState& damage);

}  // namespace fishnet
