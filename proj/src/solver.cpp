#include "fishnet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace fishnet {
namespace {

// Above this many free nodes the reduced system goes to preconditioned CG.
constexpr int kDirectLimit = 100000;

}  // namespace

// ---------------------------------------------------------------------------
// DamageState

DamageState::DamageState(int link_count, std::span<const int> failed_links)
    : failed_(link_count, 0)
{
    for (int l : failed_links) {
        fail(l);
    }
}

void DamageState::fail(int link)
{
    if (link < 0 || link >= static_cast<int>(failed_.size())) {
        throw std::out_of_range("DamageState::fail: link id out of range");
    }
    if (failed_[link]) {
        throw std::logic_error("DamageState::fail: link already failed");
    }
    failed_[link] = 1;
    order_.push_back(link);
}

// ---------------------------------------------------------------------------
// LaplaceSolver

struct LaplaceSolver::Backend {
    using Matrix = Eigen::SparseMatrix<double>;
    Eigen::SimplicialLDLT<Matrix, Eigen::Lower, Eigen::AMDOrdering<int>> direct;
    Eigen::ConjugateGradient<Matrix, Eigen::Lower, Eigen::IncompleteCholesky<double>> cg;
    bool use_cg = false;
};

LaplaceSolver::LaplaceSolver(const FishnetMesh& mesh)
    : mesh_(&mesh), backend_(std::make_unique<Backend>())
{
    unknown_of_node_.assign(mesh.node_count(), -1);
    for (int v = 0; v < mesh.node_count(); ++v) {
        if (!mesh.is_boundary(v)) {
            unknown_of_node_[v] = unknowns_++;
        }
    }

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(unknowns_ + mesh.link_count());
    for (int u = 0; u < unknowns_; ++u) {
        entries.emplace_back(u, u, 1.0);
    }
    for (const auto& l : mesh.links()) {
        const int a = unknown_of_node_[l.tail];
        const int b = unknown_of_node_[l.head];
        if (a >= 0 && b >= 0) {
            entries.emplace_back(std::max(a, b), std::min(a, b), 1.0);
        }
    }
    matrix_.resize(unknowns_, unknowns_);
    matrix_.setFromTriplets(entries.begin(), entries.end());
    matrix_.makeCompressed();

    const double* base = matrix_.valuePtr();
    auto slot = [&](int r, int c) { return static_cast<int>(&matrix_.coeffRef(r, c) - base); };
    diag_slot_.resize(unknowns_);
    for (int u = 0; u < unknowns_; ++u) {
        diag_slot_[u] = slot(u, u);
    }
    link_slots_.resize(mesh.link_count());
    for (int id = 0; id < mesh.link_count(); ++id) {
        const auto& l = mesh.links()[id];
        const int a = unknown_of_node_[l.tail];
        const int b = unknown_of_node_[l.head];
        auto& s = link_slots_[id];
        if (a >= 0) {
            s.tail_diag = diag_slot_[a];
        }
        if (b >= 0) {
            s.head_diag = diag_slot_[b];
        }
        if (a >= 0 && b >= 0) {
            s.offdiag = slot(std::max(a, b), std::min(a, b));
        }
    }

    rhs_.resize(unknowns_);
    free_u_.resize(unknowns_);
    backend_->use_cg = unknowns_ > kDirectLimit;
    if (unknowns_ > 0) {
        if (backend_->use_cg) {
            backend_->cg.setTolerance(1e-13);
            backend_->cg.setMaxIterations(20 * unknowns_);
        }
        else {
            backend_->direct.analyzePattern(matrix_);
        }
    }
}

LaplaceSolver::~LaplaceSolver() = default;
LaplaceSolver::LaplaceSolver(LaplaceSolver&&) noexcept = default;
LaplaceSolver& LaplaceSolver::operator=(LaplaceSolver&&) noexcept = default;

bool LaplaceSolver::iterative() const { return backend_->use_cg; }

LinkStressField LaplaceSolver::solve(std::span<const std::uint8_t> failed)
{
    LinkStressField out;
    solve(failed, out);
    return out;
}

void LaplaceSolver::solve(std::span<const std::uint8_t> failed, LinkStressField& out)
{
    const FishnetMesh& mesh = *mesh_;
    const auto& g = mesh.geometry();
    if (static_cast<int>(failed.size()) != mesh.link_count()) {
        throw std::invalid_argument("solve: damage mask size does not match link count");
    }

    out.failed.assign(failed.begin(), failed.end());
    out.displacement.setZero(mesh.node_count());
    out.stress.setZero(mesh.link_count());
    out.eta.setZero(mesh.link_count());
    out.reaction = 0.0;
    out.left_reaction = 0.0;
    out.nominal_stress = 0.0;

    boundary_reach(mesh, failed, reach_, stack_);
    const auto& reach = reach_;
    out.connected = std::any_of(mesh.right_boundary().begin(), mesh.right_boundary().end(),
                                [&](int v) { return (reach[v] & 1) != 0; });
    if (!out.connected) {
        return;
    }

    const double k = g.modulus * g.link_area / g.link_length;
    double* values = matrix_.valuePtr();
    std::fill(values, values + matrix_.nonZeros(), 0.0);
    rhs_.setZero();

    for (int id = 0; id < mesh.link_count(); ++id) {
        if (failed[id]) {
            continue;
        }
        const auto& l = mesh.links()[id];
        if (reach[l.tail] == 0) {
            continue;  // floating fragment
        }
        const auto& s = link_slots_[id];
        if (s.tail_diag >= 0) {
            values[s.tail_diag] += k;
        }
        if (s.head_diag >= 0) {
            values[s.head_diag] += k;
        }
        if (s.offdiag >= 0) {
            values[s.offdiag] -= k;
        }
        // Head on the loaded boundary contributes k * u0 to the tail equation.
        if (s.head_diag < 0 && s.tail_diag >= 0) {
            rhs_[unknown_of_node_[l.tail]] += k;
        }
    }
    for (int v = 0; v < mesh.node_count(); ++v) {
        const int u = unknown_of_node_[v];
        if (u >= 0 && reach[v] == 0) {
            values[diag_slot_[u]] = 1.0;
        }
    }

    if (unknowns_ > 0) {
        if (backend_->use_cg) {
            backend_->cg.compute(matrix_);
            free_u_ = backend_->cg.solve(rhs_);
        }
        else {
            backend_->direct.factorize(matrix_);
            if (backend_->direct.info() != Eigen::Success) {
                throw std::runtime_error("solve: reduced Laplacian is singular");
            }
            free_u_ = backend_->direct.solve(rhs_);
        }
        if (check_residual_) {
            const double bnorm = rhs_.norm();
            const Eigen::VectorXd r =
                matrix_.selfadjointView<Eigen::Lower>() * free_u_ - rhs_;
            last_residual_ = bnorm > 0 ? r.norm() / bnorm : r.norm();
        }
    }
    else {
        last_residual_ = 0.0;
    }

    for (int v = 0; v < mesh.node_count(); ++v) {
        const int u = unknown_of_node_[v];
        if (u >= 0) {
            out.displacement[v] = free_u_[u];
        }
        else if (mesh.nodes()[v].j == g.cols) {
            out.displacement[v] = 1.0;
        }
    }

    for (int id = 0; id < mesh.link_count(); ++id) {
        if (failed[id]) {
            continue;
        }
        const auto& l = mesh.links()[id];
        if (reach[l.tail] == 0) {
            continue;
        }
        const double s =
            g.modulus * (out.displacement[l.head] - out.displacement[l.tail]) / g.link_length;
        out.stress[id] = s;
        if (l.gap == g.cols - 1) {
            out.reaction += s * g.link_area;
        }
        if (l.gap == 0) {
            out.left_reaction += s * g.link_area;
        }
    }
    out.nominal_stress = out.reaction / (g.rows * g.link_area);
    if (out.nominal_stress > 0) {
        out.eta = out.stress / out.nominal_stress;
    }
}

LinkStressField solve(const FishnetMesh& mesh, const DamageState& damage)
{
    LaplaceSolver solver(mesh);
    return solver.solve(damage.mask());
}

// ---------------------------------------------------------------------------
// Redistribution diagnostics

namespace {

std::vector<ShellDeviation> shells_from(const LinkStressField& field, const FishnetMesh& mesh,
                                        std::span<const int> sources)
{
    const auto dist = link_distances(mesh, sources);
    std::vector<ShellDeviation> shells;
    for (int id = 0; id < mesh.link_count(); ++id) {
        const int d = dist[id];
        if (d <= 0 || field.failed[id]) {
            continue;
        }
        if (static_cast<int>(shells.size()) < d) {
            const int old = static_cast<int>(shells.size());
            shells.resize(d);
            for (int s = old; s < d; ++s) {
                shells[s].distance = s + 1;
            }
        }
        auto& sh = shells[d - 1];
        sh.max_deviation = std::max(sh.max_deviation, std::abs(field.eta[id] - 1.0));
        ++sh.links;
    }
    return shells;
}

}  // namespace

std::vector<ShellDeviation> eta_profile(const LinkStressField& field, const FishnetMesh& mesh,
                                        int origin)
{
    if (origin < 0 || origin >= mesh.link_count() || !field.failed[origin]) {
        throw std::invalid_argument("eta_profile: origin link is not failed in this field");
    }
    const int src[] = {origin};
    return shells_from(field, mesh, src);
}

std::vector<ShellDeviation> eta_profile(const LinkStressField& field, const FishnetMesh& mesh)
{
    std::vector<int> sources;
    for (int id = 0; id < mesh.link_count(); ++id) {
        if (field.failed[id]) {
            sources.push_back(id);
        }
    }
    if (sources.empty()) {
        return {};
    }
    return shells_from(field, mesh, sources);
}

double far_field_decay_exponent(const FishnetMesh& mesh, const DamageState& damage)
{
    if (mesh.rows() < 64 || mesh.cols() < 64) {
        throw std::invalid_argument("far_field_decay_exponent: mesh must be at least 64 x 64");
    }
    if (damage.step() == 0) {
        throw std::invalid_argument("far_field_decay_exponent: no damage, nothing decays");
    }
    const auto field = solve(mesh, damage);
    if (!field.connected) {
        throw std::invalid_argument("far_field_decay_exponent: damage disconnects the mesh");
    }
    const auto shells = eta_profile(field, mesh);

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& sh : shells) {
        if (sh.distance < 2 || sh.distance > 8 || sh.max_deviation <= 0) {
            continue;
        }
        const double x = std::log(static_cast<double>(sh.distance));
        const double y = std::log(sh.max_deviation);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) {
        throw std::runtime_error("far_field_decay_exponent: not enough shells to fit");
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace fishnet
