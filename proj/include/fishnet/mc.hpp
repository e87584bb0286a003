#pragma once

// Sequential element-deletion Monte Carlo.
//
// Each step solves the damaged lattice at u0 = 1, scales the load by the
// smallest strength-to-stress ratio among tensile links, records the event,
// and deletes that link. A sample ends when no surviving path joins the two
// boundaries.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fishnet/dist.hpp"
#include "fishnet/mesh.hpp"
#include "fishnet/solver.hpp"

namespace fishnet {

struct EventPoint {
    double displacement = 0.0;    ///< lambda^(k), the boundary displacement at failure
    double nominal_stress = 0.0;  ///< lambda^(k) * sigma_N at u0 = 1
};

struct SampleRecord {
    double peak_stress = 0.0;      ///< sigma_max
    int failures_before_peak = 0;  ///< r_p
    int total_failures = 0;
    std::vector<EventPoint> event_curve;
    std::uint64_t sample_seed = 0;
};

struct RunConfig {
    FishnetGeometry geometry;
    Distribution distribution = GraftedGaussianPower{};
    std::int64_t sample_count = 1;
    std::uint64_t master_seed = 0;
    bool record_curves = false;
    int threads = 1;
};

/// Per-thread deletion engine; owns the solve workspace for one mesh.
class DeletionEngine {
  public:
    explicit DeletionEngine(const FishnetMesh& mesh);

    SampleRecord run(std::span<const double> strengths, bool keep_curve = true);

  private:
    const FishnetMesh* mesh_;
    LaplaceSolver solver_;
    LinkStressField field_;
    LinkMask failed_;
};

SampleRecord simulate_one(const FishnetMesh& mesh, std::span<const double> strengths);

/// i.i.d. link strengths for one sample stream.
std::vector<double> draw_strengths(const Distribution& d, int link_count, std::uint64_t seed);

/// Samples are indexed 0..sample_count-1; sample i draws from
/// stream_seed(master_seed, i). Results are ordered by i and do not depend on
/// the thread count. `progress`, if set, is called with the number of
/// completed samples from worker threads.
std::vector<SampleRecord> run_batch(const RunConfig& config,
                                    const std::function<void(std::int64_t)>& progress = {});

/// Mean number of failures before the peak, mu_p.
double count_prepeak_failures(std::span<const SampleRecord> records);

/// Peak strengths in sample order.
std::vector<double> peak_strengths(std::span<const SampleRecord> records);

/// Thread count from FISHNET_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

}  // namespace fishnet
