#include "fishnet/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "fishnet/rng.hpp"

namespace fishnet {

DeletionEngine::DeletionEngine(const FishnetMesh& mesh)
    : mesh_(&mesh), solver_(mesh), failed_(mesh.link_count(), 0)
{
    solver_.set_residual_check(false);
}

SampleRecord DeletionEngine::run(std::span<const double> strengths, bool keep_curve)
{
    const int nlinks = mesh_->link_count();
    if (static_cast<int>(strengths.size()) != nlinks) {
        throw std::invalid_argument("simulate: need exactly one strength per link");
    }
    for (double s : strengths) {
        if (!(s > 0.0)) {
            throw std::invalid_argument("simulate: link strengths must be positive");
        }
    }

    std::fill(failed_.begin(), failed_.end(), 0);
    SampleRecord rec;
    int peak_index = -1;

    for (int k = 0; k < nlinks; ++k) {
        solver_.solve(failed_, field_);
        if (!field_.connected) {
            break;
        }
        double lambda = std::numeric_limits<double>::infinity();
        int critical = -1;
        for (int id = 0; id < nlinks; ++id) {
            const double s = field_.stress[id];
            if (failed_[id] || !(s > 0.0)) {
                continue;
            }
            const double ratio = strengths[id] / s;
            if (ratio < lambda) {
                lambda = ratio;
                critical = id;
            }
        }
        if (critical < 0) {
            throw std::logic_error("simulate: connected state has no tensile link");
        }

        const double nominal = lambda * field_.nominal_stress;
        if (peak_index < 0 || nominal > rec.peak_stress) {
            rec.peak_stress = nominal;
            peak_index = k;
        }
        if (keep_curve) {
            rec.event_curve.push_back({lambda, nominal});
        }
        failed_[critical] = 1;
        ++rec.total_failures;
    }
    rec.failures_before_peak = std::max(peak_index, 0);
    return rec;
}

SampleRecord simulate_one(const FishnetMesh& mesh, std::span<const double> strengths)
{
    DeletionEngine engine(mesh);
    return engine.run(strengths, true);
}

std::vector<double> draw_strengths(const Distribution& d, int link_count, std::uint64_t seed)
{
    UniformStream uniform(seed);
    std::vector<double> s(link_count);
    for (auto& x : s) {
        x = sample(d, uniform);
    }
    return s;
}

std::vector<SampleRecord> run_batch(const RunConfig& config,
                                    const std::function<void(std::int64_t)>& progress)
{
    if (config.sample_count < 1) {
        throw std::invalid_argument("run_batch: sample_count must be >= 1");
    }
    const FishnetMesh mesh(config.geometry);
    std::vector<SampleRecord> records(config.sample_count);

    const int threads = static_cast<int>(
        std::clamp<std::int64_t>(config.threads < 1 ? 1 : config.threads, 1,
                                 config.sample_count));
    constexpr std::int64_t chunk = 64;
    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> done{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        try {
            DeletionEngine engine(mesh);
            for (;;) {
                const std::int64_t begin = next.fetch_add(chunk);
                if (begin >= config.sample_count) {
                    break;
                }
                const std::int64_t end = std::min(begin + chunk, config.sample_count);
                for (std::int64_t i = begin; i < end; ++i) {
                    const auto seed = stream_seed(config.master_seed, static_cast<std::uint64_t>(i));
                    const auto strengths =
                        draw_strengths(config.distribution, mesh.link_count(), seed);
                    records[i] = engine.run(strengths, config.record_curves);
                    records[i].sample_seed = seed;
                }
                const auto total = done.fetch_add(end - begin) + (end - begin);
                if (progress) {
                    progress(total);
                }
            }
        }
        catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
            next.store(config.sample_count);
        }
    };

    if (threads == 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return records;
}

double count_prepeak_failures(std::span<const SampleRecord> records)
{
    if (records.empty()) {
        throw std::invalid_argument("count_prepeak_failures: no records");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        sum += r.failures_before_peak;
    }
    return sum / static_cast<double>(records.size());
}

std::vector<double> peak_strengths(std::span<const SampleRecord> records)
{
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(r.peak_stress);
    }
    return out;
}

int default_thread_count()
{
    if (const char* env = std::getenv("FISHNET_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) {
                return n;
            }
        }
        catch (const std::exception&) {
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace fishnet
