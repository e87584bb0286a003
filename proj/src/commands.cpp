#include "fishnet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fishnet/csv.hpp"
#include "fishnet/mc.hpp"
#include "fishnet/models.hpp"
#include "fishnet/rng.hpp"
#include "fishnet/solver.hpp"
#include "fishnet/stats.hpp"
#include "fishnet/svg.hpp"

#ifndef FISHNET_VERSION
#define FISHNET_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace fishnet {
namespace {

// Files written by one command; removed again unless the command commits.
class OutputSet {
  public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        if (!fs::exists(dir_)) {
            fs::create_directories(dir_, ec);
            if (ec) {
                throw std::runtime_error("cannot create output directory " + dir_);
            }
            created_dirs_.push_back(dir_);
        }
    }
    ~OutputSet()
    {
        if (committed_) {
            return;
        }
        std::error_code ec;
        for (auto it = files_.rbegin(); it != files_.rend(); ++it) {
            fs::remove(*it, ec);
        }
        for (auto it = created_dirs_.rbegin(); it != created_dirs_.rend(); ++it) {
            fs::remove(*it, ec);  // only succeeds when empty
        }
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

    std::string subdir(const std::string& name)
    {
        const auto p = path(name);
        if (!fs::exists(p)) {
            fs::create_directories(p);
            created_dirs_.push_back(p);
        }
        return p;
    }

    void write(const std::string& name, const std::string& text)
    {
        const auto p = path(name);
        files_.push_back(p);
        write_text(p, text);
        names_.push_back(name);
    }

    const std::vector<std::string>& names() const { return names_; }
    void commit() { committed_ = true; }

  private:
    std::string dir_;
    std::vector<std::string> files_;
    std::vector<std::string> names_;
    std::vector<std::string> created_dirs_;
    bool committed_ = false;
};

// Config echo used by the manifest. The thread count is dropped: it never
// changes results and must not change output bytes either.
std::string config_echo(const Config& cfg)
{
    TomlDocument doc = cfg.document();
    if (doc.has("sampling")) {
        doc.tables["sampling"].erase("threads");
    }
    if (doc.has("outputs")) {
        doc.tables["outputs"].erase("directory");
    }
    std::erase_if(doc.tables, [](const auto& t) { return t.second.empty(); });
    return to_toml(doc);
}

json params_json(const ModelParams& p)
{
    return json{{"N", p.N},         {"nu1", p.nu1}, {"eta_a", p.eta_a},
                {"eta_b", p.eta_b}, {"nu2", p.nu2}, {"eta2", p.eta2}};
}

void write_manifest(OutputSet& out, const std::string& command, const Config& cfg,
                    std::uint64_t seed, json summary)
{
    json m;
    m["tool"] = "fishnet";
    m["version"] = FISHNET_VERSION;
    m["command"] = command;
    m["master_seed"] = seed;
    m["config"] = config_echo(cfg);
    m["outputs"] = out.names();
    m["summary"] = std::move(summary);
    out.write("run-manifest.json", m.dump(2) + "\n");
}

std::uint64_t master_seed(const Config& cfg)
{
    return static_cast<std::uint64_t>(cfg.integer("sampling", "seed", 42));
}

std::int64_t sample_count(const Config& cfg, std::int64_t fallback)
{
    const auto n = cfg.integer("sampling", "count", fallback);
    if (n < 1) {
        throw ConfigError("sampling.count must be at least 1");
    }
    return n;
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double ystar_of(double pf)
{
    if (!(pf > 0.0 && pf < 1.0)) {
        return std::nan("");
    }
    return std::log(-std::log1p(-pf));
}

// One row per distinct peak strength, at the highest plotting position.
std::string cdf_csv(const EmpiricalDistribution& e, const Distribution& d, const ModelParams& p)
{
    CsvWriter w({"sigma", "Pf_emp", "Ystar_emp", "Pf_weakest_link", "Pf_two_term",
                 "Pf_three_term", "Pf_bundle"});
    const auto& v = e.sorted();
    for (int i = 1; i <= e.count(); ++i) {
        if (i < e.count() && v[i] == v[i - 1]) {
            continue;
        }
        const double s = v[i - 1];
        const double pf = e.position(i);
        w.row({s, pf, ystar_of(pf), evaluate(Model::weakest_link, d, p, s).pf,
               evaluate(Model::two_term, d, p, s).pf, evaluate(Model::three_term, d, p, s).pf,
               p.N >= 3 ? evaluate(Model::bundle, d, p, s).pf : std::nan("")});
    }
    return w.text();
}

std::string hist_csv(const EmpiricalDistribution& e, int bins)
{
    const auto h = histogram(e, bins);
    CsvWriter w({"bin_center", "density"});
    for (std::size_t k = 0; k < h.center.size(); ++k) {
        w.row({h.center[k], h.density[k]});
    }
    return w.text();
}

std::string samples_csv(const std::vector<SampleRecord>& records)
{
    CsvWriter w({"sample_id", "peak_stress", "r_p", "total_failures"});
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        w.row_text({std::to_string(i), format_number(r.peak_stress),
                    std::to_string(r.failures_before_peak), std::to_string(r.total_failures)});
    }
    return w.text();
}

std::string geometry_tag(const FishnetGeometry& g)
{
    return std::to_string(g.rows) + "x" + std::to_string(g.cols);
}

int histogram_bins(const Config& cfg)
{
    const auto b = cfg.integer("sampling", "bins", 50);
    if (b < 2) {
        throw ConfigError("sampling.bins must be at least 2");
    }
    return static_cast<int>(b);
}

}  // namespace

std::string output_directory(const Config& cfg)
{
    return cfg.string("outputs", "directory", "out");
}

int thread_count(const Config& cfg)
{
    if (cfg.has("sampling", "threads")) {
        const auto t = cfg.integer("sampling", "threads");
        if (t < 1) {
            throw ConfigError("sampling.threads must be at least 1");
        }
        return static_cast<int>(t);
    }
    return default_thread_count();
}

ModelParams model_params(const Config& cfg, const Distribution& d, int N)
{
    ModelParams p;
    const bool calibrate = cfg.boolean("models", "calibrate", true);
    if (calibrate) {
        FishnetGeometry g;
        g.rows = static_cast<int>(cfg.integer("models", "calibration_rows", 64));
        g.cols = static_cast<int>(cfg.integer("models", "calibration_cols", 64));
        CalibrationOptions opt;
        opt.threshold = cfg.number("models", "threshold", opt.threshold);
        try {
            p = calibrate_params(FishnetMesh(g), d, opt).params;
        }
        catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    else if (!cfg.has("models", "eta_a") || !cfg.has("models", "nu1")) {
        throw ConfigError("models.calibrate = false needs models.eta_a and models.nu1");
    }
    p.N = N;
    if (cfg.has("models", "eta_a")) {
        p.eta_a = cfg.numbers("models", "eta_a").front();
        if (!calibrate) {
            p.eta_b = p.eta_a;
            p.eta2 = p.eta_a;
        }
    }
    if (cfg.has("models", "nu1")) {
        p.nu1 = static_cast<int>(cfg.numbers("models", "nu1").front());
        if (!calibrate) {
            p.nu2 = p.nu1;
        }
    }
    p.eta_b = cfg.number("models", "eta_b", p.eta_b);
    p.eta2 = cfg.number("models", "eta2", p.eta2);
    p.nu2 = static_cast<int>(cfg.integer("models", "nu2", p.nu2));
    if (!(p.eta_a >= 1.0) || p.nu1 < 0 || p.nu2 < 0) {
        throw ConfigError("models: eta_a must be >= 1 and nu1, nu2 non-negative");
    }
    return p;
}

// ---------------------------------------------------------------------------

CommandResult cmd_simulate(const Config& cfg)
{
    const auto g = geometry_from(cfg);
    const auto d = distribution_from(cfg);
    RunConfig rc;
    rc.geometry = g;
    rc.distribution = d;
    rc.sample_count = sample_count(cfg, 10000);
    rc.master_seed = master_seed(cfg);
    rc.record_curves = cfg.boolean("sampling", "record_curves", false);
    rc.threads = thread_count(cfg);
    const int bins = histogram_bins(cfg);
    const auto params = model_params(cfg, d, g.link_count());

    OutputSet out(output_directory(cfg));
    const auto records = run_batch(rc);
    const EmpiricalDistribution e(peak_strengths(records));
    const double mu_p = count_prepeak_failures(records);

    out.write("samples.csv", samples_csv(records));
    if (rc.record_curves) {
        out.subdir("curves");
        for (std::size_t i = 0; i < records.size(); ++i) {
            CsvWriter w({"k", "displacement", "nominal_stress"});
            const auto& c = records[i].event_curve;
            for (std::size_t k = 0; k < c.size(); ++k) {
                w.row_text({std::to_string(k), format_number(c[k].displacement),
                            format_number(c[k].nominal_stress)});
            }
            out.write("curves/" + std::to_string(i) + ".csv", w.text());
        }
    }
    out.write("cdf.csv", cdf_csv(e, d, params));
    out.write("hist.csv", hist_csv(e, bins));

    json summary{{"samples", rc.sample_count},
                 {"geometry", geometry_tag(g)},
                 {"family", family_name(d)},
                 {"mean_peak_stress", e.mean()},
                 {"mu_p", mu_p},
                 {"model_params", params_json(params)}};
    write_manifest(out, "simulate", cfg, rc.master_seed, summary);
    out.commit();

    CommandResult r;
    r.files = out.names();
    r.summary = "simulate: " + std::to_string(rc.sample_count) + " samples on " +
                geometry_tag(g) + " (" + family_name(d) + "), mean peak " +
                fixed(e.mean(), 4) + ", mu_p " + fixed(mu_p, 3) + " -> " +
                output_directory(cfg);
    return r;
}

CommandResult cmd_models(const Config& cfg)
{
    const auto d = distribution_from(cfg);
    int N = 512;
    if (cfg.has("models", "N")) {
        N = static_cast<int>(cfg.integer("models", "N"));
    }
    else if (cfg.has("geometry")) {
        N = geometry_from(cfg).link_count();
    }
    if (N < 1) {
        throw ConfigError("models.N must be at least 1");
    }
    const auto base = model_params(cfg, d, N);

    const auto etas = cfg.has("models", "eta_a") ? cfg.numbers("models", "eta_a")
                                                 : std::vector<double>{base.eta_a};
    std::vector<int> nus;
    if (cfg.has("models", "nu1")) {
        for (double v : cfg.numbers("models", "nu1")) {
            nus.push_back(static_cast<int>(v));
        }
    }
    else {
        nus.push_back(base.nu1);
    }
    for (double e : etas) {
        if (!(e >= 1.0)) {
            throw ConfigError("models.eta_a values must be >= 1");
        }
    }

    double lo, hi;
    try {
        lo = cfg.number("models", "sigma_min", inverse_cdf(d, 1e-16));
        hi = cfg.number("models", "sigma_max", inverse_cdf(d, 1.0 - 1e-4));
    }
    catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    const auto points = cfg.integer("models", "points", 400);
    if (!(lo > 0.0 && hi > lo) || points < 2) {
        throw ConfigError("models: need 0 < sigma_min < sigma_max and points >= 2");
    }
    std::vector<double> grid(points);
    for (std::int64_t k = 0; k < points; ++k) {
        grid[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
    }

    auto table = [&](const ModelParams& p) {
        CsvWriter w({"sigma", "P1", "Pf_weakest_link", "Pf_two_term", "Pf_three_term",
                     "Pf_bundle", "P_delta", "Ystar_weakest_link", "Ystar_two_term",
                     "Ystar_three_term", "Ystar_bundle", "three_term_clamped"});
        for (double s : grid) {
            const auto wl = evaluate(Model::weakest_link, d, p, s);
            const auto tt = evaluate(Model::two_term, d, p, s);
            const auto th = evaluate(Model::three_term, d, p, s);
            ModelValue bu{std::nan(""), std::nan(""), false};
            if (p.N >= 3) {
                bu = evaluate(Model::bundle, d, p, s);
            }
            double pd;
            try {
                pd = p_delta(d, p.eta_a, p.nu1, s);
            }
            catch (const std::domain_error&) {
                pd = std::nan("");
            }
            w.row({s, cdf(d, s), wl.pf, tt.pf, th.pf, bu.pf, pd, wl.ystar, tt.ystar, th.ystar,
                   bu.ystar, th.clamped ? 1.0 : 0.0});
        }
        return w.text();
    };

    OutputSet out(output_directory(cfg));
    json transitions = json::array();
    const bool sweep = etas.size() * nus.size() > 1;
    bool first = true;
    for (double e : etas) {
        for (int nu : nus) {
            ModelParams p = base;
            p.eta_a = e;
            p.nu1 = nu;
            if (first) {
                out.write("models.csv", table(p));
                first = false;
            }
            if (sweep) {
                out.write("models_eta" + format_number(e) + "_nu" + std::to_string(nu) + ".csv",
                          table(p));
            }
            json t{{"eta_a", e}, {"nu1", nu}};
            try {
                t["sigma_T"] = sigma_transition(d, e, nu);
            }
            catch (const std::runtime_error&) {
                t["sigma_T"] = nullptr;
            }
            transitions.push_back(t);
        }
    }
    json st{{"N", N}, {"family", family_name(d)}, {"params", params_json(base)},
            {"transitions", transitions}};
    out.write("sigma_T.json", st.dump(2) + "\n");
    write_manifest(out, "models", cfg, master_seed(cfg), json{{"params", params_json(base)}});
    out.commit();

    CommandResult r;
    r.files = out.names();
    std::ostringstream s;
    s << "models: N=" << N << ", " << transitions.size() << " (eta_a, nu1) set(s), base eta_a "
      << fixed(base.eta_a, 4) << " nu1 " << base.nu1 << " -> " << output_directory(cfg);
    r.summary = s.str();
    return r;
}

std::vector<int> damage_pattern(const FishnetMesh& mesh, const std::string& pattern)
{
    if (pattern == "none") {
        return {};
    }
    if (pattern == "center") {
        return {central_link(mesh)};
    }
    if (pattern.rfind("slit:", 0) == 0) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(pattern.substr(5), &used);
            if (used != pattern.size() - 5) {
                k = 0;
            }
        }
        catch (const std::exception&) {
            k = 0;
        }
        if (k < 1 || k > mesh.rows()) {
            throw ConfigError("damage pattern '" + pattern + "': slit length must be in [1, rows]");
        }
        const int gap = mesh.cols() / 2;
        const int start = std::clamp((mesh.rows() - 1) / 2 - (k - 1) / 2, 0, mesh.rows() - k);
        std::vector<int> links;
        for (int r = start; r < start + k; ++r) {
            links.push_back(mesh.link_at(r, gap));
        }
        return links;
    }
    throw ConfigError("unknown damage pattern '" + pattern +
                      "' (expected none, center or slit:k)");
}

CommandResult cmd_eta(const Config& cfg)
{
    const auto g = geometry_from(cfg);
    const FishnetMesh mesh(g);

    std::vector<int> links;
    if (cfg.has("damage", "links")) {
        if (cfg.has("damage", "pattern")) {
            throw ConfigError("give either damage.pattern or damage.links, not both");
        }
        for (double v : cfg.numbers("damage", "links")) {
            links.push_back(static_cast<int>(v));
        }
    }
    else {
        links = damage_pattern(mesh, cfg.string("damage", "pattern", "center"));
    }
    DamageState damage(mesh.link_count());
    try {
        for (int l : links) {
            damage.fail(l);
        }
    }
    catch (const std::exception& e) {
        throw ConfigError(std::string("damage.links: ") + e.what());
    }
    const auto field = solve(mesh, damage);
    if (!field.connected) {
        throw std::runtime_error("eta: the damage pattern disconnects the mesh");
    }

    CsvWriter w({"link_id", "tail_i", "tail_j", "head_i", "head_j", "sigma", "eta"});
    double eta_max = -INFINITY, eta_min = INFINITY;
    int over = 0;
    for (int id = 0; id < mesh.link_count(); ++id) {
        const auto& l = mesh.links()[id];
        const auto& t = mesh.nodes()[l.tail];
        const auto& h = mesh.nodes()[l.head];
        w.row_text({std::to_string(id), std::to_string(t.i), std::to_string(t.j),
                    std::to_string(h.i), std::to_string(h.j), format_number(field.stress[id]),
                    format_number(field.eta[id])});
        if (!damage.is_failed(id)) {
            eta_max = std::max(eta_max, field.eta[id]);
            eta_min = std::min(eta_min, field.eta[id]);
            over += std::abs(field.eta[id] - 1.0) > 0.05;
        }
    }

    json fj{{"failed_links", links},
            {"eta_max", eta_max},
            {"eta_min", eta_min},
            {"links_over_5_percent", over},
            {"nominal_stress", field.nominal_stress}};
    if (!links.empty()) {
        json shells = json::array();
        for (const auto& sh : eta_profile(field, mesh)) {
            shells.push_back({{"distance", sh.distance},
                              {"max_deviation", sh.max_deviation},
                              {"links", sh.links}});
        }
        fj["shells"] = shells;
    }

    json cal{{"field", fj}};
    if (g.rows >= 16 && g.cols >= 16) {
        const Distribution d = cfg.has("distribution") ? distribution_from(cfg)
                                                       : Distribution{GraftedGaussianPower{}};
        CalibrationOptions opt;
        opt.threshold = cfg.number("models", "threshold", opt.threshold);
        const auto c = calibrate_params(mesh, d, opt);
        cal["nu1"] = c.params.nu1;
        cal["eta_a"] = c.params.eta_a;
        cal["eta_b"] = c.params.eta_b;
        cal["nu2"] = c.params.nu2;
        cal["eta2"] = c.params.eta2;
        cal["first_link"] = c.first_link;
        cal["second_link"] = c.second_link;
        cal["threshold"] = opt.threshold;
        cal["family"] = family_name(d);
    }
    else {
        cal["note"] = "calibration needs a mesh of at least 16 x 16";
    }

    json mj;
    mj["rows"] = g.rows;
    mj["cols"] = g.cols;
    json nodes = json::array();
    for (int v = 0; v < mesh.node_count(); ++v) {
        const auto p = mesh.position(v);
        nodes.push_back({{"i", mesh.nodes()[v].i}, {"j", mesh.nodes()[v].j}, {"x", p.x()},
                         {"y", p.y()}});
    }
    json lj = json::array();
    for (const auto& l : mesh.links()) {
        lj.push_back({l.tail, l.head});
    }
    mj["nodes"] = nodes;
    mj["links"] = lj;

    OutputSet out(output_directory(cfg));
    out.write("eta.csv", w.text());
    out.write("calibration.json", cal.dump(2) + "\n");
    out.write("mesh.json", mj.dump() + "\n");
    write_manifest(out, "eta", cfg, master_seed(cfg), fj);
    out.commit();

    CommandResult r;
    r.files = out.names();
    r.summary = "eta: " + geometry_tag(g) + ", " + std::to_string(links.size()) +
                " failed link(s), eta_max " + fixed(links.empty() ? 1.0 : eta_max, 4) +
                ", eta_min " + fixed(links.empty() ? 1.0 : eta_min, 4) + " -> " +
                output_directory(cfg);
    return r;
}

CommandResult cmd_shape_sweep(const Config& cfg)
{
    const auto d = distribution_from(cfg);
    const int N = static_cast<int>(cfg.integer("sweep", "N", 256));
    if (N < 3) {
        throw ConfigError("sweep.N must be at least 3");
    }
    const auto ratios = cfg.has("sweep", "ratios")
                            ? cfg.strings("sweep", "ratios")
                            : std::vector<std::string>{"1x" + std::to_string(N), "2x" +
                                                       std::to_string(N / 2), "16x16",
                                                       std::to_string(N / 2) + "x2",
                                                       std::to_string(N) + "x1"};
    std::vector<FishnetGeometry> shapes;
    for (const auto& r : ratios) {
        int m = 0, n = 0;
        char x = 0;
        std::istringstream in(r);
        if (!(in >> m >> x >> n) || x != 'x' || !in.eof() || m < 1 || n < 1) {
            throw ConfigError("sweep.ratios entry '" + r + "' is not of the form MxN");
        }
        if (m * n != N) {
            throw ConfigError("aspect ratio " + r + " does not divide N = " + std::to_string(N));
        }
        FishnetGeometry g;
        g.rows = m;
        g.cols = n;
        shapes.push_back(g);
    }
    const auto count = sample_count(cfg, 20000);
    const auto seed = master_seed(cfg);
    const int threads = thread_count(cfg);
    const auto points = cfg.integer("sweep", "points", 200);
    if (points < 2) {
        throw ConfigError("sweep.points must be at least 2");
    }

    OutputSet out(output_directory(cfg));
    std::vector<EmpiricalDistribution> emp;
    json per = json::array();
    for (const auto& g : shapes) {
        RunConfig rc;
        rc.geometry = g;
        rc.distribution = d;
        rc.sample_count = count;
        rc.master_seed = seed;
        rc.threads = threads;
        const auto records = run_batch(rc);
        out.write("samples_" + geometry_tag(g) + ".csv", samples_csv(records));
        emp.emplace_back(peak_strengths(records));
        per.push_back({{"geometry", geometry_tag(g)},
                       {"mean_peak_stress", emp.back().mean()},
                       {"mu_p", count_prepeak_failures(records)}});
    }

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& e : emp) {
        lo = std::min(lo, e.min());
        hi = std::max(hi, e.max());
    }
    std::vector<std::string> header{"sigma"};
    for (const auto& g : shapes) {
        header.push_back("Pf_" + geometry_tag(g));
    }
    header.push_back("Pf_chain_model");
    header.push_back("Pf_bundle_model");
    CsvWriter w(header);
    for (std::int64_t k = 0; k < points; ++k) {
        const double s = hi > lo ? lo + (hi - lo) * k / (points - 1) : lo;
        std::vector<double> row{s};
        for (const auto& e : emp) {
            row.push_back(empirical_cdf(e, s));
        }
        row.push_back(weakest_link_cdf(d, N, s));
        row.push_back(bundle_series_cdf(d, N, s));
        w.row(row);
    }
    out.write("transition.csv", w.text());
    write_manifest(out, "shape-sweep", cfg, seed,
                   json{{"N", N}, {"samples_per_shape", count}, {"shapes", per}});
    out.commit();

    CommandResult r;
    r.files = out.names();
    r.summary = "shape-sweep: N=" + std::to_string(N) + ", " + std::to_string(shapes.size()) +
                " shapes x " + std::to_string(count) + " samples -> " + output_directory(cfg);
    return r;
}

CommandResult cmd_sample_dist(const Config& cfg)
{
    const auto d = distribution_from(cfg);
    const auto n = sample_count(cfg, 1000000);
    const auto seed = master_seed(cfg);
    const int bins = histogram_bins(cfg);

    UniformStream u(stream_seed(seed, 0));
    std::vector<double> draws(n);
    for (auto& x : draws) {
        x = sample(d, u);
    }
    const EmpiricalDistribution e(std::move(draws));
    double ks = 0.0;
    const auto& v = e.sorted();
    for (std::int64_t i = 0; i < n; ++i) {
        const double F = cdf(d, v[i]);
        ks = std::max({ks, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    const double band = 1.63 / std::sqrt(static_cast<double>(n));
    const bool pass = ks < band;

    OutputSet out(output_directory(cfg));
    out.write("hist.csv", hist_csv(e, bins));
    json j{{"family", family_name(d)}, {"count", n},    {"seed", seed},
           {"ks_statistic", ks},       {"band_99", band}, {"pass", pass}};
    out.write("sample_dist.json", j.dump(2) + "\n");
    write_manifest(out, "sample-dist", cfg, seed, j);
    out.commit();

    CommandResult r;
    r.files = out.names();
    r.exit_code = pass ? 0 : 3;
    r.summary = "sample-dist: " + family_name(d) + ", n=" + std::to_string(n) + ", KS D=" +
                format_number(ks) + " vs 99% band " + format_number(band) +
                (pass ? " PASS" : " FAIL");
    return r;
}

// ---------------------------------------------------------------------------

namespace {

PlotSpec plot_for(const CsvTable& t, const std::string& title)
{
    PlotSpec spec;
    spec.title = title;
    auto col = [&](int c) {
        std::vector<double> v;
        for (const auto& row : t.rows) {
            v.push_back(row[c]);
        }
        return v;
    };
    auto log_of = [](std::vector<double> v) {
        for (auto& x : v) {
            x = x > 0 ? std::log(x) : std::nan("");
        }
        return v;
    };
    auto ystar = [](std::vector<double> v) {
        for (auto& x : v) {
            x = ystar_of(x);
        }
        return v;
    };

    const int sigma = t.column("sigma");
    const bool weibull_scale = sigma >= 0 && (t.column("Ystar_emp") >= 0 ||
                                              t.column("Ystar_weakest_link") >= 0 ||
                                              t.column("Pf_chain_model") >= 0);
    if (weibull_scale) {
        spec.x_label = "ln sigma";
        spec.y_label = "Y* = ln(-ln(1 - Pf))";
        const auto x = log_of(col(sigma));
        for (std::size_t c = 0; c < t.header.size(); ++c) {
            const auto& name = t.header[c];
            if (name.rfind("Pf_", 0) != 0) {
                continue;
            }
            const std::string ys = "Ystar_" + name.substr(3);
            const int yc = t.column(ys);
            PlotSeries s;
            s.name = name.substr(3);
            s.x = x;
            s.y = yc >= 0 ? col(yc) : ystar(col(static_cast<int>(c)));
            s.markers = name == "Pf_emp";
            spec.series.push_back(std::move(s));
        }
        return spec;
    }
    // Generic: first column against the others.
    spec.x_label = t.header[0];
    spec.y_label = t.header.size() == 2 ? t.header[1] : "value";
    const auto x = col(0);
    for (std::size_t c = 1; c < t.header.size(); ++c) {
        PlotSeries s;
        s.name = t.header[c];
        s.x = x;
        s.y = col(static_cast<int>(c));
        spec.series.push_back(std::move(s));
    }
    return spec;
}

}  // namespace

CommandResult cmd_plot(const std::vector<std::string>& inputs, const std::string& out_dir)
{
    if (inputs.empty()) {
        throw ConfigError("plot: no input CSV files");
    }
    // Render everything first so a bad input leaves no partial set behind.
    std::vector<std::pair<std::string, std::string>> rendered;
    for (const auto& in : inputs) {
        const auto table = read_csv(in);
        const fs::path p(in);
        const auto svg = render_svg(plot_for(table, p.stem().string()));
        const fs::path dir = out_dir.empty() ? p.parent_path() : fs::path(out_dir);
        rendered.emplace_back((dir / (p.stem().string() + ".svg")).string(), svg);
    }
    CommandResult r;
    for (const auto& [path, svg] : rendered) {
        const auto parent = fs::path(path).parent_path();
        if (!parent.empty()) {
            fs::create_directories(parent);
        }
        write_text(path, svg);
        r.files.push_back(path);
    }
    r.summary = "plot: wrote " + std::to_string(r.files.size()) + " svg file(s)";
    return r;
}

}  // namespace fishnet
