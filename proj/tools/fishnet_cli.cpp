// fishnet: Monte Carlo and closed-form strength statistics of fishnet lattices.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fishnet/commands.hpp"
#include "fishnet/config.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
    std::optional<std::int64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<std::int64_t> threads;
    std::optional<std::int64_t> rows;
    std::optional<std::int64_t> cols;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("-c,--config", c.config, "TOML run configuration");
    sub->add_option("-o,--out", c.out, "output directory (outputs.directory)");
    sub->add_option("--set", c.sets, "override, e.g. --set sampling.count=1000")
        ->type_name("TABLE.KEY=VALUE");
    sub->add_option("--seed", c.seed, "sampling.seed");
    sub->add_option("--samples", c.samples, "sampling.count");
    sub->add_option("--threads", c.threads, "sampling.threads");
    sub->add_option("--rows", c.rows, "geometry.rows");
    sub->add_option("--cols", c.cols, "geometry.cols");
}

fishnet::Config build_config(const Common& c)
{
    fishnet::TomlDocument doc;
    if (!c.config.empty()) {
        doc = fishnet::load_toml(c.config);
    }
    for (const auto& s : c.sets) {
        fishnet::apply_override(doc, s);
    }
    auto put = [&](const char* table, const char* key, const std::optional<std::int64_t>& v) {
        if (v) {
            doc.tables[table][key] = fishnet::TomlValue{*v};
        }
    };
    put("sampling", "seed", c.seed);
    put("sampling", "count", c.samples);
    put("sampling", "threads", c.threads);
    put("geometry", "rows", c.rows);
    put("geometry", "cols", c.cols);
    if (!c.out.empty()) {
        doc.tables["outputs"]["directory"] = fishnet::TomlValue{c.out};
    }
    return fishnet::Config(std::move(doc));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fishnet: strength statistics of fishnet lattices"};
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        const char* help;
        fishnet::CommandResult (*run)(const fishnet::Config&);
    };
    const Entry entries[] = {
        {"simulate", "element-deletion Monte Carlo", fishnet::cmd_simulate},
        {"models", "closed-form P_f curves and transition stresses", fishnet::cmd_models},
        {"eta", "stress redistribution field and calibration", fishnet::cmd_eta},
        {"shape-sweep", "aspect-ratio sweep at fixed link count", fishnet::cmd_shape_sweep},
        {"sample-dist", "sampler Kolmogorov-Smirnov self-test", fishnet::cmd_sample_dist},
    };
    std::vector<Common> common(std::size(entries));
    std::vector<CLI::App*> subs;
    for (std::size_t k = 0; k < std::size(entries); ++k) {
        auto* sub = app.add_subcommand(entries[k].name, entries[k].help);
        add_common(sub, common[k]);
        subs.push_back(sub);
    }

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "render CSV outputs as SVG");
    plot->add_option("inputs", plot_inputs, "CSV files")->required();
    plot->add_option("-o,--out", plot_out, "directory for the SVG files");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fishnet::CommandResult result;
        if (plot->parsed()) {
            result = fishnet::cmd_plot(plot_inputs, plot_out);
        }
        else {
            for (std::size_t k = 0; k < subs.size(); ++k) {
                if (subs[k]->parsed()) {
                    result = entries[k].run(build_config(common[k]));
                }
            }
        }
        std::cout << result.summary << "\n";
        return result.exit_code;
    }
    catch (const fishnet::ConfigError& e) {
        std::cerr << "fishnet: config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "fishnet: error: " << e.what() << "\n";
        return 3;
    }
}
