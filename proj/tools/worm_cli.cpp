#include <charconv>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "worm/report.hpp"

namespace {

struct Options {
    std::string spec;
    std::string out = ".";
    int samples = 0;
    int sphere = 0;
    int segments = 0;
    double tol_psc = -1.0;
    double zero_tol = -1.0;
    double strong_margin = -1.0;
    std::string k;
    bool dump_csv = false;
    bool timestamp = false;
};

void add_run_options(CLI::App* sub, Options& o)
{
    sub->add_option("--spec", o.spec, "Spec file (JSON)")->required();
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--samples", o.samples, "Base grid points per dimension");
    sub->add_option("--sphere", o.sphere, "Fiber directions per base point");
    sub->add_option("--segments", o.segments, "Quadrature segments per loop");
    sub->add_option("--tol-psc", o.tol_psc, "Pseudoconvexity tolerance");
    sub->add_option("--zero-tol", o.zero_tol, "Zero band half-width");
    sub->add_option("--strong-margin", o.strong_margin, "Strong pseudoconvexity margin");
    sub->add_option("--k", o.k, "K value or \"auto\"");
    sub->add_flag("--dump-csv", o.dump_csv, "Write samples.csv");
    sub->add_flag("--timestamp", o.timestamp, "Add a timestamp to report.json");
}

worm::RunConfig to_config(worm::Command cmd, const CLI::App& sub, const Options& o)
{
    worm::RunConfig c;
    c.command = cmd;
    c.spec_path = o.spec;
    c.out_dir = o.out;
    if (sub.count("--samples"))
        c.samples = o.samples;
    if (sub.count("--sphere"))
        c.sphere = o.sphere;
    if (sub.count("--segments"))
        c.segments = o.segments;
    if (sub.count("--tol-psc"))
        c.tol_psc = o.tol_psc;
    if (sub.count("--zero-tol"))
        c.zero_tol = o.zero_tol;
    if (sub.count("--strong-margin"))
        c.strong_margin = o.strong_margin;
    if (sub.count("--k")) {
        if (o.k == "auto") {
            c.k_auto = true;
        } else {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(o.k.data(), o.k.data() + o.k.size(), v);
            if (ec != std::errc() || ptr != o.k.data() + o.k.size())
                throw CLI::ValidationError("--k", "expected a number or \"auto\"");
            c.K = v;
        }
    }
    c.dump_csv = o.dump_csv;
    c.timestamp = o.timestamp;
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Worm domain construction and Levi form certification"};
    app.require_subcommand(1);

    Options opts;
    const std::pair<const char*, worm::Command> commands[] = {
        {"build", worm::Command::Build},
        {"certify", worm::Command::Certify},
        {"dangelo", worm::Command::Dangelo},
        {"constants", worm::Command::Constants},
        {"all", worm::Command::All},
    };
    const char* help[] = {
        "Build the domain and sample its boundary",
        "Certify pseudoconvexity from the Levi spectra",
        "Integrate the D'Angelo form over the spec's loops",
        "Compute the constant budget and select K",
        "Run every analysis",
    };
    std::vector<std::pair<CLI::App*, worm::Command>> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
        add_run_options(sub, opts);
        subs.emplace_back(sub, commands[i].second);
    }
    CLI::App* schema = app.add_subcommand("schema", "Print the report JSON schema");

    try {
        app.parse(argc, argv);
        if (schema->parsed()) {
            std::cout << worm::report_schema();
            return 0;
        }
        for (const auto& [sub, cmd] : subs)
            if (sub->parsed())
                return worm::run(to_config(cmd, *sub, opts), std::cerr);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(worm::ExitCode::ConfigError);
    }
    return static_cast<int>(worm::ExitCode::ConfigError);
}
