// uniqjif: JIF / Uniq-JIF pipeline driver.
//
// Exit codes: 0 ok, 2 usage or IO error, 3 degenerate data or invalid
// synth config, 4 flags present (only with --fail-on-flags).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "uniqjif/analysis.hpp"
#include "uniqjif/error.hpp"
#include "uniqjif/ingest.hpp"
#include "uniqjif/metrics.hpp"
#include "uniqjif/report.hpp"
#include "uniqjif/synth.hpp"

namespace fs = std::filesystem;
using namespace uniqjif;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kDegenerate = 3;
constexpr int kFlagsPresent = 4;

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("UNIQJIF_THREADS")) {
        try {
            const long v = std::stol(cap);
            if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring UNIQJIF_THREADS=" << cap << '\n';
        }
    }
    return n;
}

InputFormat input_format(const std::string& name) {
    if (name == "csv") return InputFormat::Csv;
    if (name == "jsonl") return InputFormat::Jsonl;
    return InputFormat::Auto;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw Error(ErrorKind::Io, "write failure on " + path.string());
}

fs::path manifest_path(const std::string& explicit_path, const fs::path& out) {
    return explicit_path.empty() ? fs::path(out.string() + ".manifest.json") : fs::path(explicit_path);
}

struct ComputeOptions {
    std::string pubs, cites, out, manifest;
    int year = 0;
    int window = 2;
    std::string scope = "all";
    std::string format = "csv";
    std::string input_format = "auto";
};

int run_compute(const ComputeOptions& o) {
    const MetricsConfig config{o.year, o.window,
                               o.scope == "citable" ? NumeratorScope::CitableOnly : NumeratorScope::AllItems};
    try {
        config.validate();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    auto pubs = read_publications(o.pubs, input_format(o.input_format));
    if (pubs.report.rows_accepted == 0) {
        std::cerr << "error: no publication rows accepted from " << o.pubs << '\n';
        return kDegenerate;
    }
    auto cites = read_citations(o.cites, input_format(o.input_format));
    auto resolved = resolve_citations(cites.citations, pubs.table);
    cites.citations = {};

    const auto metrics = compute_all(config, pubs.table, resolved.citations, worker_count());

    const fs::path out_path(o.out);
    auto out = open_output(out_path);
    write_metrics(out, metrics, o.format == "json" ? TableFormat::Json : TableFormat::Csv, config);
    finish_output(out, out_path);

    std::size_t defined = 0, zero_jif = 0, no_pubs = 0;
    for (const auto& m : metrics) {
        if (m.ratio) ++defined;
        else if (m.jif) ++zero_jif;
        else ++no_pubs;
    }
    RunManifest manifest("compute");
    manifest.config("census_year", config.census_year)
        .config("window", config.window)
        .config("scope", to_string(config.scope))
        .input("publications", o.pubs)
        .input("citations", o.cites)
        .section("ingest", ojson{{"publications", ingest_report_json(pubs.report)},
                                 {"citations", ingest_report_json(cites.report)},
                                 {"resolution", ingest_report_json(resolved.report)}})
        .section("summary", ojson{{"journals", metrics.size()},
                                  {"defined_ratio", defined},
                                  {"zero_jif", zero_jif},
                                  {"no_citable_items", no_pubs}})
        .output("metrics", out_path);
    manifest.write(manifest_path(o.manifest, out_path));
    return kOk;
}

struct DistributionOptions {
    std::string metrics, out, svg, flags, manifest;
};

int run_distribution(const DistributionOptions& o) {
    const auto metrics = read_metrics(fs::path(o.metrics));
    const auto dist = build_distribution(metrics);
    if (dist.entries.empty()) {
        std::cerr << "error: no journal in " << o.metrics << " has a defined ratio\n";
        return kDegenerate;
    }
    std::vector<JournalId> flagged;
    if (!o.flags.empty()) flagged = read_flagged_journals(o.flags);

    const fs::path out_path(o.out);
    auto out = open_output(out_path);
    write_ecdf_csv(out, dist);
    finish_output(out, out_path);
    if (!o.svg.empty()) {
        auto svg = open_output(o.svg);
        write_ecdf_svg(svg, dist, flagged);
        finish_output(svg, o.svg);
    }

    std::size_t zero_jif = 0;
    for (const auto& m : metrics) zero_jif += (m.jif && !m.ratio) ? 1 : 0;
    RunManifest manifest("distribution");
    manifest.input("metrics", o.metrics);
    if (!o.flags.empty()) manifest.input("flags", o.flags);
    manifest.section("summary", ojson{{"journals", metrics.size()},
                                      {"included", dist.entries.size()},
                                      {"excluded", dist.excluded},
                                      {"excluded_zero_jif", zero_jif},
                                      {"excluded_no_citable_items", dist.excluded - zero_jif},
                                      {"ecdf_points", dist.ecdf.size()}});
    manifest.output("ecdf", out_path);
    if (!o.svg.empty()) manifest.output("svg", o.svg);
    manifest.write(manifest_path(o.manifest, out_path));
    return kOk;
}

struct FlagOptions {
    std::string metrics, out, manifest;
    double drop_threshold = 0.30;
    double top_percent = 5.0;
    bool fail_on_flags = false;
};

int run_flag(const FlagOptions& o) {
    const FlagThresholds thresholds{o.drop_threshold, o.top_percent / 100.0};
    try {
        thresholds.validate();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    const auto metrics = read_metrics(fs::path(o.metrics));
    const auto report = flag_journals(metrics, thresholds);

    const fs::path out_path(o.out);
    auto out = open_output(out_path);
    out << flag_report_json(report).dump(2) << '\n';
    finish_output(out, out_path);

    RunManifest manifest("flag");
    manifest.config("drop_threshold", flag_report_json(report)["thresholds"]["drop_threshold"])
        .config("top_fraction", flag_report_json(report)["thresholds"]["top_fraction"])
        .input("metrics", o.metrics)
        .section("summary", ojson{{"considered", report.considered},
                                  {"excluded", report.excluded},
                                  {"flagged", report.flagged.size()}})
        .output("flags", out_path);
    manifest.write(manifest_path(o.manifest, out_path));

    return o.fail_on_flags && !report.flagged.empty() ? kFlagsPresent : kOk;
}

struct SynthOptions {
    std::string config, out_dir, format = "csv";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> stacks;
};

int run_synth(const SynthOptions& o) {
    SynthPlan plan;
    {
        std::ifstream in(o.config, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + o.config);
        const auto doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorKind::InvalidConfig, o.config + " is not valid JSON");
        plan = synth_plan_from_json(doc);
    }
    if (o.seed) plan.config.seed = *o.seed;
    for (const auto& s : o.stacks) plan.stacking.push_back(parse_stacking_spec(s));

    Dataset data = generate(plan.config);
    for (const auto& spec : plan.stacking) data = inject_stacking(std::move(data), spec);

    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    const auto format = o.format == "jsonl" ? InputFormat::Jsonl : InputFormat::Csv;
    const std::string ext = o.format == "jsonl" ? ".jsonl" : ".csv";
    const fs::path pubs_path = dir / ("publications" + ext);
    const fs::path cites_path = dir / ("citations" + ext);
    {
        auto out = open_output(pubs_path);
        write_publications(out, data.publications, format);
        finish_output(out, pubs_path);
    }
    {
        auto out = open_output(cites_path);
        write_citations(out, data.citations, format);
        finish_output(out, cites_path);
    }

    const auto& c = plan.config;
    ojson stacking = ojson::array();
    for (const auto& s : plan.stacking) {
        stacking.push_back(ojson{{"target", s.target.str()},
                                 {"n_stacking_docs", s.n_stacking_docs},
                                 {"refs_per_stacking_doc", s.refs_per_stacking_doc},
                                 {"citing_year", s.citing_year},
                                 {"window", s.window}});
    }
    RunManifest manifest("synth");
    manifest.config("seed", c.seed)
        .config("prng", "xorshift64* seeded by splitmix64")
        .config("n_journals", c.n_journals)
        .config("years", ojson::array({c.years.first, c.years.last}))
        .config("articles_per_journal_year", c.articles_per_journal_year)
        .config("citing_docs_per_year", c.citing_docs_per_year)
        .config("refs_per_doc", c.refs_per_doc)
        .config("citable_fraction", c.citable_fraction)
        .config("stacking", stacking)
        .input("config", o.config)
        .section("summary", ojson{{"publications", data.publications.size()},
                                  {"citations", data.citations.size()}})
        .output("publications", pubs_path)
        .output("citations", cites_path);
    manifest.write(dir / "manifest.json");
    return kOk;
}

struct ValidateOptions {
    std::string pubs, cites, input_format = "auto";
};

int run_validate(const ValidateOptions& o) {
    const auto pubs = read_publications(o.pubs, input_format(o.input_format));
    ojson doc{{"publications", ingest_report_json(pubs.report)}};
    if (!o.cites.empty()) {
        const auto cites = read_citations(o.cites, input_format(o.input_format));
        const auto resolved = resolve_citations(cites.citations, pubs.table);
        doc["citations"] = ingest_report_json(cites.report);
        doc["resolution"] = ingest_report_json(resolved.report);
    }
    std::cout << doc.dump(2) << '\n';
    return pubs.report.rows_accepted == 0 ? kDegenerate : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Journal Impact Factor and Unique Citing Documents Impact Factor toolkit"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    ComputeOptions compute;
    auto* cmd_compute = app.add_subcommand("compute", "Compute per-journal JIF, Uniq-JIF, ratio and drop");
    cmd_compute->add_option("--pubs", compute.pubs, "Publications file (CSV/JSONL, optionally gzip)")
        ->required()->check(CLI::ExistingFile);
    cmd_compute->add_option("--cites", compute.cites, "Citations file (CSV/JSONL, optionally gzip)")
        ->required()->check(CLI::ExistingFile);
    cmd_compute->add_option("--year", compute.year, "Census year Y")->required();
    cmd_compute->add_option("--window", compute.window, "Number of prior publication years")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd_compute->add_option("--scope", compute.scope, "Numerator scope")
        ->capture_default_str()->check(CLI::IsMember({"all", "citable"}));
    cmd_compute->add_option("--out", compute.out, "Metrics output path")->required();
    cmd_compute->add_option("--format", compute.format, "Output format")
        ->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    cmd_compute->add_option("--input-format", compute.input_format, "Input format")
        ->capture_default_str()->check(CLI::IsMember({"auto", "csv", "jsonl"}));
    cmd_compute->add_option("--manifest", compute.manifest, "Manifest path (default <out>.manifest.json)");

    DistributionOptions dist;
    auto* cmd_dist = app.add_subcommand("distribution", "ECDF of Uniq-JIF/JIF ratios");
    cmd_dist->add_option("--metrics", dist.metrics, "Metrics file from compute")
        ->required()->check(CLI::ExistingFile);
    cmd_dist->add_option("--out", dist.out, "ECDF CSV output path")->required();
    cmd_dist->add_option("--svg", dist.svg, "Optional SVG plot path");
    cmd_dist->add_option("--flags", dist.flags, "Flag report to highlight in the plot")
        ->check(CLI::ExistingFile);
    cmd_dist->add_option("--manifest", dist.manifest, "Manifest path (default <out>.manifest.json)");

    FlagOptions flag;
    auto* cmd_flag = app.add_subcommand("flag", "Flag journals with large impact drops");
    cmd_flag->add_option("--metrics", flag.metrics, "Metrics file from compute")
        ->required()->check(CLI::ExistingFile);
    cmd_flag->add_option("--drop-threshold", flag.drop_threshold, "Flag when drop exceeds this")
        ->capture_default_str();
    cmd_flag->add_option("--top-percent", flag.top_percent, "Flag the top N percent of drops")
        ->capture_default_str();
    cmd_flag->add_option("--out", flag.out, "Flag report JSON path")->required();
    cmd_flag->add_flag("--fail-on-flags", flag.fail_on_flags, "Exit 4 when any journal is flagged");
    cmd_flag->add_option("--manifest", flag.manifest, "Manifest path (default <out>.manifest.json)");

    SynthOptions synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    cmd_synth->add_option("--config", synth.config, "JSON config")->required()->check(CLI::ExistingFile);
    cmd_synth->add_option("--seed", synth.seed, "Override the config seed");
    cmd_synth->add_option("--out-dir", synth.out_dir, "Output directory")->required();
    cmd_synth->add_option("--stack", synth.stacks, "Stacking spec TARGET:DOCS:REFS:YEAR[:WINDOW]");
    cmd_synth->add_option("--format", synth.format, "Output format")
        ->capture_default_str()->check(CLI::IsMember({"csv", "jsonl"}));

    ValidateOptions validate;
    auto* cmd_validate = app.add_subcommand("validate", "Ingest inputs and print the ingest report");
    cmd_validate->add_option("--pubs", validate.pubs, "Publications file")
        ->required()->check(CLI::ExistingFile);
    cmd_validate->add_option("--cites", validate.cites, "Citations file")->check(CLI::ExistingFile);
    cmd_validate->add_option("--input-format", validate.input_format, "Input format")
        ->capture_default_str()->check(CLI::IsMember({"auto", "csv", "jsonl"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*cmd_compute) return run_compute(compute);
        if (*cmd_dist) return run_distribution(dist);
        if (*cmd_flag) return run_flag(flag);
        if (*cmd_synth) return run_synth(synth);
        if (*cmd_validate) return run_validate(validate);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::InvalidConfig:
            case ErrorKind::TargetTooSmall:
                return kDegenerate;
            default:
                return kUsage;
        }
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return kUsage;
}
