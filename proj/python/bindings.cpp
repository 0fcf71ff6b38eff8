#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "uniqjif/analysis.hpp"
#include "uniqjif/error.hpp"
#include "uniqjif/ingest.hpp"
#include "uniqjif/metrics.hpp"
#include "uniqjif/report.hpp"
#include "uniqjif/synth.hpp"

namespace py = pybind11;
using namespace uniqjif;

namespace {

std::optional<double> as_double(const std::optional<Rational>& r) {
    return r ? std::optional<double>(r->to_double()) : std::nullopt;
}

NumeratorScope scope_from(const std::string& name) {
    if (name == "all") return NumeratorScope::AllItems;
    if (name == "citable") return NumeratorScope::CitableOnly;
    throw Error(ErrorKind::InvalidConfig, "scope must be 'all' or 'citable'");
}

py::object to_python(const nlohmann::ordered_json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

py::dict ingest_dict(const IngestReport& report) { return to_python(ingest_report_json(report)); }

py::tuple compute_streams(std::istream& pubs_in, std::istream& cites_in, int year, int window,
                          const std::string& scope, unsigned threads) {
    const MetricsConfig config{year, window, scope_from(scope)};
    config.validate();
    auto pubs = parse_publications(pubs_in);
    auto cites = parse_citations(cites_in);
    auto resolved = resolve_citations(cites.citations, pubs.table);
    auto metrics = compute_all(config, pubs.table, resolved.citations, threads);
    py::dict reports;
    reports["publications"] = ingest_dict(pubs.report);
    reports["citations"] = ingest_dict(cites.report);
    reports["resolution"] = ingest_dict(resolved.report);
    return py::make_tuple(std::move(metrics), reports);
}

std::string dataset_text(const Dataset& d, bool citations, const std::string& format) {
    std::ostringstream out;
    const auto f = format == "jsonl" ? InputFormat::Jsonl : InputFormat::Csv;
    if (citations) {
        write_citations(out, d.citations, f);
    } else {
        write_publications(out, d.publications, f);
    }
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Journal Impact Factor and Unique Citing Documents Impact Factor (Uniq-JIF)";
    m.attr("__version__") = std::string(tool_version());

    py::register_exception<Error>(m, "UniqJifError", PyExc_ValueError);

    py::class_<JournalMetrics>(m, "JournalMetrics")
        .def_property_readonly("journal", [](const JournalMetrics& x) { return x.journal.str(); })
        .def_readonly("census_year", &JournalMetrics::census_year)
        .def_readonly("cit_count", &JournalMetrics::cit_count)
        .def_readonly("ucit_count", &JournalMetrics::ucit_count)
        .def_readonly("pub_count", &JournalMetrics::pub_count)
        .def_property_readonly("jif", [](const JournalMetrics& x) { return as_double(x.jif); })
        .def_property_readonly("uniq_jif", [](const JournalMetrics& x) { return as_double(x.uniq_jif); })
        .def_property_readonly("ratio", [](const JournalMetrics& x) { return as_double(x.ratio); })
        .def_property_readonly("drop", [](const JournalMetrics& x) { return as_double(x.drop); })
        .def("__eq__", [](const JournalMetrics& a, const JournalMetrics& b) { return a == b; })
        .def("__repr__", [](const JournalMetrics& x) {
            std::ostringstream out;
            write_metrics(out, std::span(&x, 1), TableFormat::Csv, MetricsConfig{});
            const auto text = out.str();
            return "<JournalMetrics " + text.substr(text.find('\n') + 1, text.size() - text.find('\n') - 2) + ">";
        });

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("n_publications", [](const Dataset& d) { return d.publications.size(); })
        .def_property_readonly("n_citations", [](const Dataset& d) { return d.citations.size(); })
        .def("publications_text", [](const Dataset& d, const std::string& format) {
            return dataset_text(d, false, format);
        }, py::arg("format") = "csv")
        .def("citations_text", [](const Dataset& d, const std::string& format) {
            return dataset_text(d, true, format);
        }, py::arg("format") = "csv")
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

    m.def("uniq_jif_generic", [](std::uint64_t unique, std::uint64_t citable) {
        return uniq_jif_generic(unique, citable).to_double();
    }, py::arg("n_unique_citing"), py::arg("n_citable"),
        "Unique citing documents per citable item.");

    m.def("format_number", &format_number, py::arg("value"));

    m.def("compute_text", [](const std::string& pubs, const std::string& cites, int year, int window,
                             const std::string& scope, unsigned threads) {
        std::istringstream p(pubs), c(cites);
        return compute_streams(p, c, year, window, scope, threads);
    }, py::arg("publications"), py::arg("citations"), py::arg("year"), py::arg("window") = 2,
        py::arg("scope") = "all", py::arg("threads") = 1,
        "Ingest publication/citation text (CSV or JSONL) and return (metrics, ingest_reports).");

    m.def("compute_files", [](const std::string& pubs, const std::string& cites, int year, int window,
                              const std::string& scope, unsigned threads) {
        auto p = open_input(pubs);
        auto c = open_input(cites);
        return compute_streams(*p, *c, year, window, scope, threads);
    }, py::arg("publications"), py::arg("citations"), py::arg("year"), py::arg("window") = 2,
        py::arg("scope") = "all", py::arg("threads") = 1);

    m.def("generate", [](const py::dict& config, const std::vector<std::string>& stacking) {
        auto json_text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
        auto plan = synth_plan_from_json(nlohmann::json::parse(json_text));
        for (const auto& s : stacking) plan.stacking.push_back(parse_stacking_spec(s));
        Dataset data = generate(plan.config);
        for (const auto& spec : plan.stacking) data = inject_stacking(std::move(data), spec);
        return data;
    }, py::arg("config"), py::arg("stacking") = std::vector<std::string>{},
        "Generate a synthetic dataset from a config dict; stacking specs are TARGET:DOCS:REFS:YEAR.");

    m.def("compute_dataset", [](const Dataset& d, int year, int window, const std::string& scope) {
        const MetricsConfig config{year, window, scope_from(scope)};
        const auto table = build_publication_table(d.publications);
        const auto cites = dedup_citations(d.citations);
        const auto resolved = resolve_citations(cites, table);
        return compute_all(config, table, resolved.citations);
    }, py::arg("dataset"), py::arg("year"), py::arg("window") = 2, py::arg("scope") = "all");

    m.def("brute_force_metrics", [](const Dataset& d, int year, int window, const std::string& scope) {
        return brute_force_metrics(d.publications, d.citations, MetricsConfig{year, window, scope_from(scope)});
    }, py::arg("dataset"), py::arg("year"), py::arg("window") = 2, py::arg("scope") = "all");

    m.def("build_distribution", [](const std::vector<JournalMetrics>& metrics) {
        const auto dist = build_distribution(metrics);
        py::list entries, ecdf;
        for (const auto& e : dist.entries) entries.append(py::make_tuple(e.journal.str(), e.ratio.to_double()));
        for (const auto& p : dist.ecdf) ecdf.append(py::make_tuple(p.ratio, p.cumulative_fraction));
        py::dict out;
        out["entries"] = entries;
        out["ecdf"] = ecdf;
        out["excluded"] = dist.excluded;
        return out;
    }, py::arg("metrics"));

    m.def("percentile_of_drop", [](const JournalMetrics& entry, const std::vector<JournalMetrics>& all) {
        return percentile_of_drop(entry, all).to_double();
    }, py::arg("entry"), py::arg("all_metrics"));

    m.def("flag_journals", [](const std::vector<JournalMetrics>& metrics, double drop_threshold,
                              double top_fraction) {
        return to_python(flag_report_json(flag_journals(metrics, {drop_threshold, top_fraction})));
    }, py::arg("metrics"), py::arg("drop_threshold") = 0.30, py::arg("top_fraction") = 0.05);

    m.def("metrics_csv", [](const std::vector<JournalMetrics>& metrics) {
        std::ostringstream out;
        write_metrics(out, metrics, TableFormat::Csv, MetricsConfig{});
        return out.str();
    }, py::arg("metrics"));
}
