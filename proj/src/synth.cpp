#include "uniqjif/synth.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "uniqjif/error.hpp"

namespace uniqjif {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string padded(std::uint64_t value, std::size_t width) {
    std::string s = std::to_string(value);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

std::size_t digits(std::uint64_t n) { return std::to_string(n).size(); }

}  // namespace

Xorshift64Star::Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = kGolden;
}

std::uint64_t Xorshift64Star::next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t Xorshift64Star::uniform(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorKind::InvalidArgument, "uniform bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

double Xorshift64Star::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void SynthConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
    if (n_journals < 1) fail("n_journals must be at least 1");
    if (articles_per_journal_year < 1) fail("articles_per_journal_year must be at least 1");
    if (citing_docs_per_year < 1) fail("citing_docs_per_year must be at least 1");
    if (refs_per_doc < 1) fail("refs_per_doc must be at least 1");
    if (!valid_year(years.first) || !valid_year(years.last)) fail("years outside the valid range");
    if (years.last < years.first) fail("empty year range");
    if (!(citable_fraction > 0.0 && citable_fraction <= 1.0)) fail("citable_fraction must lie in (0, 1]");
    const auto total = static_cast<std::uint64_t>(n_journals) *
                       static_cast<std::uint64_t>(years.last - years.first + 1) *
                       static_cast<std::uint64_t>(articles_per_journal_year);
    if (static_cast<std::uint64_t>(refs_per_doc) > total) {
        fail("refs_per_doc exceeds the number of generated articles");
    }
}

void StackingSpec::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
    if (n_stacking_docs < 1) fail("n_stacking_docs must be at least 1");
    if (refs_per_stacking_doc < 2) fail("refs_per_stacking_doc must be at least 2");
    if (!valid_year(citing_year)) fail("citing_year outside the valid range");
    if (window < 1) fail("window must be at least 1");
}

Dataset generate(const SynthConfig& config) {
    config.validate();
    Xorshift64Star rng(config.seed);
    Dataset data;

    const std::size_t journal_width = std::max<std::size_t>(3, digits(config.n_journals));
    const std::size_t article_width = digits(config.articles_per_journal_year);
    const int n_years = config.years.last - config.years.first + 1;
    data.publications.reserve(static_cast<std::size_t>(config.n_journals) * n_years *
                              config.articles_per_journal_year);
    for (int j = 1; j <= config.n_journals; ++j) {
        const std::string journal = "J" + padded(j, journal_width);
        const JournalId id(journal);
        const std::string article_prefix = normalize_id(journal) + "-";
        for (int year = config.years.first; year <= config.years.last; ++year) {
            for (int k = 1; k <= config.articles_per_journal_year; ++k) {
                const bool citable = rng.unit() < config.citable_fraction;
                data.publications.push_back(
                    {id, article_prefix + std::to_string(year) + "-" + padded(k, article_width), year,
                     citable, "article"});
            }
        }
    }

    const std::uint64_t total = data.publications.size();
    const std::size_t doc_width = digits(config.citing_docs_per_year);
    data.citations.reserve(static_cast<std::size_t>(n_years) * config.citing_docs_per_year *
                           config.refs_per_doc);
    std::vector<std::uint64_t> picked;
    for (int year = config.years.first; year <= config.years.last; ++year) {
        for (int d = 1; d <= config.citing_docs_per_year; ++d) {
            const std::string doc = "doc-" + std::to_string(year) + "-" + padded(d, doc_width);
            picked.clear();
            while (picked.size() < static_cast<std::size_t>(config.refs_per_doc)) {
                const auto a = rng.uniform(total);
                if (std::find(picked.begin(), picked.end(), a) != picked.end()) continue;
                picked.push_back(a);
                data.citations.push_back(
                    {doc, year, data.publications[a].article_id, std::nullopt, std::nullopt});
            }
        }
    }
    return data;
}

Dataset inject_stacking(Dataset dataset, const StackingSpec& spec) {
    spec.validate();
    std::vector<std::string> eligible;
    for (const auto& p : dataset.publications) {
        if (p.journal == spec.target && p.pub_year < spec.citing_year &&
            p.pub_year >= spec.citing_year - spec.window) {
            eligible.push_back(p.article_id);
        }
    }
    const auto refs = static_cast<std::size_t>(spec.refs_per_stacking_doc);
    if (eligible.size() < refs) {
        throw Error(ErrorKind::TargetTooSmall,
                    spec.target.str() + " has " + std::to_string(eligible.size()) +
                        " articles in the window, " + std::to_string(refs) + " needed");
    }

    std::unordered_set<std::string> taken;
    for (const auto& c : dataset.citations) taken.insert(c.citing_doc_id);
    const std::string prefix = "stack-" + normalize_id(spec.target.str()) + "-";
    std::uint64_t serial = 0;
    for (int d = 0; d < spec.n_stacking_docs; ++d) {
        std::string doc;
        do {
            doc = prefix + std::to_string(++serial);
        } while (taken.count(doc) != 0);
        taken.insert(doc);
        // Rotate through the eligible list so consecutive docs spread out.
        for (std::size_t k = 0; k < refs; ++k) {
            const auto& article = eligible[(static_cast<std::size_t>(d) * refs + k) % eligible.size()];
            dataset.citations.push_back({doc, spec.citing_year, article, std::nullopt, std::nullopt});
        }
    }
    return dataset;
}

std::vector<JournalMetrics> brute_force_metrics(std::span<const PublicationRecord> publications,
                                                std::span<const CitationRecord> citations,
                                                const MetricsConfig& config) {
    const int first = config.census_year - config.window;
    const int last = config.census_year - 1;

    // Article table: keep a row only if no earlier valid row has its id.
    std::vector<const PublicationRecord*> table;
    for (std::size_t i = 0; i < publications.size(); ++i) {
        const auto& p = publications[i];
        if (p.article_id.empty() || !valid_year(p.pub_year)) continue;
        bool seen = false;
        for (const auto* q : table) seen = seen || q->article_id == p.article_id;
        if (!seen) table.push_back(&p);
    }

    std::set<std::pair<std::string, std::string>> pairs;
    std::vector<const CitationRecord*> kept;
    for (const auto& c : citations) {
        if (c.citing_doc_id.empty() || c.cited_article_id.empty() || !valid_year(c.citing_year)) {
            continue;
        }
        if (pairs.insert({c.citing_doc_id, c.cited_article_id}).second) kept.push_back(&c);
    }

    std::set<JournalId> journals;
    for (const auto* p : table) journals.insert(p->journal);

    std::vector<JournalMetrics> out;
    for (const auto& journal : journals) {
        std::uint64_t pubs = 0;
        for (const auto* p : table) {
            if (p->journal == journal && p->citable && p->pub_year >= first && p->pub_year <= last) {
                ++pubs;
            }
        }

        std::uint64_t cits = 0;
        std::set<std::string> citing;
        for (const auto* c : kept) {
            if (c->citing_year != config.census_year) continue;
            const PublicationRecord* match = nullptr;
            for (const auto* p : table) {
                if (p->article_id == c->cited_article_id) {
                    match = p;
                    break;
                }
            }
            std::optional<JournalId> cited_journal;
            int cited_year = 0;
            bool cited_citable = true;
            if (match) {
                cited_journal = match->journal;
                cited_year = match->pub_year;
                cited_citable = match->citable;
            } else if (c->cited_journal && c->cited_year) {
                cited_journal = c->cited_journal;
                cited_year = *c->cited_year;
            } else {
                continue;
            }
            if (*cited_journal != journal || cited_year < first || cited_year > last) continue;
            if (config.scope == NumeratorScope::CitableOnly && !cited_citable) continue;
            ++cits;
            citing.insert(c->citing_doc_id);
        }

        JournalMetrics m{journal, config.census_year, cits, citing.size(), pubs,
                         std::nullopt, std::nullopt, std::nullopt, std::nullopt};
        if (pubs > 0) {
            m.jif = Rational(cits, pubs);
            m.uniq_jif = Rational(citing.size(), pubs);
            if (cits > 0) {
                // ratio = (ucit/pubs) / (cit/pubs)
                m.ratio = Rational(citing.size() * pubs, pubs * cits);
                m.drop = Rational(cits * pubs - citing.size() * pubs, pubs * cits);
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

template <typename T>
T config_value(const nlohmann::json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::InvalidConfig, std::string("bad value for '") + key + "'");
    }
}

StackingSpec stacking_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("target") || !doc["target"].is_string()) {
        throw Error(ErrorKind::InvalidConfig, "stacking entry needs a string 'target'");
    }
    const auto target = doc["target"].get<std::string>();
    if (normalize_id(target).empty()) throw Error(ErrorKind::InvalidConfig, "empty stacking target");
    StackingSpec spec{JournalId(target)};
    spec.n_stacking_docs = config_value(doc, "n_stacking_docs", spec.n_stacking_docs);
    spec.refs_per_stacking_doc = config_value(doc, "refs_per_stacking_doc", spec.refs_per_stacking_doc);
    spec.citing_year = config_value(doc, "citing_year", spec.citing_year);
    spec.window = config_value(doc, "window", spec.window);
    spec.validate();
    return spec;
}

}  // namespace

SynthPlan synth_plan_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::InvalidConfig, "synth config must be a JSON object");
    SynthPlan plan;
    auto& c = plan.config;
    c.seed = config_value(doc, "seed", c.seed);
    c.n_journals = config_value(doc, "n_journals", c.n_journals);
    if (doc.contains("years")) {
        const auto& years = doc["years"];
        if (!years.is_array() || years.size() != 2) {
            throw Error(ErrorKind::InvalidConfig, "'years' must be [first, last]");
        }
        c.years = {config_value(nlohmann::json{{"y", years[0]}}, "y", 0),
                   config_value(nlohmann::json{{"y", years[1]}}, "y", 0)};
    } else {
        c.years.first = config_value(doc, "first_year", 0);
        c.years.last = config_value(doc, "last_year", c.years.first);
    }
    c.articles_per_journal_year = config_value(doc, "articles_per_journal_year", c.articles_per_journal_year);
    c.citing_docs_per_year = config_value(doc, "citing_docs_per_year", c.citing_docs_per_year);
    c.refs_per_doc = config_value(doc, "refs_per_doc", c.refs_per_doc);
    c.citable_fraction = config_value(doc, "citable_fraction", c.citable_fraction);
    c.validate();
    if (doc.contains("stacking")) {
        if (!doc["stacking"].is_array()) throw Error(ErrorKind::InvalidConfig, "'stacking' must be an array");
        for (const auto& entry : doc["stacking"]) plan.stacking.push_back(stacking_from_json(entry));
    }
    return plan;
}

StackingSpec parse_stacking_spec(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.emplace_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 4 && parts.size() != 5) {
        throw Error(ErrorKind::InvalidConfig,
                    "stacking spec '" + std::string(text) + "' is not TARGET:DOCS:REFS:YEAR[:WINDOW]");
    }
    auto number = [&](const std::string& s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw Error(ErrorKind::InvalidConfig, "bad number '" + s + "' in stacking spec");
        }
        return v;
    };
    if (normalize_id(parts[0]).empty()) throw Error(ErrorKind::InvalidConfig, "empty stacking target");
    StackingSpec spec{JournalId(parts[0])};
    spec.n_stacking_docs = number(parts[1]);
    spec.refs_per_stacking_doc = number(parts[2]);
    spec.citing_year = number(parts[3]);
    if (parts.size() == 5) spec.window = number(parts[4]);
    spec.validate();
    return spec;
}

void write_publications(std::ostream& out, std::span<const PublicationRecord> records,
                        InputFormat format) {
    if (format == InputFormat::Jsonl) {
        for (const auto& r : records) {
            nlohmann::ordered_json row{{"journal_id", r.journal.str()}, {"article_id", r.article_id},
                                       {"year", r.pub_year},           {"citable", r.citable},
                                       {"doc_type", r.doc_type}};
            out << row.dump() << '\n';
        }
        return;
    }
    out << "journal_id,article_id,year,citable,doc_type\n";
    for (const auto& r : records) {
        out << detail::csv_escape(r.journal.str()) << ',' << detail::csv_escape(r.article_id) << ','
            << r.pub_year << ',' << (r.citable ? "true" : "false") << ','
            << detail::csv_escape(r.doc_type) << '\n';
    }
}

void write_citations(std::ostream& out, std::span<const CitationRecord> records,
                     InputFormat format) {
    const bool fallback = std::any_of(records.begin(), records.end(), [](const CitationRecord& r) {
        return r.cited_journal.has_value() || r.cited_year.has_value();
    });
    if (format == InputFormat::Jsonl) {
        for (const auto& r : records) {
            nlohmann::ordered_json row{{"citing_doc_id", r.citing_doc_id},
                                       {"citing_year", r.citing_year},
                                       {"cited_article_id", r.cited_article_id}};
            if (r.cited_journal) row["cited_journal_id"] = r.cited_journal->str();
            if (r.cited_year) row["cited_year"] = *r.cited_year;
            out << row.dump() << '\n';
        }
        return;
    }
    out << "citing_doc_id,citing_year,cited_article_id";
    if (fallback) out << ",cited_journal_id,cited_year";
    out << '\n';
    for (const auto& r : records) {
        out << detail::csv_escape(r.citing_doc_id) << ',' << r.citing_year << ','
            << detail::csv_escape(r.cited_article_id);
        if (fallback) {
            out << ',' << (r.cited_journal ? detail::csv_escape(r.cited_journal->str()) : "") << ','
                << (r.cited_year ? std::to_string(*r.cited_year) : "");
        }
        out << '\n';
    }
}

}  // namespace uniqjif
