import pytest

import uniqjif

PUBS = """journal_id,article_id,year,citable,doc_type
J1,a1,2021,true,article
J1,a2,2022,true,article
J1,a3,2022,true,review
"""

CITES = """citing_doc_id,citing_year,cited_article_id
d1,2023,a1
d1,2023,a2
d1,2023,a3
d2,2023,a1
d2,2023,a2
d3,2023,a1
d3,2023,a2
d3,2023,a3
"""

CONFIG = {
    "seed": 3,
    "n_journals": 20,
    "years": [2021, 2023],
    "articles_per_journal_year": 5,
    "citing_docs_per_year": 200,
    "refs_per_doc": 1,
}


def test_three_document_example():
    metrics, reports = uniqjif.compute_text(PUBS, CITES, 2023)
    (m,) = metrics
    assert m.journal == "J1"
    assert (m.cit_count, m.ucit_count, m.pub_count) == (8, 3, 3)
    assert m.jif == pytest.approx(8 / 3, abs=1e-12)
    assert m.uniq_jif == 1.0
    assert m.drop == pytest.approx(0.625)
    assert reports["citations"]["rows_accepted"] == 8
    assert uniqjif.metrics_csv(metrics).splitlines()[1] == "J1,8,3,3,2.666666667,1.0,0.375,0.625"


def test_duplicated_rows_change_nothing():
    doubled = CITES + "".join(CITES.splitlines(keepends=True)[1:])
    a, _ = uniqjif.compute_text(PUBS, CITES, 2023)
    b, reports = uniqjif.compute_text(PUBS, doubled, 2023)
    assert a == b
    assert reports["citations"]["duplicate_pairs_removed"] == 8


def test_generic_and_format():
    assert uniqjif.uniq_jif_generic(3, 3) == 1.0
    assert uniqjif.format_number(8 / 3) == "2.666666667"
    with pytest.raises(uniqjif.UniqJifError):
        uniqjif.uniq_jif_generic(1, 0)


def test_stacking_is_flagged_and_matches_oracle():
    data = uniqjif.generate(CONFIG, ["J005:3:6:2023"])
    assert data == uniqjif.generate(CONFIG, ["J005:3:6:2023"])
    metrics = uniqjif.compute_dataset(data, 2023)
    assert metrics == uniqjif.brute_force_metrics(data, 2023)
    report = uniqjif.flag_journals(metrics)
    assert [f["journal_id"] for f in report["flagged"]] == ["J005"]
    dist = uniqjif.build_distribution(metrics)
    assert dist["ecdf"][-1][1] == 1.0


def test_generated_text_round_trips():
    data = uniqjif.generate(CONFIG)
    metrics, _ = uniqjif.compute_text(data.publications_text("jsonl"), data.citations_text(), 2023)
    assert metrics == uniqjif.compute_dataset(data, 2023)


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        uniqjif.generate({"n_journals": 0, "years": [2021, 2023]})
    with pytest.raises(ValueError):
        uniqjif.compute_text(PUBS, CITES, 2023, scope="bogus")
