import datetime as dt
import random

import pytest
from hypothesis import given, strategies as st

from oracles.stats import spearman_rho
from webometrics.ingest import (
    SampleSet, assign_shared_domain, flag_regional_anomalies, metric_rows, per_domain_values, read_metrics,
    read_roster, resolve_multi_domain, resolve_roster, roster_rows, sample_stability,
)
from webometrics.io import write_csv
from webometrics.model import HitCount, Institution, Kind, Sector, WebMetricsRecord
from webometrics.queryplan import metric_plan
from webometrics.synthetic import fixture_path

DAY = dt.date(2014, 12, 29)


def rec(iid, gum=10, lum=5, **kw):
    base = dict(institution_id=iid, sample_date=DAY, tpc=1, apc=0, gum=gum, lum=lum,
                domain_authority=30, external_links=10, root_domains=2)
    base.update(kw)
    return WebMetricsRecord(**base)


def com(iid, domains, rank):
    return Institution(iid, iid, Kind.COMPANY, domains, rank, Sector.METAL_PRODUCTS)


def test_resolve_multi_domain_keeps_best_page_count():
    arcelik = com("C1", ("arcelikas.com", "arcelik.com.tr"), 3)
    assert resolve_multi_domain(arcelik, {"arcelikas.com": 900, "arcelik.com.tr": 27_400}) == "arcelik.com.tr"
    assert resolve_multi_domain(com("C2", ("a.com",), 1), {"a.com": 0}) == "a.com"
    assert resolve_multi_domain(com("C3", ("b.com", "a.com"), 1), {"a.com": 5, "b.com": 5}) == "b.com"
    with pytest.raises(ValueError, match="no page count"):
        resolve_multi_domain(arcelik, {"arcelik.com.tr": 1})


def test_assign_shared_domain_best_rank_wins():
    a, b = com("C7", ("icdas.com.tr",), 47), com("C9", ("icdas.com.tr",), 12)
    assert assign_shared_domain("icdas.com.tr", [a, b]) is b
    assert assign_shared_domain("x.com", [a]) is a
    with pytest.raises(ValueError, match="share rank"):
        assign_shared_domain("icdas.com.tr", [a, com("C8", ("icdas.com.tr",), 47)])


def test_bundled_roster_resolution():
    roster = read_roster(fixture_path("roster.csv"))
    by_id = {i.id: i for i in roster}
    tpc = {d: 1 for i in roster for d in i.domains}
    tpc["arcelik.com.tr"] = 27_400
    res = resolve_roster(roster, tpc)
    assert set(res.excluded) == {"C007", "C010"}
    assert res.chosen["C009"] == "icdas.com.tr" and by_id["C009"].source_rank == 12
    assert by_id["C007"].source_rank == 47
    assert res.chosen["C014"] == "zorlu.com.tr"
    assert res.chosen["C004"] == "arcelik.com.tr"
    owner = res.domain_owner()
    assert len(owner) == len(res.chosen)  # injective domain -> institution
    assert len(res.members(roster)) == 123


def test_roster_round_trip(tmp_path):
    roster = read_roster(fixture_path("roster.csv"))
    write_csv(tmp_path / "r.csv", roster_rows(roster))
    assert read_roster(tmp_path / "r.csv") == roster


def test_roster_missing_columns(tmp_path):
    (tmp_path / "r.csv").write_text("id,name\nU1,x\n", encoding="utf-8")
    with pytest.raises(ValueError, match="missing roster columns"):
        read_roster(tmp_path / "r.csv")


def test_read_metrics_round_trip_and_kind_checks(tmp_path):
    roster = read_roster(fixture_path("roster.csv"))
    sample = read_metrics(fixture_path("metrics_december.csv"), "December", roster)
    assert len(sample.records) == 125
    zaman = next(r for r in sample.records if r.note)
    assert "zaman.com.tr" in zaman.note
    write_csv(tmp_path / "m.csv", metric_rows(sample))
    assert read_metrics(tmp_path / "m.csv", "December", roster) == sample
    rows = metric_rows(sample)
    rows[0]["sales"] = 5.0  # a university with sales
    write_csv(tmp_path / "bad.csv", rows)
    with pytest.raises(ValueError, match=r"bad\.csv:2: .*sales"):
        read_metrics(tmp_path / "bad.csv", "December", roster)


def test_sample_set_one_record_per_institution():
    with pytest.raises(ValueError, match="two records"):
        SampleSet("x", (rec("U1"), rec("U1")))


def test_per_domain_values_follow_plan_order():
    roster = [com("C1", ("a.com", "b.com"), 1)]
    plan = metric_plan(roster)
    hits = [HitCount("q", "All", i) for i in range(len(plan))]
    assert per_domain_values(plan, hits) == {"a.com": 0, "b.com": 4}
    with pytest.raises(ValueError):
        per_domain_values(plan, hits[:-1])


def test_dumlupinar_case_flagged_and_boundary_not():
    s = SampleSet("December", (rec("dpu", 62_200, 685_000), rec("eq", 50, 50), rec("ok", 50, 10)))
    assert flag_regional_anomalies(s) == [("dpu", 62_200, 685_000)]
    assert flag_regional_anomalies(SampleSet("empty", ())) == []


@given(st.lists(st.tuples(st.integers(0, 10**6), st.integers(0, 10**6)), max_size=40))
def test_anomalies_equal_brute_force(pairs):
    records = tuple(rec(f"I{i}", g, l) for i, (g, l) in enumerate(pairs))
    expected = [(f"I{i}", g, l) for i, (g, l) in enumerate(pairs) if l > g]
    assert flag_regional_anomalies(SampleSet("s", records)) == expected


def test_fixture_anomaly_counts_per_sample():
    roster = read_roster(fixture_path("roster.csv"))
    kinds = {i.id: i.kind for i in roster}
    counts = {}
    for label in ("November", "December"):
        sample = read_metrics(fixture_path(f"metrics_{label.lower()}.csv"), label, roster)
        flags = flag_regional_anomalies(sample)
        counts[label] = (sum(kinds[i] is Kind.UNIVERSITY for i, _, _ in flags),
                         sum(kinds[i] is Kind.COMPANY for i, _, _ in flags))
    assert counts == {"November": (6, 2), "December": (3, 11)}


def test_sample_stability_examples():
    a = SampleSet("a", tuple(rec(f"I{i}", gum=10 * i) for i in range(5)))
    assert sample_stability(a, a, "gum") == 1.0
    rev = SampleSet("b", tuple(rec(f"I{i}", gum=100 - 10 * i) for i in range(5)))
    assert sample_stability(a, rev, "gum") == pytest.approx(-1.0, abs=1e-15)
    with pytest.raises(ValueError, match="insufficient overlap"):
        sample_stability(a.subset(["I0", "I1"]), a, "gum")


def test_sample_stability_matches_oracle_on_20_institutions():
    rng = random.Random(20)
    xs = [rng.randint(0, 50) for _ in range(20)]
    ys = [rng.randint(0, 50) for _ in range(20)]
    a = SampleSet("a", tuple(rec(f"I{i}", gum=x) for i, x in enumerate(xs)))
    b = SampleSet("b", tuple(rec(f"I{i}", gum=y) for i, y in reversed(list(enumerate(ys)))))
    assert abs(sample_stability(a, b, "gum") - spearman_rho(xs, ys)) < 1e-12


def test_sample_stability_skips_missing_values():
    a = SampleSet("a", tuple(rec(f"I{i}", citations=i if i != 2 else None) for i in range(5)))
    b = SampleSet("b", tuple(rec(f"I{i}", citations=4 - i) for i in range(5)))
    assert sample_stability(a, b, "citations") == pytest.approx(-1.0)
