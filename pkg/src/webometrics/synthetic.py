"""Synthetic networks and the bundled fixture.

The bundled fixture is a made-up roster of 25 universities and 100
companies whose recorded hit counts reproduce the published aggregate
structure of the study's network (edge-type counts, transfer direction
split, the top-20 combinations, eleven mention-free companies, shared and
multi-domain companies) and two monthly metric samples with the reported
regional anomalies. Individual values are invented.
"""
from __future__ import annotations

import csv
import datetime as dt
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .model import Institution, Kind, Node, Sector, make_network

# --- random graphs for tests and demos -------------------------------------


def random_network(n: int, n_arcs: int | None = None, p: float | None = None, seed: int = 0,
                   company_share: float = 0.5, max_hits: int = 1000):
    """Random directed mention network with *n* nodes.

    Either exactly *n_arcs* arcs sampled without replacement, or each
    ordered pair present with probability *p*.
    """
    rng = np.random.default_rng(seed)
    sectors = list(Sector)
    nodes = []
    for i in range(n):
        if rng.random() < company_share:
            nodes.append(Node(f"n{i:03d}", Kind.COMPANY, sectors[i % len(sectors)], int(rng.integers(0, 30000)), f"n{i:03d}.com.tr"))
        else:
            nodes.append(Node(f"n{i:03d}", Kind.UNIVERSITY, None, int(rng.integers(0, 8_000_000)), f"n{i:03d}.edu.tr"))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if n_arcs is not None:
        if n_arcs > len(pairs):
            raise ValueError(f"at most {len(pairs)} arcs fit on {n} nodes")
        chosen = sorted(rng.choice(len(pairs), size=n_arcs, replace=False)) if n_arcs else []
        picked = [pairs[i] for i in chosen]
    else:
        picked = [pr for pr in pairs if rng.random() < (p if p is not None else 0.2)]
    arcs = [(nodes[u].id, nodes[v].id, int(rng.integers(1, max_hits + 1))) for u, v in picked]
    return make_network(nodes, arcs)


# --- bundled fixture --------------------------------------------------------

FIXTURE_PACKAGE = "webometrics.data"
FIXTURE_DIR = "fixture"

STRONGEST_ARCS = [
    ("sdu.edu.tr", "istanbul.edu.tr", 723000),
    ("sdu.edu.tr", "atauni.edu.tr", 152000),
    ("istanbul.edu.tr", "ankara.edu.tr", 129000),
    ("sdu.edu.tr", "marmara.edu.tr", 34100),
    ("istanbul.edu.tr", "hacettepe.edu.tr", 33100),
    ("sdu.edu.tr", "ankara.edu.tr", 27600),
    ("istanbul.edu.tr", "uludag.edu.tr", 27300),
    ("sdu.edu.tr", "metu.edu.tr", 24800),
    ("sdu.edu.tr", "sakarya.edu.tr", 10100),
    ("sakarya.edu.tr", "istanbul.edu.tr", 9680),
    ("sakarya.edu.tr", "ankara.edu.tr", 6820),
    ("istanbul.edu.tr", "atauni.edu.tr", 6750),
    ("sakarya.edu.tr", "sdu.edu.tr", 6110),
    ("sakarya.edu.tr", "gazi.edu.tr", 5140),
    ("sakarya.edu.tr", "selcuk.edu.tr", 4580),
    ("istanbul.edu.tr", "marmara.edu.tr", 3960),
    ("sakarya.edu.tr", "yildiz.edu.tr", 3870),
    ("sdu.edu.tr", "ortaanadolu.com", 3540),
    ("sdu.edu.tr", "sabanciuniv.edu", 3040),
    ("istanbul.edu.tr", "gazi.edu.tr", 2850),
]

UNIVERSITIES = [
    ("metu.edu.tr", "Middle East Technical University"),
    ("istanbul.edu.tr", "Istanbul University"),
    ("hacettepe.edu.tr", "Hacettepe University"),
    ("ankara.edu.tr", "Ankara University"),
    ("bilkent.edu.tr", "Bilkent University"),
    ("itu.edu.tr", "Istanbul Technical University"),
    ("boun.edu.tr", "Bogazici University"),
    ("ege.edu.tr", "Ege University"),
    ("gazi.edu.tr", "Gazi University"),
    ("sdu.edu.tr", "Suleyman Demirel University"),
    ("cu.edu.tr", "Cukurova University"),
    ("atauni.edu.tr", "Ataturk University"),
    ("marmara.edu.tr", "Marmara University"),
    ("uludag.edu.tr", "Uludag University"),
    ("sakarya.edu.tr", "Sakarya University"),
    ("selcuk.edu.tr", "Selcuk University"),
    ("yildiz.edu.tr", "Yildiz Technical University"),
    ("sabanciuniv.edu", "Sabanci University"),
    ("deu.edu.tr", "Dokuz Eylul University"),
    ("ktu.edu.tr", "Karadeniz Technical University"),
    ("erciyes.edu.tr", "Erciyes University"),
    ("anadolu.edu.tr", "Anadolu University"),
    ("dpu.edu.tr", "Dumlupinar University"),
    ("isikun.edu.tr", "Isik University"),
    ("odu.edu.tr", "Ordu University"),
]

# named companies: (domains, name, sector)
NAMED_COMPANIES = [
    (("arcelikas.com", "arcelik.com.tr"), "Arcelik A.S.", Sector.METAL_PRODUCTS),
    (("philsa.com.tr", "pmkariyer.com"), "Philsa Philip Morris Sabanci", Sector.FOOD),
    (("icdas.com.tr",), "Icdas Celik Enerji Tersane ve Ulasim", Sector.PRIMARY_METALS),
    (("icdas.com.tr",), "Icdas Elektrik Enerjisi Uretim ve Yatirim", Sector.ELECTRICITY),
    (("zorlu.com.tr",), "Vestel Beyaz Esya", Sector.METAL_PRODUCTS),
    (("zorlu.com.tr",), "Zorluteks Tekstil", Sector.TEXTILES),
    (("etimaden.gov.tr",), "Eti Maden Isletmeleri", Sector.MINING),
    (("ortaanadolu.com",), "Orta Anadolu Mensucat", Sector.TEXTILES),
    (("aygaz.com.tr",), "Aygaz A.S.", Sector.CHEMICALS),
    (("kale.com.tr",), "Kaleseramik Canakkale Kalebodur", Sector.NON_METALLIC),
    (("siemens.com.tr",), "Siemens Sanayi ve Ticaret", Sector.METAL_PRODUCTS),
    (("ik.zaman.com.tr",), "Feza Gazetecilik", Sector.PAPER),
    (("bossa.com.tr",), "Bossa Ticaret ve Sanayi", Sector.TEXTILES),
    (("mercedes-benz.com.tr",), "Mercedes-Benz Turk", Sector.MOTOR_VEHICLES),
    (("hurriyet.com.tr",), "Hurriyet Gazetecilik", Sector.PAPER),
    (("pasabahce.com.tr",), "Pasabahce", Sector.NON_METALLIC),
    (("seas.gov.tr",), "Seyitomer Elektrik", Sector.ELECTRICITY),
    (("brisa.com.tr",), "Brisa Bridgestone Sabanci", Sector.CHEMICALS),
]

SECTOR_SLUG = {
    Sector.FOOD: "food", Sector.MINING: "mining", Sector.CHEMICALS: "kimya",
    Sector.METAL_PRODUCTS: "makine", Sector.MOTOR_VEHICLES: "otomotiv", Sector.NON_METALLIC: "seramik",
    Sector.ELECTRICITY: "enerji", Sector.PAPER: "kagit", Sector.PRIMARY_METALS: "metal",
    Sector.TEXTILES: "tekstil",
}

UNI_ACTIVE, TRANSFER_ACTIVE, COM_ACTIVE = 597, 502, 73
UNI_TO_COM, COM_TO_UNI = 455, 47
UNI_MEAN, TRANSFER_MEAN, COM_MEAN = 2155, 18.1, 10.4
ISOLATED_COMPANIES = 11
ETIMADEN_UNIVERSITIES = 20


def fixture_roster() -> list[Institution]:
    roster = [
        Institution(f"U{i + 1:02d}", name, Kind.UNIVERSITY, (domain,), i + 1)
        for i, (domain, name) in enumerate(UNIVERSITIES)
    ]
    per_sector = {s: [] for s in Sector}
    for domains, name, sector in NAMED_COMPANIES:
        per_sector[sector].append((domains, name))
    for sector in Sector:
        k = 1
        while len(per_sector[sector]) < 10:
            per_sector[sector].append(((f"{SECTOR_SLUG[sector]}{k:02d}.com.tr",), f"{sector.value.split(',')[0]} Company {k}"))
            k += 1
    # ranks interleave sectors; the shared-domain pairs get ranks 12/47 and 20/63
    fixed_ranks = {
        "Icdas Celik Enerji Tersane ve Ulasim": 12, "Icdas Elektrik Enerjisi Uretim ve Yatirim": 47,
        "Vestel Beyaz Esya": 20, "Zorluteks Tekstil": 63,
    }
    free = iter(r for r in range(1, 200) if r not in fixed_ranks.values())
    cid = 1
    for slot in range(10):
        for sector in Sector:
            domains, name = per_sector[sector][slot]
            rank = fixed_ranks.get(name) or next(free)
            roster.append(Institution(f"C{cid:03d}", name, Kind.COMPANY, domains, rank, sector))
            cid += 1
    return roster


def _spread(rng, total: int, count: int, cap: int) -> list[int]:
    """*count* integers in [1, cap] summing to *total*, skewed like hit counts."""
    if not count <= total <= count * cap:
        raise ValueError("cannot spread total under the cap")
    weights = rng.lognormal(0.0, 1.2, size=count)
    vals = np.minimum(1 + np.floor(weights / weights.sum() * (total - count)).astype(int), cap)
    i = 0
    order = np.argsort(-weights)
    while vals.sum() < total:
        j = order[i % count]
        if vals[j] < cap:
            vals[j] += 1
        i += 1
    return [int(v) for v in vals]


def fixture_pairwise(roster: list[Institution], seed: int = 2014) -> list[tuple[str, str, int]]:
    """Recorded (host_domain, target_domain, hits) rows with hits >= 1."""
    rng = np.random.default_rng(seed)
    unis = [i.domains[0] for i in roster if i.kind is Kind.UNIVERSITY]
    excluded = {"Icdas Elektrik Enerjisi Uretim ve Yatirim", "Zorluteks Tekstil"}
    companies = []
    for inst in roster:
        if inst.kind is Kind.COMPANY and inst.name not in excluded:
            companies.append(inst.domains[-1] if inst.name.startswith("Arcelik") else inst.domains[0])
    named = {"etimaden.gov.tr", "ortaanadolu.com", "aygaz.com.tr", "kale.com.tr", "siemens.com.tr",
             "arcelik.com.tr", "zorlu.com.tr", "pasabahce.com.tr", "seas.gov.tr", "brisa.com.tr", "icdas.com.tr"}
    candidates = [c for c in companies if c not in named]
    isolated = set(rng.choice(candidates, size=ISOLATED_COMPANIES, replace=False))
    active = [c for c in companies if c not in isolated]

    rows = []
    strongest = {(h, t): w for h, t, w in STRONGEST_ARCS}
    # UNI: every ordered pair except three
    uni_pairs = [(h, t) for h in unis for t in unis if h != t]
    free = [pr for pr in uni_pairs if pr not in strongest]
    drop = {free[i] for i in rng.choice(len(free), size=len(uni_pairs) - UNI_ACTIVE, replace=False)}
    rest = [pr for pr in free if pr not in drop]
    strongest_uni = [(h, t, w) for h, t, w in STRONGEST_ARCS if t in unis]
    left = UNI_MEAN * UNI_ACTIVE - sum(w for _, _, w in strongest_uni)
    rows += strongest_uni
    rows += [(h, t, w) for (h, t), w in zip(rest, _spread(rng, left, len(rest), 2000))]

    # TRANSFER: etimaden reaches 20 universities, every active company at least one link
    uc = {("sdu.edu.tr", "ortaanadolu.com")}
    cu = {("aygaz.com.tr", "ege.edu.tr")}
    eti_unis = list(rng.choice(unis, size=ETIMADEN_UNIVERSITIES, replace=False))
    for u in eti_unis[:17]:
        uc.add((u, "etimaden.gov.tr"))
    for u in eti_unis[17:]:
        cu.add(("etimaden.gov.tr", u))
    for c in active:
        if c == "etimaden.gov.tr":
            continue
        if not any(c in pr for pr in uc | cu):
            uc.add((unis[int(rng.integers(len(unis)))], c))
    non_eti = [c for c in active if c != "etimaden.gov.tr"]
    while len(uc) < UNI_TO_COM:
        uc.add((unis[int(rng.integers(len(unis)))], non_eti[int(rng.integers(len(non_eti)))]))
    while len(cu) < COM_TO_UNI:
        pr = (non_eti[int(rng.integers(len(non_eti)))], unis[int(rng.integers(len(unis)))])
        if (pr[1], pr[0]) not in uc or rng.random() < 0.3:
            cu.add(pr)
    uc_rest = sorted(uc - {("sdu.edu.tr", "ortaanadolu.com")})
    cu_rest = sorted(cu - {("aygaz.com.tr", "ege.edu.tr")})
    transfer_total = round(TRANSFER_MEAN * TRANSFER_ACTIVE)
    left = transfer_total - 3540 - 71
    n_cu = len(cu_rest)
    cu_share = int(left * 0.06)
    rows.append(("sdu.edu.tr", "ortaanadolu.com", 3540))
    rows.append(("aygaz.com.tr", "ege.edu.tr", 71))
    rows += [(h, t, w) for (h, t), w in zip(cu_rest, _spread(rng, cu_share, n_cu, 60))]
    rows += [(h, t, w) for (h, t), w in zip(uc_rest, _spread(rng, left - cu_share, len(uc_rest), 400))]

    # COM
    com_pairs = set()
    while len(com_pairs) < COM_ACTIVE:
        h, t = rng.choice(active, size=2, replace=False)
        com_pairs.add((str(h), str(t)))
    com_total = round(COM_MEAN * COM_ACTIVE)
    rows += [(h, t, w) for (h, t), w in zip(sorted(com_pairs), _spread(rng, com_total, COM_ACTIVE, 80))]
    return [(str(h), str(t), int(w)) for h, t, w in rows]


def _lognormal_int(rng, median: float, sigma: float) -> int:
    return int(round(median * math.exp(sigma * rng.standard_normal())))


# institution-specific values from the study's text
KNOWN_TPC = {"sdu.edu.tr": 7_090_000, "istanbul.edu.tr": 6_990_000, "bilkent.edu.tr": 2_050_000,
             "arcelik.com.tr": 27_400, "arcelikas.com": 900, "kale.com.tr": 22_400,
             "mercedes-benz.com.tr": 17_500, "philsa.com.tr": 310, "pmkariyer.com": 95}
DECEMBER_ANOMALIES = {"dpu.edu.tr": (62_200, 685_000), "isikun.edu.tr": (43_000, 645_000), "odu.edu.tr": (72_000, 475_000)}
NOVEMBER_ANOMALY_UNIS = ("dpu.edu.tr", "odu.edu.tr", "ktu.edu.tr", "erciyes.edu.tr", "anadolu.edu.tr", "deu.edu.tr")


def fixture_samples(roster: list[Institution], seed: int = 12) -> dict[str, list[dict]]:
    """Metric rows for a November and a December sample."""
    rng = np.random.default_rng(seed)
    companies = [i for i in roster if i.kind is Kind.COMPANY]
    comp_dec_anom = {c.id for c in companies[5:16]}
    comp_nov_anom = {c.id for c in companies[20:22]}
    base = {}
    for inst in roster:
        uni = inst.kind is Kind.UNIVERSITY
        z = rng.standard_normal()  # shared web-impact factor
        domain = max(inst.domains, key=lambda d: KNOWN_TPC.get(d, 0))
        tpc = KNOWN_TPC.get(domain) or int(round((89_550 if uni else 628) * math.exp(1.4 * z + 0.7 * rng.standard_normal())))
        gum = int(round((117_500 if uni else 10_400) * math.exp(0.8 * z + 0.8 * rng.standard_normal())))
        rd = max(1, int(round((1_157 if uni else 81) * math.exp(0.9 * z + 0.5 * rng.standard_normal()))))
        ext = max(rd, int(round(rd * (12 if uni else 15) * math.exp(0.6 * rng.standard_normal()))))
        da = int(min(100, max(0, round((57 if uni else 33) + 5 * z + 4 * rng.standard_normal()))))
        base[inst.id] = dict(
            tpc=tpc,
            apc=(int(round(650 * math.exp(0.9 * z + 0.8 * rng.standard_normal()))) if uni
                 else int(rng.choice([0] * 17 + [1, 2]))),
            gum=gum, domain_authority=da, external_links=ext, root_domains=rd,
            citations=int(round(20_000 * math.exp(1.0 * z + 0.6 * rng.standard_normal()))) if uni else None,
            sales=round(1.5e9 * math.exp(0.5 * z + 0.9 * rng.standard_normal()), 2) if not uni else None,
            note=("domain authority taken from zaman.com.tr" if domain == "ik.zaman.com.tr" else ""),
        )
    out = {}
    for label, date, shift in (("November", dt.date(2014, 11, 24), 2.5), ("December", dt.date(2014, 12, 29), 0.0)):
        rows = []
        for inst in roster:
            b = dict(base[inst.id])
            domain = inst.domains[0]
            gum = b["gum"] if shift == 0 else int(round(b["gum"] * math.exp(shift * rng.standard_normal())))
            lum = int(round(gum * rng.uniform(0.02, 0.97)))
            if label == "December" and domain in DECEMBER_ANOMALIES:
                gum, lum = DECEMBER_ANOMALIES[domain]
            elif label == "November" and domain in NOVEMBER_ANOMALY_UNIS:
                lum = gum * 3 + 1000
            elif (label == "December" and inst.id in comp_dec_anom) or (label == "November" and inst.id in comp_nov_anom):
                lum = gum + int(rng.integers(1, 50_000))
            b.update(gum=gum, lum=lum)
            rows.append({"institution_id": inst.id, "sample_date": date.isoformat(), **b})
        out[label] = rows
    return out


def fixture_hits(roster: list[Institution], december: list[dict], pairwise: list[tuple[str, str, int]]) -> list[dict]:
    """Recorded HCEs for metric queries on every listed domain and for
    every active pairwise combination."""
    from .queryplan import Metric, build_query, metric_spec, pairwise_spec

    by_id = {r["institution_id"]: r for r in december}
    rows = []
    stamp = dt.datetime(2014, 12, 29, 10, 0, 0)
    k = 0
    for inst in roster:
        rec = by_id[inst.id]
        best = max(inst.domains, key=lambda d: KNOWN_TPC.get(d, 0))
        for domain in inst.domains:
            for metric in (Metric.TPC, Metric.APC, Metric.GUM, Metric.LUM):
                spec = metric_spec(metric, domain)
                if domain == best:
                    value = rec[metric.value.lower()]
                elif metric is Metric.TPC:
                    value = KNOWN_TPC[domain]
                else:
                    value = rec[metric.value.lower()] // 20
                rows.append({"query_string": build_query(spec), "region": spec.region.value, "value": value,
                             "retrieved_at": (stamp + dt.timedelta(seconds=7 * k)).isoformat(),
                             "engine": spec.engine.value})
                k += 1
    seen = set()
    for host, target, hits in pairwise:
        spec = pairwise_spec(host, target)
        key = build_query(spec)
        if key in seen:
            continue
        seen.add(key)
        rows.append({"query_string": key, "region": spec.region.value, "value": hits,
                     "retrieved_at": (stamp + dt.timedelta(seconds=7 * k)).isoformat(),
                     "engine": spec.engine.value})
        k += 1
    return rows


def write_fixture(outdir: str | Path) -> Path:
    """Regenerate the bundled fixture files into *outdir*."""
    from .ingest import roster_rows
    from .io import write_csv

    out = Path(outdir)
    roster = fixture_roster()
    samples = fixture_samples(roster)
    pairwise = fixture_pairwise(roster)
    write_csv(out / "roster.csv", roster_rows(roster), ["id", "name", "kind", "sector", "domains", "source_rank"])
    cols = ["institution_id", "sample_date", "tpc", "apc", "gum", "lum", "domain_authority",
            "external_links", "root_domains", "citations", "sales", "note"]
    for label, rows in samples.items():
        write_csv(out / f"metrics_{label.lower()}.csv", rows, cols)
    hits = fixture_hits(roster, samples["December"], pairwise)
    cols = ["query_string", "region", "value", "retrieved_at"]
    write_csv(out / "hits.csv", [r for r in hits if r["engine"] == "GeneralIndex"], cols)
    write_csv(out / "academic_hits.csv", [r for r in hits if r["engine"] == "AcademicIndex"], cols)
    write_csv(out / "pairwise.csv", [{"host_domain": h, "target_domain": t, "hits": w} for h, t, w in pairwise],
              ["host_domain", "target_domain", "hits"])
    (out / "pipeline.cfg").write_text(
        "# bundled synthetic fixture; paths are relative to this file\n"
        "roster_path = roster.csv\n"
        "fixtures_path = .\n"
        "samples = November=metrics_november.csv;December=metrics_december.csv\n"
        "output_dir = out\n"
        "summary_mode = Directed\n"
        "alpha_levels = 0.01;0.05\n"
        "network_top_universities = 25\n"
        "top_k = 20\n"
        "layout_iterations = 500\n"
        "layout_seed = 7\n",
        encoding="utf-8",
    )
    return out


def fixture_path(name: str = "") -> Path:
    """Path of a file in the bundled fixture directory."""
    base = Path(str(resources.files(FIXTURE_PACKAGE).joinpath(FIXTURE_DIR)))
    return base / name if name else base


def read_csv_rows(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
