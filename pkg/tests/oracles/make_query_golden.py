"""Regenerates tests/data/query_golden.csv.

Expected strings are spelled out from the four templates by plain string
concatenation, with the canonical host typed by hand next to each raw
input; nothing from the package is imported.
"""
import csv
from pathlib import Path

# (raw input, canonical host written by hand)
HOSTS = [
    ("metu.edu.tr", "metu.edu.tr"),
    ("https://www.metu.edu.tr/", "metu.edu.tr"),
    ("http://WWW.Istanbul.EDU.TR/tr/index.php?lang=en", "istanbul.edu.tr"),
    ("bilkent.edu.tr.", "bilkent.edu.tr"),
    ("https://user:pw@www.sdu.edu.tr:8443/a#b", "sdu.edu.tr"),
    ("arcelik.com.tr", "arcelik.com.tr"),
    ("http://arcelik.com/", "arcelik.com"),
    ("www.etimaden.gov.tr", "etimaden.gov.tr"),
    ("ik.zaman.com.tr", "ik.zaman.com.tr"),
    ("HTTPS://Kale.Com.Tr/urunler", "kale.com.tr"),
    ("www.www.bossa.com.tr", "bossa.com.tr"),
    ("siemens.com.tr/tr", "siemens.com.tr"),
    ("abc.com", "abc.com"),
]

PAIRS = [
    ("abc.com", "xyz.com"),
    ("https://www.metu.edu.tr", "http://www.aselsan.com.tr/en"),
    ("istanbul.edu.tr", "sdu.edu.tr"),
    ("arcelik.com.tr", "itu.edu.tr"),
    ("www.etimaden.gov.tr", "https://www.ankara.edu.tr/"),
    ("kale.com.tr", "hacettepe.edu.tr"),
    ("HTTP://Zorlu.com.tr", "vestel.com.tr"),
    ("ik.zaman.com.tr", "boun.edu.tr"),
    ("sdu.edu.tr", "istanbul.edu.tr"),
    ("brisa.com.tr", "cu.edu.tr"),
    ("seas.gov.tr", "pasabahce.com.tr"),
]
PAIR_HOSTS = {
    "abc.com": "abc.com", "xyz.com": "xyz.com", "https://www.metu.edu.tr": "metu.edu.tr",
    "http://www.aselsan.com.tr/en": "aselsan.com.tr", "istanbul.edu.tr": "istanbul.edu.tr",
    "sdu.edu.tr": "sdu.edu.tr", "arcelik.com.tr": "arcelik.com.tr", "itu.edu.tr": "itu.edu.tr",
    "www.etimaden.gov.tr": "etimaden.gov.tr", "https://www.ankara.edu.tr/": "ankara.edu.tr",
    "kale.com.tr": "kale.com.tr", "hacettepe.edu.tr": "hacettepe.edu.tr",
    "HTTP://Zorlu.com.tr": "zorlu.com.tr", "vestel.com.tr": "vestel.com.tr",
    "ik.zaman.com.tr": "ik.zaman.com.tr", "boun.edu.tr": "boun.edu.tr",
    "brisa.com.tr": "brisa.com.tr", "cu.edu.tr": "cu.edu.tr", "seas.gov.tr": "seas.gov.tr",
    "pasabahce.com.tr": "pasabahce.com.tr",
}

rows = []
for raw, host in HOSTS[:10]:
    rows.append(("TPC", raw, "", "All", "GeneralIndex", "site:" + host))
for raw, host in HOSTS[:10]:
    rows.append(("APC", raw, "", "All", "AcademicIndex", "site:" + host))
for raw, host in HOSTS[3:13]:
    rows.append(("GUM", raw, "", "All", "GeneralIndex", '"' + host + '" -site:' + host))
for raw, host in HOSTS[:9]:
    rows.append(("LUM", raw, "", "Turkey", "GeneralIndex", '"' + host + '" -site:' + host))
for target, host in PAIRS:
    rows.append(("PairwiseMention", target, host, "All", "GeneralIndex",
                 '"' + PAIR_HOSTS[target] + '" site:' + PAIR_HOSTS[host]))
assert len(rows) == 50

out = Path(__file__).resolve().parents[1] / "data" / "query_golden.csv"
with open(out, "w", newline="", encoding="utf-8") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["metric", "target_input", "host_input", "region", "engine", "expected"])
    w.writerows(rows)
