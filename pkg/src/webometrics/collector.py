"""Running query plans against a search engine.

Only two drivers ship: :class:`FixtureDriver` replays recorded hit counts
from a CSV file and :class:`StubDriver` answers with a constant while
recording request times. A live driver implements :class:`SerpDriver`,
i.e. fetches the first results page for a query and lets
:func:`parse_hce` pull the estimate out of it.
"""
from __future__ import annotations

import csv
import datetime as dt
import logging
import random
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Protocol, Sequence

from .model import HitCount, Region, parse_region
from .queryplan import Engine, QuerySpec, build_query

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CollectorConfig:
    """Politeness and retry settings.

    The wait before each request after the first is
    ``min_interval * (1 + jitter_fraction * u)`` with ``u`` uniform in
    [0, 1), so consecutive requests are never closer than ``min_interval``.
    """

    min_interval: float = 1.0
    jitter_fraction: float = 0.0
    max_retries: int = 3
    region_default: Region = Region.ALL
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if not self.min_interval > 0:
            raise ValueError("min_interval must be positive")
        if not 0 <= self.jitter_fraction <= 1:
            raise ValueError("jitter_fraction must lie in [0, 1]")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        object.__setattr__(self, "region_default", parse_region(self.region_default))


@dataclass(frozen=True)
class Response:
    value: int
    retrieved_at: dt.datetime | None = None


class SearchDriver(Protocol):
    def lookup(self, query: str, region: Region) -> Response | None:
        """Hit count for *query*, or ``None`` when the driver has no answer.

        Raise to signal a transient failure; the collector retries.
        """


class SerpDriver:
    """Base for live drivers: subclasses return raw results-page text."""

    def fetch_serp(self, query: str, region: Region) -> str:
        raise NotImplementedError

    def lookup(self, query: str, region: Region) -> Response | None:
        text = self.fetch_serp(query, region)
        return Response(parse_hce(text), dt.datetime.now(dt.timezone.utc))


class FixtureDriver:
    """Replays a recorded CSV with columns query_string,region,value,retrieved_at.

    Replay contacts no server, so the collector does not rate-limit it.
    """

    replay = True

    def __init__(self, recordings: dict[tuple[str, Region], Response]):
        self.recordings = recordings

    @classmethod
    def from_csv(cls, path: str | Path) -> "FixtureDriver":
        recordings = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = {"query_string", "region", "value"} - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{path}: missing columns {sorted(missing)}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    key = (row["query_string"], parse_region(row["region"]))
                    stamp = row.get("retrieved_at") or None
                    recordings[key] = Response(
                        int(row["value"]),
                        dt.datetime.fromisoformat(stamp) if stamp else None,
                    )
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
        return cls(recordings)

    def lookup(self, query: str, region: Region) -> Response | None:
        return self.recordings.get((query, region))


GENERAL_FIXTURE = "hits.csv"
ACADEMIC_FIXTURE = "academic_hits.csv"


def fixture_drivers(directory: str | Path) -> dict[Engine, FixtureDriver]:
    """Replay drivers for a recorded-response directory.

    The directory holds ``hits.csv`` (general web index) and optionally
    ``academic_hits.csv`` (scholarly index), both in the fixture CSV format.
    """
    directory = Path(directory)
    general = directory / GENERAL_FIXTURE
    if not general.is_file():
        raise FileNotFoundError(f"no {GENERAL_FIXTURE} in {directory}")
    academic = directory / ACADEMIC_FIXTURE
    return {
        Engine.GENERAL: FixtureDriver.from_csv(general),
        Engine.ACADEMIC: FixtureDriver.from_csv(academic) if academic.is_file() else FixtureDriver({}),
    }


class StubDriver:
    """Answers every query with ``value`` and records when it was asked."""

    def __init__(self, value: int = 0, clock: Callable[[], float] = time.monotonic, failures: int = 0):
        self.value = value
        self.clock = clock
        self.calls: list[tuple[float, str]] = []
        self.failures = failures
        self._lock = threading.Lock()

    def lookup(self, query: str, region: Region) -> Response | None:
        with self._lock:
            self.calls.append((self.clock(), query))
            if self.failures > 0:
                self.failures -= 1
                raise ConnectionError("stub failure")
        return Response(self.value)


class RateGate:
    """Global spacing of requests for one driver, shared by all workers."""

    def __init__(
        self,
        min_interval: float,
        jitter_fraction: float = 0.0,
        seed: int = 0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.min_interval = min_interval
        self.jitter_fraction = jitter_fraction
        self.clock = clock
        self.sleep = sleep
        self._rng = random.Random(seed)
        self._lock = threading.Lock()
        self._next: float | None = None

    def wait(self, extra: float = 0.0) -> float:
        """Block until the next request slot; returns the slot time.

        ``extra`` pushes the slot back further (used for retry backoff).
        """
        with self._lock:
            now = self.clock()
            slot = now if self._next is None else max(now, self._next)
            slot += extra
            if slot > now:
                self.sleep(slot - now)
            gap = self.min_interval * (1 + self.jitter_fraction * self._rng.random())
            self._next = slot + gap
            return slot


def _run_one(spec: QuerySpec, driver: SearchDriver, gate: RateGate, config: CollectorConfig) -> HitCount:
    query = build_query(spec)
    region = spec.region
    error = None
    for attempt in range(config.max_retries + 1):
        backoff = 0.0 if attempt == 0 else config.min_interval * 2 ** (attempt - 1)
        if not getattr(driver, "replay", False):
            gate.wait(backoff)
        try:
            response = driver.lookup(query, region)
        except Exception as exc:  # driver failures are reported per query
            error = f"{type(exc).__name__}: {exc}"
            log.warning("query %r failed (attempt %d): %s", query, attempt + 1, error)
            continue
        if response is None:
            return HitCount(query, region, 0, None, status="no_recording")
        return HitCount(query, region, int(response.value), response.retrieved_at)
    return HitCount(query, region, 0, None, status="error", error=error)


def execute_plan(
    plan: Sequence[QuerySpec],
    driver: SearchDriver | Mapping[Engine, SearchDriver],
    config: CollectorConfig | None = None,
    gate: RateGate | None = None,
) -> list[HitCount]:
    """One :class:`HitCount` per spec, in plan order.

    *driver* is a single driver or a mapping from :class:`Engine` to driver
    (the general and academic indexes answer the same ``site:`` query
    differently). Each driver gets its own rate gate. Failing queries
    become ``status="error"`` entries after ``config.max_retries`` retries;
    the rest of the plan still runs.
    """
    if not plan:
        raise ValueError("empty query plan")
    config = config or CollectorConfig()
    if isinstance(driver, Mapping):
        missing = {s.engine for s in plan} - set(driver)
        if missing:
            raise ValueError(f"no driver for {sorted(e.value for e in missing)}")
        drivers = dict(driver)
    else:
        drivers = {e: driver for e in Engine}
    gates: dict[int, RateGate] = {}
    for d in drivers.values():
        if id(d) not in gates:
            gates[id(d)] = gate or RateGate(config.min_interval, config.jitter_fraction, config.seed)

    def run(spec: QuerySpec) -> HitCount:
        d = drivers[spec.engine]
        return _run_one(spec, d, gates[id(d)], config)

    if config.workers == 1:
        return [run(spec) for spec in plan]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(run, plan))


_EMPTY_PATTERNS = (
    "did not match any documents",
    "no results found",
    "hiçbir belgeyle eşleşmedi",
    "sonuç bulunamadı",
)
_SEP = r"[.,\u00a0\u202f' ]"
_COUNT_RE = re.compile(
    rf"(?<![\d.,])(\d{{1,3}}(?:{_SEP}\d{{3}})+|\d+)\s*(?:results?|sonuç|résultats?|resultados?|ergebnisse)\b",
    re.IGNORECASE,
)


def parse_hce(serp_text: str) -> int:
    """Extract the hit count estimate from first-results-page text.

    Handles the English and Turkish phrasing, comma/dot/space thousands
    separators, and the empty-result message (which gives 0).

    >>> parse_hce("About 723,000 results (0.31 seconds)")
    723000
    >>> parse_hce("Yaklaşık 1.230 sonuç bulundu")
    1230
    """
    text = serp_text.replace("\u00a0", " ").replace("\u202f", " ")
    lowered = text.lower()
    if any(p in lowered for p in _EMPTY_PATTERNS):
        return 0
    match = _COUNT_RE.search(text)
    if not match:
        raise ValueError("unparseable SERP")
    return int(re.sub(_SEP, "", match.group(1)))


def hitcount_rows(hits: Sequence[HitCount], plan: Sequence[QuerySpec] | None = None) -> list[dict]:
    engines = [s.engine.value for s in plan] if plan is not None else [""] * len(hits)
    return [
        {
            "engine": engine,
            "query_string": h.query,
            "region": h.region.value,
            "value": h.value,
            "retrieved_at": h.retrieved_at.isoformat() if h.retrieved_at else "",
            "status": h.status,
        }
        for h, engine in zip(hits, engines)
    ]
