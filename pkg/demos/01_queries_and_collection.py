# %% [markdown]
# # Query plans and hit-count collection
#
# Every metric is a search-engine query. This walk-through builds the
# queries for one institution, then replays the full pairwise plan of the
# bundled fixture through the recorded result counts.

# %%
from webometrics import collector, queryplan
from webometrics.ingest import read_roster
from webometrics.synthetic import fixture_path

for metric in ("TPC", "APC", "GUM", "LUM"):
    spec = queryplan.metric_spec(metric, "metu.edu.tr")
    print(f"{metric}: {queryplan.build_query(spec)!r:40} engine={spec.engine.value} region={spec.region.value}")

print(queryplan.build_query(queryplan.pairwise_spec("sdu.edu.tr", "istanbul.edu.tr")))

# %% [markdown]
# Inputs are canonicalized first, so a pasted URL and a bare host give the
# same query.

# %%
for raw in ("https://www.Metu.edu.tr/", "metu.edu.tr", "http://www.www.metu.edu.tr/index.html"):
    print(f"{raw:40} -> {queryplan.canonicalize(raw)}")

# %% [markdown]
# ## The pairwise plan
#
# All ordered pairs of distinct domains are queried: N(N-1) queries.

# %%
roster = read_roster(fixture_path("roster.csv"))
print(len(roster), "institutions on the roster")
print("full plan for 123 nodes:", queryplan.pair_count(123))
print("university-company pairs only:", queryplan.cross_pair_count(25, 98))

# %% [markdown]
# ## Replaying recorded counts
#
# Fixture drivers answer from CSV recordings and skip the rate gate, so
# the whole plan replays in well under a second.

# %%
from webometrics.ingest import resolve_roster, per_domain_values

drivers = collector.fixture_drivers(fixture_path())
mplan = queryplan.metric_plan(roster)
mhits = collector.execute_plan(mplan, drivers)
resolution = resolve_roster(roster, per_domain_values(mplan, mhits))
print("excluded:", resolution.excluded)

members = resolution.members(roster)
plan = queryplan.enumerate_pairwise_plan(members, resolution.chosen)
hits = collector.execute_plan(plan, drivers)
active = sum(h.value > 0 for h in hits)
print(f"{len(plan)} pairwise queries, {active} with at least one hit")

# %% [markdown]
# Live collection goes through the same `execute_plan`, with a driver that
# fetches result pages and a gate that enforces the minimum interval.

# %%
print(collector.parse_hce("About 1,230,000 results (0.31 seconds)"))
