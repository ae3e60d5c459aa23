# %% [markdown]
# # The mention network
#
# Arcs point from the page that mentions a domain to the domain's owner.
# This script builds the fixture network and reproduces its summary,
# edge taxonomy and rankings.

# %%
import tempfile

from webometrics import network
from webometrics.pipeline import Pipeline, load_config
from webometrics.synthetic import fixture_path

out = tempfile.mkdtemp()
pipe = Pipeline(load_config(fixture_path("pipeline.cfg"), {"output_dir": out}))
net = pipe.net
print(len(net), "nodes,", len(net.arcs), "arcs")

# %% [markdown]
# ## Whole-network summary
#
# Density is average degree over N-1 in both views.

# %%
for mode in (network.DIRECTED, network.UNDIRECTED):
    s = network.network_summary(net, mode)
    print(f"{mode:15} avg degree {s.avg_degree:.3f}  density {s.density:.4f}  "
          f"diameter {s.diameter}  avg path {s.avg_path_length:.3f}  clustering {s.avg_clustering:.3f}")

# %% [markdown]
# ## Edge types
#
# UNI links universities, COM links companies, TRANSFER crosses the two.

# %%
tax = network.classify_and_summarize(net)
for s in tax.summaries:
    print(f"{s.edge_type.value:9} pairs {s.active_pairs:4}  share {s.share_pct:5.1f}%  mean hits {s.mean_hits:8.1f}")
print(f"university->company {tax.uni_to_com_pct:.1f}%, company->university {tax.com_to_uni_pct:.1f}%")

# %% [markdown]
# ## Strongest arcs and the most connected universities

# %%
for host, target, hits, kind in network.top_combinations(net, 5):
    print(f"FROM {net.node(host).label} TO {net.node(target).label}: {hits} ({kind.value})")

for r in network.interaction_ranking(net)[:5]:
    print(r)

# %% [markdown]
# ## Centralities

# %%
metrics = sorted(network.node_metrics(net), key=lambda m: -m.betweenness)
for m in metrics[:5]:
    print(f"{net.node(m.node_id).label:22} degree {m.degree:3}  betweenness {m.betweenness:8.1f}  "
          f"eigenvector {m.eigenvector:.3f}")
