# %% [markdown]
# # Layout and export
#
# Force-directed coordinates, node sizes from page counts and colours by
# sector, written to Pajek and GEXF for Gephi.

# %%
import tempfile
from pathlib import Path

from webometrics import io
from webometrics.layout import LayoutParams, fr_steps, fruchterman_reingold
from webometrics.pipeline import Pipeline, load_config
from webometrics.synthetic import fixture_path

pipe = Pipeline(load_config(fixture_path("pipeline.cfg"), {"output_dir": tempfile.mkdtemp()}))
net = pipe.net
params = LayoutParams(seed=7)
print("k =", round(params.optimal_distance(len(net)), 1), " t0 =", params.t0)

# %% [markdown]
# The step size is capped by a temperature that cools linearly to zero.

# %%
for step in fr_steps(net, params):
    if step.iteration % 100 == 0:
        print(f"iteration {step.iteration:3}  temperature {step.temperature:6.2f}  max move {step.max_displacement:6.2f}")

# %%
placements = fruchterman_reingold(net, params)
for p in placements[:3]:
    print(p)

# %%
out = Path(tempfile.mkdtemp())
io.write_pajek(net, out / "network.net")
io.write_gexf(net, out / "network.gexf", placements)
back = io.read_pajek(out / "network.net")
print("round trip equal:", back == net)
print(sorted(p.name for p in out.iterdir()))
