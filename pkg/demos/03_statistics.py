# %% [markdown]
# # Descriptives, rank correlations and components
#
# Metrics are heavy-tailed, so the analysis uses Spearman correlations and
# a log10(1+x) transform before PCA.

# %%
import tempfile

import numpy as np

from webometrics import stats
from webometrics.ingest import sample_stability
from webometrics.model import Kind
from webometrics.pipeline import UNIVERSITY_STATS, Pipeline, load_config
from webometrics.synthetic import fixture_path

pipe = Pipeline(load_config(fixture_path("pipeline.cfg"), {"output_dir": tempfile.mkdtemp()}))
kinds = {i.id: i.kind for i in pipe.roster}
sample = pipe.primary_sample
unis = sample.subset(i for i, k in kinds.items() if k is Kind.UNIVERSITY)
print(len(unis.records), "universities in the", sample.label, "sample")

# %%
for var in ("tpc", "gum", "root_domains"):
    d = stats.describe(unis.column(var))
    print(f"{var:14} mean {d.mean:14.1f}  sd {d.std_dev:14.1f}  skew {d.skewness:6.2f}  kurtosis {d.kurtosis:6.2f}")

# %% [markdown]
# ## Spearman matrix with significance marks
#
# With n universities the 1% critical value of |rho| follows from the t
# distribution.

# %%
table = {v: unis.column(v) for v in UNIVERSITY_STATS}
cm = stats.correlation_matrix(table, UNIVERSITY_STATS)
print(np.round(cm.rho, 2))
print("critical |rho| at 1%:", round(stats.critical_rho(len(unis.records), 0.01), 3))

# %% [markdown]
# ## Two rotated components

# %%
X = np.column_stack([stats.log_transform(unis.column(v)) for v in ("tpc", "gum", "external_links", "root_domains")])
res = stats.pca(X, n_components=2)
print("eigenvalues:", np.round(res.eigenvalues, 3))
print("rotated loadings:\n", np.round(res.rotated_loadings, 3))
print("communalities:", np.round(res.communalities, 3))

# %% [markdown]
# ## Stability between the two samples
#
# Mention counts were sampled twice. Weak agreement between the months is a
# warning about hit-count estimates; page counts and link metrics were
# taken once, so they agree perfectly.

# %%
first, second = pipe.samples
for name, kind in (("universities", Kind.UNIVERSITY), ("companies", Kind.COMPANY)):
    ids = [i for i, k in kinds.items() if k is kind]
    a, b = first.subset(ids), second.subset(ids)
    print(f"{name:12} GUM rho {sample_stability(a, b, 'gum'):.2f}   LUM rho {sample_stability(a, b, 'lum'):.2f}")
