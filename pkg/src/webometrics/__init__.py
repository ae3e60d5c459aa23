"""Webometric indicators and URL-mention networks between universities and companies."""
from .model import (
    EdgeType, HitCount, Institution, Kind, MentionEdge, MentionNetwork, Node, NodeMetrics,
    NetworkSummary, Region, Sector, WebMetricsRecord,
)
from .queryplan import Engine, Metric, QuerySpec, build_query, canonicalize, enumerate_pairwise_plan
from .collector import CollectorConfig, FixtureDriver, execute_plan, parse_hce
from .ingest import SampleSet, flag_regional_anomalies, read_metrics, read_roster, resolve_roster
from .stats import correlation_matrix, describe, pca, spearman, varimax
from .network import build_network, classify_and_summarize, network_summary, node_metrics
from .layout import LayoutParams, NodePlacement, fruchterman_reingold
from .io import read_pajek, write_gexf, write_pajek
from .pipeline import PipelineConfig, load_config, run_pipeline

__version__ = "0.1.0"
