"""Cluster statistics, flows and report emission."""

from .stats import ClusterStats, FlowTable, cluster_stats, flow_conservation, flow_table, parse_flows_csv
