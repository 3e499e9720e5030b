"""Command-line pipeline: ingest, build-graph, cluster, evaluate, stats, sweep."""
