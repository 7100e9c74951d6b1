"""Weighted graphs, partitions, cut arithmetic and node types."""
