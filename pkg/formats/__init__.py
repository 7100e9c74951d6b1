"""Text formats for graphs, circuits and partitions."""
