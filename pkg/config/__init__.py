"""Run configuration for experiments and benchmarks."""
