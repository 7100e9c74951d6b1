"""Comparing nodes and their degree-five degradation."""
