"""Smoothed-analysis experiments on perturbed graphs."""
