"""Normalized NOR/NOT circuits and CIRCUITFLIP."""
