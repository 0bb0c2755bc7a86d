"""Grids, parallel evaluation and output writers."""
