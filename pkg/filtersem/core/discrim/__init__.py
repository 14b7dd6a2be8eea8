"""Discriminativeness of filters and parts, and the correlations between part statistics."""
