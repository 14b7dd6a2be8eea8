"""Runs binding the analysis modules into reproducible result directories."""
