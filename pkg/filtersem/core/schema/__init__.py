"""Models and functions used for schema dumps of the run configuration."""
