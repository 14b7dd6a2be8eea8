"""Models and functions used for configuration definitions."""
