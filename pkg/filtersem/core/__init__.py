"""Models and functions used for the analysis toolkit."""
