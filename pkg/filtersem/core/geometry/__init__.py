"""Boxes and analytic receptive fields."""
