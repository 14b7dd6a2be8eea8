"""Minimal feed-forward CNN inference with feature-map capture and ablation."""
