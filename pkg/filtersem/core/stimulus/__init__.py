"""Activations, stimulus detections and non-maximum suppression."""
