"""Models and functions used for analysing convolutional filters as semantic part detectors."""
