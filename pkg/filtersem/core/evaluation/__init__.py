"""Detection scoring: matching, average precision and emergence criteria."""
