"""Top activation sheets for external annotation."""
