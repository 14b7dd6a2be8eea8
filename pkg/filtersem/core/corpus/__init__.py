"""Annotated images: model, files, crops, part catalog and synthetic generation."""
