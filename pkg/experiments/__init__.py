"""Command-line experiments and their reports."""
