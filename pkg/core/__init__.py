"""Shared exceptions, seeded randomness and numeric helpers."""
