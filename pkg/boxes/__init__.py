"""Correlation resources shared by the senders."""
