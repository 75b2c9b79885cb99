"""Audit logging of command runs."""
