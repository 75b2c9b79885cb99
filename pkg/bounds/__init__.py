"""Closed-form and numerically maximized capacity bounds."""
