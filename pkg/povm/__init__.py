"""Qubit POVMs, bipartite outcome probabilities and classical replication."""
