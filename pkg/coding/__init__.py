"""Monte Carlo coding experiments over the interference channels."""
