"""Sum-rate maximization over product input distributions."""
