"""Two-sender, two-receiver channels and their information quantities."""
