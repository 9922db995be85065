"""Short-time analysis and overlap-add synthesis."""
