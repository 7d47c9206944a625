"""Structure linearization toolkit."""
