"""Oracle, mutation engine, reduced system and estimator."""
