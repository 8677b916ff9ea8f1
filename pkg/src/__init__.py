"""Bayes predictive densities for two-sample normal models under order restrictions."""
