"""Sigma-function expansions of telescopic curves in exact arithmetic."""
