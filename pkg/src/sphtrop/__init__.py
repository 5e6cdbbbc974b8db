"""Spherical tropicalization through toric embeddings."""
