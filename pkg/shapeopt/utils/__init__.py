"""Artifact serialization helpers."""
