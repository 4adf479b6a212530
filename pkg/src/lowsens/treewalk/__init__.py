"""Sensitive trees, proper walks and the walk encoding."""
