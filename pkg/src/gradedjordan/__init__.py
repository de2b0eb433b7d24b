"""Graded Jordan pairs and triple systems, with their coordinatization."""
