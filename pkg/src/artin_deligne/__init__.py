"""Deligne complexes and rigidity of large-type Artin groups."""
