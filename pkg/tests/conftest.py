# Keeps this directory importable so tests can share the _oracles helpers.
