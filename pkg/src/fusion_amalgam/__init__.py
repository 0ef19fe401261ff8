"""Two-prime fusion-system amalgams X = A *_C B: construction, normal forms, verification."""

__version__ = "0.1.0"
