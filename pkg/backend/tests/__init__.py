# Tests package
__all__ = []

