# Services package
__all__ = []
