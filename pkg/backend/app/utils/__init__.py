# Utils package
__all__ = []
