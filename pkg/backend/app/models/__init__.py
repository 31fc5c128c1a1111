# Models package
from app.models.schemas import (
    CellDocument,
    CycleDocument,
    PolynomialDocument,
    TermDocument,
)

__all__ = [
    "CellDocument",
    "CycleDocument",
    "PolynomialDocument",
    "TermDocument",
]
