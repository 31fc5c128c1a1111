"""
JSON documents exchanged by the command line tool.

Rationals travel as "a/b" strings and integers bare, so a document read
back reproduces the exact objects it was written from.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import List, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.exceptions import DocumentError, InvalidInputError
from app.services.complexes import WeightedComplex, build_complex
from app.services.polyhedra import from_generators
from app.services.troppoly import TropicalPolynomial
from app.utils.exact import format_fraction, to_fraction

Document = TypeVar("Document", bound=BaseModel)


def _rational_string(value) -> str:
    return format_fraction(to_fraction(value, "rational"))


# ========== CYCLE DOCUMENTS ==========


class CellDocument(BaseModel):
    vertices: List[List[str]] = Field(..., min_length=1)
    rays: List[List[int]] = Field(default_factory=list)
    weight: int

    @field_validator("vertices", mode="before")
    @classmethod
    def validate_vertices(cls, v):
        """Accept ints and rational strings, store canonical "a/b" strings"""
        if not isinstance(v, list) or not all(isinstance(row, list) for row in v):
            raise ValueError("vertices must be a list of coordinate lists")
        return [[_rational_string(x) for x in row] for row in v]

    @field_validator("weight")
    @classmethod
    def validate_weight(cls, v: int) -> int:
        if v == 0:
            raise ValueError("cell weights must be nonzero")
        return v


class CycleDocument(BaseModel):
    ambient: int = Field(..., ge=1)
    dim: int = Field(..., ge=0)
    cells: List[CellDocument] = Field(..., min_length=1)

    @model_validator(mode="after")
    def validate_lengths(self):
        for index, cell in enumerate(self.cells):
            lengths = {len(row) for row in cell.vertices} | {len(row) for row in cell.rays}
            if lengths != {self.ambient}:
                raise ValueError(
                    f"cell {index} has coordinates of length {sorted(lengths)}, "
                    f"ambient is {self.ambient}"
                )
        if self.dim > self.ambient:
            raise ValueError(f"dim {self.dim} exceeds ambient {self.ambient}")
        return self

    def to_complex(self) -> WeightedComplex:
        cells = [(from_generators(c.vertices, c.rays, self.ambient), c.weight) for c in self.cells]
        C = build_complex(cells)
        if C.dim != self.dim:
            raise DocumentError(
                f"document declares dim {self.dim} but its cells have dimension {C.dim}",
                invariant="pure dimension",
            )
        return C

    @classmethod
    def from_complex(cls, C: WeightedComplex) -> "CycleDocument":
        """Canonical order: cells by (sorted vertices, sorted rays)"""
        entries = []
        for cell in C.cells:
            P = cell.polyhedron
            vertices = sorted(P.vertices)
            rays = sorted(
                list(P.rays)
                + [tuple(x) for x in P.lineality]
                + [tuple(-x for x in line) for line in P.lineality]
            )
            entries.append((vertices, rays, cell.weight))
        entries.sort(key=lambda entry: (entry[0], entry[1]))
        return cls(
            ambient=C.ambient,
            dim=C.dim,
            cells=[
                CellDocument(
                    vertices=[[format_fraction(x) for x in v] for v in vertices],
                    rays=[list(r) for r in rays],
                    weight=weight,
                )
                for vertices, rays, weight in entries
            ],
        )


# ========== POLYNOMIAL DOCUMENTS ==========


class TermDocument(BaseModel):
    exp: List[int] = Field(..., min_length=1)
    coef: str

    @field_validator("coef", mode="before")
    @classmethod
    def validate_coef(cls, v):
        return _rational_string(v)


class PolynomialDocument(BaseModel):
    n: int = Field(..., ge=1)
    terms: List[TermDocument] = Field(..., min_length=1)

    @model_validator(mode="after")
    def validate_exponents(self):
        for index, term in enumerate(self.terms):
            if len(term.exp) != self.n:
                raise ValueError(f"term {index} has {len(term.exp)} exponents, n is {self.n}")
        return self

    def to_polynomial(self) -> TropicalPolynomial:
        return TropicalPolynomial.from_terms(
            self.n, [(tuple(t.exp), Fraction(t.coef)) for t in self.terms]
        )

    @classmethod
    def from_polynomial(cls, p: TropicalPolynomial) -> "PolynomialDocument":
        return cls(
            n=p.n,
            terms=[TermDocument(exp=list(alpha), coef=format_fraction(c)) for alpha, c in p.terms],
        )


# ========== LOADING ==========


def _describe(e: ValidationError) -> str:
    problems = []
    for error in e.errors():
        location = ".".join(str(part) for part in error["loc"]) or "document"
        problems.append(f"{location}: {error['msg']}")
    return "; ".join(problems)


def parse_document(text: str, model: Type[Document], source: str = "<input>") -> Document:
    """Parse JSON text into a document, naming line/column or field on failure"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(
            f"{source}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}",
            invariant="well-formed JSON",
        ) from e
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise DocumentError(f"{source}: {_describe(e)}", invariant=model.__name__) from e


def load_document(path: Union[str, Path], model: Type[Document]) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}", invariant="readable input") from e
    return parse_document(text, model, str(path))


def load_cycle(path: Union[str, Path]) -> WeightedComplex:
    return load_document(path, CycleDocument).to_complex()


def load_polynomial(path: Union[str, Path]) -> TropicalPolynomial:
    document = load_document(path, PolynomialDocument)
    try:
        return document.to_polynomial()
    except InvalidInputError:
        raise
    except ValueError as e:
        raise DocumentError(f"{path}: {e}", invariant="PolynomialDocument") from e


def dump_document(document: BaseModel) -> str:
    return json.dumps(document.model_dump(), indent=2) + "\n"
