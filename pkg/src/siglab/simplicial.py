"""Simplicial complexes: ingestion, validation, orientation, Euler characteristic.

A complex is stored as its top-dimensional simplices plus the full face
lattice in every dimension, with a fixed canonical ordering (lexicographic on
sorted vertex tuples).  All sign conventions downstream — coboundaries, cup
products, orientations — are defined relative to this one ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class ComplexFormatError(ValueError):
    """Malformed complex document: bad schema, duplicates, mixed dimensions."""


class NonOrientableError(ValueError):
    """Coherent orientation propagation reached a contradiction."""


class Simplex:
    """A simplex in canonical form: strictly increasing tuple of vertex ids."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[int]):
        verts = tuple(sorted(vertices))
        if not verts:
            raise ValueError("empty simplex")
        if any(v < 0 for v in verts):
            raise ValueError("vertex indices must be non-negative")
        if any(verts[i] == verts[i + 1] for i in range(len(verts) - 1)):
            raise ValueError(f"repeated vertex in simplex {verts}")
        self.vertices = verts

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def facet(self, i: int) -> "Simplex":
        """The codimension-one face obtained by deleting the i-th vertex."""
        return Simplex(self.vertices[:i] + self.vertices[i + 1 :])

    def facets(self) -> Iterator[tuple[int, "Simplex"]]:
        for i in range(len(self.vertices)):
            yield i, self.facet(i)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Simplex) and self.vertices == other.vertices

    def __lt__(self, other: "Simplex") -> bool:
        return self.vertices < other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Simplex{self.vertices}"


@dataclass
class ClosednessReport:
    """Diagnostics from the closed-pseudomanifold check.

    ``bad_faces`` lists every codimension-one face whose number of
    top-simplex cofaces differs from two; ``connected`` refers to the dual
    adjacency graph of top simplices.  An empty report means the complex is a
    closed connected pseudomanifold (pseudomanifold-level validation only —
    links are not checked for being spheres).
    """

    dimension: int
    bad_faces: list[tuple[Simplex, int]] = field(default_factory=list)
    connected: bool = True

    @property
    def closed(self) -> bool:
        return not self.bad_faces

    @property
    def ok(self) -> bool:
        return self.closed and self.connected

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "closed": self.closed,
            "connected": self.connected,
            "bad_faces": [[list(s.vertices), c] for s, c in self.bad_faces],
        }


class SimplicialComplex:
    """Pure simplicial complex given by its top simplices.

    Face lattices for every dimension are built on construction and sorted
    lexicographically; the complex is immutable afterwards.  Orientation is
    optional at construction time (see :func:`orient`).
    """

    def __init__(
        self,
        top_simplices: Sequence[Simplex | Sequence[int]],
        orientation: Sequence[int] | None = None,
        name: str = "",
    ):
        tops = [s if isinstance(s, Simplex) else Simplex(s) for s in top_simplices]
        if not tops:
            raise ComplexFormatError("no top simplices")
        n = tops[0].dimension
        if any(s.dimension != n for s in tops):
            raise ComplexFormatError("mixed top dimensions")
        order = sorted(range(len(tops)), key=lambda i: tops[i].vertices)
        if orientation is not None:
            if len(orientation) != len(tops):
                raise ComplexFormatError("orientation length mismatch")
            if any(s not in (1, -1) for s in orientation):
                raise ComplexFormatError("orientation entries must be +1 or -1")
            orientation = tuple(orientation[i] for i in order)
        tops = [tops[i] for i in order]
        for a, b in zip(tops, tops[1:]):
            if a.vertices == b.vertices:
                raise ComplexFormatError(f"duplicate top simplex {a.vertices}")
        self.n = n
        self.top = tuple(tops)
        self.orientation = tuple(orientation) if orientation is not None else None
        self.orientation_tag = "unoriented" if orientation is None else "given"
        self.name = name
        faces: list[set[tuple[int, ...]]] = [set() for _ in range(n + 1)]
        for s in tops:
            for k in range(n + 1):
                for sub in combinations(s.vertices, k + 1):
                    faces[k].add(sub)
        self.faces: list[tuple[Simplex, ...]] = [
            tuple(Simplex(v) for v in sorted(faces[k])) for k in range(n + 1)
        ]
        self.index: list[dict[Simplex, int]] = [
            {s: i for i, s in enumerate(level)} for level in self.faces
        ]
        self._memo: dict = {}

    # ---- basic queries ---------------------------------------------------

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.faces)

    def num_faces(self, k: int) -> int:
        if 0 <= k <= self.n:
            return len(self.faces[k])
        return 0

    def face_index(self, simplex: Simplex) -> int:
        return self.index[simplex.dimension][simplex]

    def has_face(self, vertices: Iterable[int]) -> bool:
        verts = tuple(sorted(vertices))
        k = len(verts) - 1
        return 0 <= k <= self.n and Simplex(verts) in self.index[k]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s.vertices[0] for s in self.faces[0])

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, f={self.f_vector}, name={self.name!r})"

    # ---- derived structure -------------------------------------------------

    def facet_cofaces(self) -> dict[Simplex, list[tuple[int, int]]]:
        """Map each (n-1)-face to its list of (top simplex index, deletion index)."""
        if "facet_cofaces" not in self._memo:
            out: dict[Simplex, list[tuple[int, int]]] = {}
            for t, s in enumerate(self.top):
                for i, f in s.facets():
                    out.setdefault(f, []).append((t, i))
            self._memo["facet_cofaces"] = out
        return self._memo["facet_cofaces"]

    def with_orientation(self, signs: Sequence[int], tag: str) -> "SimplicialComplex":
        """Copy sharing all lattices, with the given orientation signs."""
        clone = object.__new__(SimplicialComplex)
        clone.n = self.n
        clone.top = self.top
        clone.orientation = tuple(signs)
        clone.orientation_tag = tag
        clone.name = self.name
        clone.faces = self.faces
        clone.index = self.index
        clone._memo = self._memo  # lattices and coboundaries are orientation-free
        return clone

    def reversed_orientation(self) -> "SimplicialComplex":
        if self.orientation is None:
            raise ValueError("complex is not oriented")
        tag = "reversed" if self.orientation_tag != "reversed" else "bfs"
        return self.with_orientation([-s for s in self.orientation], tag)

    def to_document(self) -> dict:
        doc = {
            "dimension": self.n,
            "top_simplices": [list(s.vertices) for s in self.top],
        }
        if self.name:
            doc["name"] = self.name
        if self.orientation is not None:
            doc["orientation"] = list(self.orientation)
        return doc


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def parse_complex(document: str | dict) -> SimplicialComplex:
    """Build a complex from its JSON document (text or already-parsed dict).

    Schema: ``{"dimension": n, "top_simplices": [[v0..vn], ...],
    "orientation": [+-1, ...]?, "name": str?}``.  Simplices need not be
    pre-sorted; vertex indices are non-negative integers.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ComplexFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ComplexFormatError("document must be a JSON object")
    try:
        dim = document["dimension"]
        tops = document["top_simplices"]
    except KeyError as exc:
        raise ComplexFormatError(f"missing field {exc}") from exc
    if not isinstance(tops, list) or not tops:
        raise ComplexFormatError("top_simplices must be a non-empty list")
    simplices = []
    for entry in tops:
        if not isinstance(entry, list) or not all(isinstance(v, int) for v in entry):
            raise ComplexFormatError(f"bad simplex entry {entry!r}")
        try:
            simplices.append(Simplex(entry))
        except ValueError as exc:
            raise ComplexFormatError(str(exc)) from exc
    if any(s.dimension != dim for s in simplices):
        raise ComplexFormatError("simplex dimension does not match 'dimension'")
    return SimplicialComplex(
        simplices,
        orientation=document.get("orientation"),
        name=document.get("name", ""),
    )


def validate_closed(complex: SimplicialComplex) -> ClosednessReport:
    """Closed-pseudomanifold diagnostics: facet incidences and dual connectivity."""
    report = ClosednessReport(dimension=complex.n)
    cofaces = complex.facet_cofaces()
    for face in sorted(cofaces):
        count = len(cofaces[face])
        if count != 2:
            report.bad_faces.append((face, count))
    seen = {0}
    queue = [0]
    adjacency: dict[int, set[int]] = {t: set() for t in range(len(complex.top))}
    for pair in cofaces.values():
        for (a, _), (b, _) in combinations(pair, 2):
            adjacency[a].add(b)
            adjacency[b].add(a)
    while queue:
        t = queue.pop()
        for u in adjacency[t]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    report.connected = len(seen) == len(complex.top)
    return report


def orient(complex: SimplicialComplex) -> SimplicialComplex:
    """Assign coherent orientation signs by breadth-first propagation.

    The lexicographically first top simplex is seeded with +1; signs
    propagate across shared codimension-one faces so that the two induced
    orientations on every shared face are opposite.  Deterministic.

    Raises :class:`NonOrientableError` when propagation contradicts itself,
    and ``ValueError`` when the complex is not a closed connected
    pseudomanifold.
    """
    report = validate_closed(complex)
    if not report.ok:
        raise ValueError(f"not a closed connected pseudomanifold: {report.to_dict()}")
    cofaces = complex.facet_cofaces()
    signs: list[int | None] = [None] * len(complex.top)
    signs[0] = 1
    queue = [0]
    head = 0
    neighbours: dict[int, list[tuple[int, int, int]]] = {t: [] for t in range(len(complex.top))}
    for pair in cofaces.values():
        (a, ia), (b, ib) = pair
        neighbours[a].append((b, ia, ib))
        neighbours[b].append((a, ib, ia))
    for t in neighbours:
        neighbours[t].sort()
    while head < len(queue):
        t = queue[head]
        head += 1
        for u, it, iu in neighbours[t]:
            # Coherence: induced signs on the shared face must be opposite,
            # i.e. s_t * (-1)^it = - s_u * (-1)^iu.
            forced = -signs[t] * (-1 if (it + iu) % 2 else 1)
            if signs[u] is None:
                signs[u] = forced
                queue.append(u)
            elif signs[u] != forced:
                raise NonOrientableError(
                    f"orientation contradiction between top simplices {t} and {u}"
                )
    return complex.with_orientation([s for s in signs], tag="bfs")


def euler_characteristic(complex: SimplicialComplex) -> int:
    """Alternating sum of Betti numbers, cross-checked against the f-vector.

    Rank-nullity makes the two alternating sums agree for any finite complex;
    the equality is asserted rather than assumed.
    """
    from . import chains  # local import: chains depends on this module's types

    chi_f = sum((-1) ** k * f for k, f in enumerate(complex.f_vector))
    chi_b = sum((-1) ** k * chains.betti(complex, k) for k in range(complex.n + 1))
    if chi_f != chi_b:
        raise ArithmeticError(
            f"Euler characteristic mismatch: faces give {chi_f}, Betti gives {chi_b}"
        )
    return chi_b
