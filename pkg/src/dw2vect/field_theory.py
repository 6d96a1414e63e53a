"""The classical field theory: flat connections on cobordisms as groupoid spans.

A connected cobordism is described by a presentation of its fundamental
group (free generators and relations) together with one word per boundary
circle giving that circle's holonomy.  Its groupoid of flat connections is G
acting by simultaneous conjugation on the tuples satisfying the relations;
the legs evaluate the boundary words and carry the gauge transformation
along.  Each boundary circle contributes a factor ``G // G`` to a foot.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import character_table
from .cocycles import (
    DecoratedGroupoid,
    DecoratedSpan,
    DecoratedSpanOfSpans,
    GroupCocycle3,
    as_cochain,
    product_decorated,
    transgress_to_loop_groupoid,
    undecorated,
)
from .errors import GroupError, GroupoidError
from .groupoids import (
    ActionGroupoid,
    FiniteGroupoid,
    GroupoidFunctor,
    GroupoidSpan,
    adjoint_groupoid,
    conjugation_groupoid,
    product_groupoid,
    product_span,
    terminal_groupoid,
)
from .groups import DEFAULT_ENUMERATION_CAP, FiniteGroup, commutator_word, evaluate_word, solve_relations
from .linearization import ClosedAmplitudeMatrix, closed_2morphism

Word = list  # list of (generator, exponent) pairs


def _check_word(word, ngens: int, what: str) -> list[tuple[int, int]]:
    out = []
    for item in word:
        gen, exp = int(item[0]), int(item[1])
        if not 0 <= gen < ngens or exp not in (1, -1):
            raise GroupError(f"{what}: invalid letter {tuple(item)} for {ngens} generators")
        out.append((gen, exp))
    return out


@dataclass
class CobordismPresentation:
    """Fundamental-group presentation of a connected surface with boundary words."""

    name: str
    generators: int
    relations: list = field(default_factory=list)
    in_boundary: list = field(default_factory=list)
    out_boundary: list = field(default_factory=list)

    def __post_init__(self):
        if self.generators < 0:
            raise GroupError("generator count must be non-negative")
        n = self.generators
        self.relations = [_check_word(w, n, "relation") for w in self.relations]
        self.in_boundary = [_check_word(w, n, "in-boundary word") for w in self.in_boundary]
        self.out_boundary = [_check_word(w, n, "out-boundary word") for w in self.out_boundary]

    @classmethod
    def from_json(cls, doc: dict, name: str = "file") -> "CobordismPresentation":
        try:
            return cls(doc.get("name", name), int(doc["generators"]), doc.get("relations", []),
                       doc.get("in", []), doc.get("out", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupError(f"malformed presentation document: {exc}") from None

    def to_json(self) -> str:
        return json.dumps({"name": self.name, "generators": self.generators, "relations": self.relations,
                           "in": self.in_boundary, "out": self.out_boundary})


@dataclass(frozen=True)
class ClosedSurface:
    genus: int

    def presentation(self) -> CobordismPresentation:
        return surface_presentation(self.genus, 0)


def surface_presentation(g: int, b: int) -> CobordismPresentation:
    """Genus ``g`` with ``b`` boundary circles, as a cobordism from b-1 circles to one.

    Generators ``a_1, b_1, ..., a_g, b_g, c_1, ..., c_{b-1}``; the in-circles
    are the ``c_i`` and the out-circle is ``prod [a_i, b_i] c_1 ... c_{b-1}``.
    With ``b = 0`` that product is imposed as a relation instead.
    """
    if g < 0 or b < 0:
        raise GroupError("genus and boundary count must be non-negative")
    comm = [x for i in range(g) for x in commutator_word(2 * i, 2 * i + 1)]
    if b == 0:
        return CobordismPresentation(f"closed:{g}", 2 * g, [comm] if g else [], [], [])
    cs = [(2 * g + j, 1) for j in range(b - 1)]
    return CobordismPresentation(f"surface:{g}:{b}", 2 * g + b - 1, [], [[c] for c in cs], [comm + cs])


_FIXED = {
    "circle": lambda: CobordismPresentation("circle", 1),
    "disk": lambda: CobordismPresentation("disk", 0, [], [], [[]]),
    "annulus": lambda: CobordismPresentation("annulus", 1, [], [[(0, 1)]], [[(0, 1)]]),
    "pants": lambda: CobordismPresentation("pants", 2, [], [[(0, 1)], [(1, 1)]], [[(0, 1), (1, 1)]]),
    "pants_rev": lambda: CobordismPresentation("pants_rev", 2, [], [[(0, 1), (1, 1)]], [[(0, 1)], [(1, 1)]]),
    "twice_punctured_torus": lambda: CobordismPresentation(
        "twice_punctured_torus", 3, [], [[(1, -1), (0, 1)]], [[(1, -1), (2, 1), (0, 1), (2, -1)]]
    ),
}


def builtin_presentations() -> dict[str, CobordismPresentation]:
    """The fixed catalog plus small instances of the parametrised families."""
    out = {k: f() for k, f in _FIXED.items()}
    for g in range(3):
        out[f"closed:{g}"] = surface_presentation(g, 0)
    out["surface:1:2"] = surface_presentation(1, 2)
    return out


def builtin_presentation(selector: str) -> CobordismPresentation:
    if selector in _FIXED:
        return _FIXED[selector]()
    m = re.fullmatch(r"closed:(\d+)", selector)
    if m:
        return surface_presentation(int(m.group(1)), 0)
    m = re.fullmatch(r"surface:(\d+):(\d+)", selector)
    if m:
        return surface_presentation(int(m.group(1)), int(m.group(2)))
    raise GroupError(
        f"unknown presentation {selector!r}; expected one of {sorted(_FIXED)} or closed:<g> or surface:<g>:<b>"
    )


# groupoids of connections ----------------------------------------------------------

_CIRCLES: dict = {}


def circle_groupoid(G: FiniteGroup) -> ActionGroupoid:
    """``G // G``, shared per group so that feet of different spans coincide."""
    key = G.table.tobytes()
    if key not in _CIRCLES:
        _CIRCLES[key] = adjoint_groupoid(G)
    return _CIRCLES[key]


def boundary_groupoid(G: FiniteGroup, circles: int) -> FiniteGroupoid:
    return product_groupoid(*([circle_groupoid(G)] * circles))


def connection_groupoid(P: CobordismPresentation, G: FiniteGroup, cap: int = DEFAULT_ENUMERATION_CAP) -> ActionGroupoid:
    sols = solve_relations(G, P.generators, P.relations, cap=cap)
    return conjugation_groupoid(G, sols, name=f"fc({P.name})")


def _boundary_leg(X: ActionGroupoid, G: FiniteGroup, words: list) -> GroupoidFunctor:
    foot = boundary_groupoid(G, len(words))
    if not words:
        return GroupoidFunctor(X, foot, np.zeros(X.n_objects), np.zeros(X.n_morphisms))
    n = G.order
    gauge = np.arange(X.n_morphisms) // X.n_objects
    hol = [evaluate_word(G, w, X.carrier) for w in words]
    circle_mor = [gauge * n + h[X.src] for h in hol]
    if len(words) == 1:
        return GroupoidFunctor(X, foot, hol[0], circle_mor[0])
    return GroupoidFunctor(X, foot, foot.join_objects(hol), foot.join_morphisms(circle_mor))


def fc(P: CobordismPresentation, G: FiniteGroup, cap: int = DEFAULT_ENUMERATION_CAP) -> GroupoidSpan:
    """The span ``(G//G)^in <- fc(P) -> (G//G)^out``."""
    X = connection_groupoid(P, G, cap)
    return GroupoidSpan(X, _boundary_leg(X, G, P.in_boundary), _boundary_leg(X, G, P.out_boundary), P.name)


def fc_disjoint(pieces: list, G: FiniteGroup, cap: int = DEFAULT_ENUMERATION_CAP) -> GroupoidSpan:
    """Disjoint union of connected pieces: the product of their spans."""
    if len(pieces) == 1:
        return fc(pieces[0], G, cap)
    return product_span(*(fc(P, G, cap) for P in pieces))


# closed surfaces and 3-cobordisms ---------------------------------------------------

@dataclass
class SurfaceSpace:
    genus: int
    hom_count: int
    class_labels: list[str]
    aut_orders: list[int]

    @property
    def dimension(self) -> int:
        return len(self.class_labels)


def dw_vector_space(genus: int, G: FiniteGroup, cap: int = DEFAULT_ENUMERATION_CAP) -> SurfaceSpace:
    X = connection_groupoid(surface_presentation(genus, 0), G, cap)
    sk = X.skeleton
    return SurfaceSpace(genus, X.n_objects, sk.labels, sk.aut_orders)


def mednykh_hom_count(G: FiniteGroup, genus: int) -> Fraction:
    """``|G|^(2g-1) * sum over irreps of dim^(2-2g)``, in exact arithmetic."""
    dims = character_table(G).dims
    return Fraction(G.order) ** (2 * genus - 1) * sum(Fraction(d) ** (2 - 2 * genus) for d in dims)


@dataclass
class ThreeCobordism:
    """A 3-cobordism between closed surfaces, given by a presentation of its
    fundamental group and, for each boundary surface, the images of the
    surface generators as words in the 3-manifold generators.

    A genus of ``None`` stands for the empty surface.
    """

    name: str
    generators: int
    relations: list
    source_genus: int | None
    target_genus: int | None
    source_images: list = field(default_factory=list)
    target_images: list = field(default_factory=list)

    def __post_init__(self):
        n = self.generators
        self.relations = [_check_word(w, n, "relation") for w in self.relations]
        for genus, images, side in ((self.source_genus, self.source_images, "source"),
                                    (self.target_genus, self.target_images, "target")):
            want = 0 if genus is None else 2 * genus
            if len(images) != want:
                raise GroupError(f"{side} surface needs {want} generator images, got {len(images)}")
        self.source_images = [_check_word(w, n, "source image") for w in self.source_images]
        self.target_images = [_check_word(w, n, "target image") for w in self.target_images]

    @classmethod
    def from_json(cls, doc: dict, name: str = "file") -> "ThreeCobordism":
        try:
            return cls(doc.get("name", name), int(doc["generators"]), doc.get("relations", []),
                       doc.get("source_genus"), doc.get("target_genus"),
                       doc.get("source_images", []), doc.get("target_images", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupError(f"malformed 3-cobordism document: {exc}") from None


def _identity_words(g: int) -> list:
    return [[(i, 1)] for i in range(2 * g)]


def builtin_three_cobordism(selector: str) -> ThreeCobordism:
    """``cylinder:<g>`` (surface times interval), ``handlebody:<g>`` (empty to
    surface), ``twist`` (torus mapping cylinder of a Dehn twist) and
    ``surface:<g>`` (the closed surface as a map from empty to empty)."""
    m = re.fullmatch(r"(cylinder|handlebody|surface):(\d+)", selector)
    if m:
        kind, g = m.group(1), int(m.group(2))
        rel = [surface_presentation(g, 0).relations[0]] if g else []
        if kind == "cylinder":
            return ThreeCobordism(selector, 2 * g, rel, g, g, _identity_words(g), _identity_words(g))
        if kind == "surface":
            return ThreeCobordism(selector, 2 * g, rel, None, None)
        images = [w for i in range(g) for w in ([(i, 1)], [])]
        return ThreeCobordism(selector, g, [], None, g, [], images)
    if selector == "twist":
        rel = [commutator_word(0, 1)]
        return ThreeCobordism("twist", 2, rel, 1, 1, _identity_words(1), [[(0, 1)], [(0, 1), (1, 1)]])
    raise GroupError(f"unknown 3-cobordism {selector!r}; expected cylinder:<g>, handlebody:<g>, surface:<g> or twist")


def _surface_map(Y: ActionGroupoid, G: FiniteGroup, genus: int | None, images: list, cap: int) -> GroupoidFunctor:
    if genus is None:
        T = terminal_groupoid()
        return GroupoidFunctor(Y, T, np.zeros(Y.n_objects), np.zeros(Y.n_morphisms))
    S = surface_groupoid(G, genus, cap)
    if images:
        tuples = np.stack([evaluate_word(G, w, Y.carrier) for w in images], axis=1)
    else:
        tuples = np.zeros((Y.n_objects, 0), dtype=np.int64)
    weights = G.order ** np.arange(tuples.shape[1] - 1, -1, -1, dtype=np.int64)
    codes = tuples @ weights
    scodes = S.carrier @ weights
    obj = np.minimum(np.searchsorted(scodes, codes), S.n_objects - 1)
    if not np.array_equal(scodes[obj], codes):
        raise GroupoidError("boundary images do not satisfy the surface relation")
    gauge = np.arange(Y.n_morphisms) // Y.n_objects
    F = GroupoidFunctor(Y, S, obj, gauge * S.n_objects + obj[Y.src])
    F.validate()
    return F


_SURFACES: dict = {}


def surface_groupoid(G: FiniteGroup, genus: int, cap: int = DEFAULT_ENUMERATION_CAP) -> ActionGroupoid:
    """fc of the closed genus-g surface, shared per (group, genus)."""
    key = (G.table.tobytes(), genus)
    if key not in _SURFACES:
        _SURFACES[key] = connection_groupoid(surface_presentation(genus, 0), G, cap)
    return _SURFACES[key]


def fc_three(M: ThreeCobordism, G: FiniteGroup, cap: int = DEFAULT_ENUMERATION_CAP) -> GroupoidSpan:
    """``fc(source surface) <- fc(M) -> fc(target surface)``."""
    Y = conjugation_groupoid(G, solve_relations(G, M.generators, M.relations, cap=cap), name=f"fc({M.name})")
    left = _surface_map(Y, G, M.source_genus, M.source_images, cap)
    right = _surface_map(Y, G, M.target_genus, M.target_images, cap)
    return GroupoidSpan(Y, left, right, M.name)


def dw_closed_invariant(M: ThreeCobordism, G: FiniteGroup, beta=None,
                        cap: int = DEFAULT_ENUMERATION_CAP) -> ClosedAmplitudeMatrix:
    return closed_2morphism(fc_three(M, G, cap), beta)


# decorations ---------------------------------------------------------------------

def decorated_circles(G: FiniteGroup, omega: GroupCocycle3, circles: int) -> DecoratedGroupoid:
    if circles == 0:
        return undecorated(terminal_groupoid())
    X = circle_groupoid(G)
    one = DecoratedGroupoid(X, transgress_to_loop_groupoid(omega, X))
    return product_decorated(*([one] * circles))


def decorate(P: CobordismPresentation, G: FiniteGroup, omega: GroupCocycle3, alpha=None,
             cap: int = DEFAULT_ENUMERATION_CAP, strict: bool = False) -> DecoratedSpan:
    """fc(P) with transgressed circle cocycles on the feet and a validated apex 1-cochain."""
    if omega.group.table.tobytes() != G.table.tobytes():
        raise GroupError("3-cocycle lives on a different group")
    S = fc(P, G, cap)
    D = DecoratedSpan(S, decorated_circles(G, omega, len(P.in_boundary)),
                      decorated_circles(G, omega, len(P.out_boundary)), as_cochain(S.apex, alpha, 1))
    D.validate(strict)
    return D


def decorate_three(M: ThreeCobordism, G: FiniteGroup, alpha_source=None, alpha_target=None, beta=None,
                   cap: int = DEFAULT_ENUMERATION_CAP) -> DecoratedSpanOfSpans:
    """A closed 3-cobordism as a 2-morphism between the surfaces viewed as
    spans from empty to empty, with user-supplied surface 1-cochains and an
    apex 0-cochain, validated."""
    span = fc_three(M, G, cap)
    T = undecorated(terminal_groupoid())

    def closed(X, alpha, genus):
        leg = GroupoidFunctor(X, T.groupoid, np.zeros(X.n_objects), np.zeros(X.n_morphisms))
        return DecoratedSpan(GroupoidSpan(X, leg, leg, f"surface:{genus}"), T, T, as_cochain(X, alpha, 1))

    src = closed(span.source, alpha_source, M.source_genus)
    tgt = closed(span.target, alpha_target, M.target_genus)
    Y = DecoratedSpanOfSpans(span.apex, span.left, span.right, src, tgt, as_cochain(span.apex, beta, 0))
    Y.validate()
    return Y


__all__ = [
    "CobordismPresentation", "ClosedSurface", "SurfaceSpace", "ThreeCobordism", "surface_presentation",
    "builtin_presentations", "builtin_presentation", "builtin_three_cobordism", "circle_groupoid",
    "boundary_groupoid", "connection_groupoid", "surface_groupoid", "fc", "fc_disjoint", "fc_three",
    "dw_vector_space", "mednykh_hom_count", "dw_closed_invariant", "decorated_circles", "decorate",
    "decorate_three",
]
