"""Small standard structures used across tests, fixtures, and the docs.

Everything here is built through the validators, so importing this module
exercises the axiom checks on known-good tables.
"""

from __future__ import annotations

from .semigroupoids import (
    FiniteInverseSemigroupoid,
    FiniteSemigroupoid,
    validate_inverse_semigroupoid,
    validate_semigroupoid,
)
from .validation import must


def _build(raw: dict, inv: dict | None = None) -> FiniteInverseSemigroupoid:
    sgpd = must(validate_semigroupoid(raw))
    return must(validate_inverse_semigroupoid(sgpd, inv or {}))


def trivial_monoid() -> FiniteInverseSemigroupoid:
    """One vertex, one idempotent arrow."""
    raw = {
        "id": "trivial",
        "vertices": ["*"],
        "arrows": [{"id": "a", "src": "*", "rng": "*"}],
        "prod": [["a", "a", "a"]],
    }
    return _build(raw, {"a": "a"})


def cyclic2() -> FiniteInverseSemigroupoid:
    """The two-element group as a one-vertex groupoid."""
    raw = {
        "id": "Z2",
        "vertices": ["*"],
        "arrows": [
            {"id": "u", "src": "*", "rng": "*"},
            {"id": "g", "src": "*", "rng": "*"},
        ],
        "prod": [
            ["u", "u", "u"], ["u", "g", "g"],
            ["g", "u", "g"], ["g", "g", "u"],
        ],
    }
    return _build(raw, {"u": "u", "g": "g"})


def klein_four() -> FiniteInverseSemigroupoid:
    raw = {
        "id": "V4",
        "vertices": ["*"],
        "arrows": [{"id": x, "src": "*", "rng": "*"} for x in "eabc"],
        "prod": [
            ["e", "e", "e"], ["e", "a", "a"], ["e", "b", "b"], ["e", "c", "c"],
            ["a", "e", "a"], ["a", "a", "e"], ["a", "b", "c"], ["a", "c", "b"],
            ["b", "e", "b"], ["b", "a", "c"], ["b", "b", "e"], ["b", "c", "a"],
            ["c", "e", "c"], ["c", "a", "b"], ["c", "b", "a"], ["c", "c", "e"],
        ],
    }
    return _build(raw, {x: x for x in "eabc"})


def semilattice2() -> FiniteInverseSemigroupoid:
    """The meet-semilattice {1, e} with e*e = e on a single vertex; e <= 1."""
    raw = {
        "id": "E2",
        "vertices": ["*"],
        "arrows": [
            {"id": "1", "src": "*", "rng": "*"},
            {"id": "e", "src": "*", "rng": "*"},
        ],
        "prod": [
            ["1", "1", "1"], ["1", "e", "e"],
            ["e", "1", "e"], ["e", "e", "e"],
        ],
    }
    return _build(raw, {"1": "1", "e": "e"})


def pair_groupoid(points=("1", "2")) -> FiniteInverseSemigroupoid:
    """Arrows (i,j) with source j and range i; (i,j)(j,k) = (i,k)."""
    points = tuple(str(p) for p in points)
    arrows = [(i, j) for i in points for j in points]

    def name(i, j):
        return f"({i},{j})"

    raw = {
        "id": f"P{len(points)}",
        "vertices": list(points),
        "arrows": [{"id": name(i, j), "src": j, "rng": i} for i, j in arrows],
        "prod": [
            [name(i, j), name(j, k), name(i, k)]
            for i in points for j in points for k in points
        ],
    }
    return _build(raw, {name(i, j): name(j, i) for i, j in arrows})


def unit_groupoid(labels=("x", "y")) -> FiniteInverseSemigroupoid:
    """One identity loop per point; the discrete groupoid on the label set."""
    labels = tuple(str(x) for x in labels)
    raw = {
        "id": f"unit({','.join(labels)})",
        "vertices": list(labels),
        "arrows": [{"id": f"1{x}", "src": x, "rng": x} for x in labels],
        "prod": [[f"1{x}", f"1{x}", f"1{x}"] for x in labels],
    }
    return _build(raw, {f"1{x}": f"1{x}" for x in labels})


def parallel_arrows() -> FiniteSemigroupoid:
    """Two parallel arrows between distinct vertices; no composable pairs."""
    raw = {
        "id": "parallel",
        "vertices": ["v", "w"],
        "arrows": [
            {"id": "a", "src": "v", "rng": "w"},
            {"id": "b", "src": "v", "rng": "w"},
        ],
        "prod": [],
    }
    return must(validate_semigroupoid(raw))
