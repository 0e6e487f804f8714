"""Finite semigroupoids, inverse semigroupoids, and their homomorphisms.

A semigroupoid is a directed graph with an associative partial product defined
exactly on composable arrow pairs (source of the left factor equals range of
the right factor). Arrows and vertices are dense integer ids; names live in
sidecar tables and appear in every witness.

All validators enumerate exhaustively and report the lexicographically
smallest failing tuple per violated axiom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .validation import (
    InternalConsistencyError,
    ValidationReport,
    must,
)

UNDEF = -1


@dataclass
class FiniteSemigroupoid:
    vertex_names: tuple[str, ...]
    arrow_names: tuple[str, ...]
    src: tuple[int, ...]
    rng: tuple[int, ...]
    prod: tuple[tuple[int, ...], ...]
    name: str = ""
    composable: tuple[tuple[int, int], ...] = field(
        default=(), compare=False, repr=False
    )

    def __post_init__(self):
        pairs = []
        for a in range(len(self.arrow_names)):
            for b in range(len(self.arrow_names)):
                if self.src[a] == self.rng[b]:
                    pairs.append((a, b))
        object.__setattr__(self, "composable", tuple(pairs))

    @property
    def n_arrows(self) -> int:
        return len(self.arrow_names)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    def arrows(self) -> range:
        return range(self.n_arrows)

    def is_composable(self, a: int, b: int) -> bool:
        return self.src[a] == self.rng[b]

    def compose(self, a: int, b: int) -> int | None:
        c = self.prod[a][b]
        return None if c == UNDEF else c

    def composable_triples(self) -> Iterator[tuple[int, int, int]]:
        for a, b in self.composable:
            for c in range(self.n_arrows):
                if self.src[b] == self.rng[c]:
                    yield a, b, c

    def arrow_index(self, name: str) -> int:
        return self.arrow_names.index(name)

    def vertex_index(self, name: str) -> int:
        return self.vertex_names.index(name)

    def describe_arrow(self, a: int) -> str:
        return self.arrow_names[a]


def semigroupoid_to_raw(sgpd: FiniteSemigroupoid, inv: "FiniteInverseSemigroupoid | None" = None) -> dict:
    """Serialize into the structure-file stanza; parses back to an equal object."""
    base = inv.base if inv is not None else sgpd
    raw = {
        "id": base.name,
        "vertices": list(base.vertex_names),
        "arrows": [
            {"id": base.arrow_names[a],
             "src": base.vertex_names[base.src[a]],
             "rng": base.vertex_names[base.rng[a]]}
            for a in base.arrows()
        ],
        "prod": [
            [base.arrow_names[a], base.arrow_names[b], base.arrow_names[base.prod[a][b]]]
            for a in base.arrows() for b in base.arrows()
            if base.prod[a][b] != UNDEF
        ],
    }
    if inv is not None:
        raw["inv"] = {
            base.arrow_names[s]: base.arrow_names[inv.inv[s]] for s in base.arrows()
        }
    return raw


def validate_semigroupoid(raw) -> FiniteSemigroupoid | ValidationReport:
    """Build a semigroupoid from raw tables, checking every axiom by enumeration.

    Accepts the structure-file stanza (dict) or an already built object to
    re-validate. Structural problems (unknown ids, conflicting entries) are
    reported with kind "structural", distinct from axiom failures.
    """
    if isinstance(raw, FiniteSemigroupoid):
        report = ValidationReport(f"semigroupoid {raw.name or '<anonymous>'}")
        _check_axioms(raw, report)
        return raw if report.ok else report

    name = str(raw.get("id", ""))
    report = ValidationReport(f"semigroupoid {name or '<anonymous>'}")
    vertices = [str(v) for v in raw.get("vertices", [])]
    if len(set(vertices)) != len(vertices):
        report.add("structural", (), "duplicate vertex ids")
        return report
    vindex = {v: i for i, v in enumerate(vertices)}

    arrow_names: list[str] = []
    src: list[int] = []
    rng: list[int] = []
    for entry in raw.get("arrows", []):
        aid = str(entry.get("id"))
        if aid in arrow_names:
            report.add("structural", (aid,), f"duplicate arrow id {aid!r}")
            return report
        s, r = str(entry.get("src")), str(entry.get("rng"))
        if s not in vindex or r not in vindex:
            report.add("structural", (aid,), f"arrow {aid!r} references an unknown vertex")
            return report
        arrow_names.append(aid)
        src.append(vindex[s])
        rng.append(vindex[r])
    aindex = {a: i for i, a in enumerate(arrow_names)}

    n = len(arrow_names)
    prod = [[UNDEF] * n for _ in range(n)]
    for entry in raw.get("prod", []):
        if len(entry) != 3:
            report.add("structural", tuple(map(str, entry)), "prod entries must be [a, b, ab]")
            return report
        a, b, c = (str(x) for x in entry)
        if a not in aindex or b not in aindex or c not in aindex:
            report.add("structural", (a, b, c), "prod entry references an unknown arrow")
            return report
        ia, ib, ic = aindex[a], aindex[b], aindex[c]
        if prod[ia][ib] not in (UNDEF, ic):
            report.add("structural", (a, b), f"conflicting products declared for ({a},{b})")
            return report
        prod[ia][ib] = ic

    sgpd = FiniteSemigroupoid(
        tuple(vertices), tuple(arrow_names), tuple(src), tuple(rng),
        tuple(tuple(row) for row in prod), name=name,
    )
    _check_axioms(sgpd, report)
    return sgpd if report.ok else report


def _check_axioms(sgpd: FiniteSemigroupoid, report: ValidationReport) -> None:
    names = sgpd.arrow_names
    seen: set[str] = set()

    def fail(kind, witness, message):
        if kind not in seen:
            seen.add(kind)
            report.add(kind, witness, message)

    for a in sgpd.arrows():
        for b in sgpd.arrows():
            c = sgpd.prod[a][b]
            if sgpd.is_composable(a, b):
                if c == UNDEF:
                    fail("undefined-product", (names[a], names[b]),
                         f"({names[a]},{names[b]}) is composable but has no product")
                else:
                    if sgpd.src[c] != sgpd.src[b]:
                        fail("source-compatibility", (names[a], names[b]),
                             f"src({names[a]}{names[b]}) != src({names[b]})")
                    if sgpd.rng[c] != sgpd.rng[a]:
                        fail("range-compatibility", (names[a], names[b]),
                             f"rng({names[a]}{names[b]}) != rng({names[a]})")
            elif c != UNDEF:
                fail("product-on-noncomposable", (names[a], names[b]),
                     f"product declared on non-composable pair ({names[a]},{names[b]})")

    if seen:
        return
    for a, b, c in sgpd.composable_triples():
        left = sgpd.prod[sgpd.prod[a][b]][c]
        right = sgpd.prod[a][sgpd.prod[b][c]]
        if left != right:
            fail("associativity", (names[a], names[b], names[c]),
                 f"({names[a]}{names[b]}){names[c]} != {names[a]}({names[b]}{names[c]})")
            return


@dataclass
class FiniteInverseSemigroupoid:
    """Semigroupoid where every arrow has a unique generalized inverse.

    Carries the idempotent set and the natural order s <= t (s = te for an
    idempotent e), which validate_inverse_semigroupoid computes by all four
    equivalent characterizations and cross-checks.
    """

    base: FiniteSemigroupoid
    inv: tuple[int, ...]
    idempotents: tuple[int, ...] = ()
    leq: frozenset = frozenset()

    def inverse(self, s: int) -> int:
        return self.inv[s]

    def le(self, s: int, t: int) -> bool:
        return (s, t) in self.leq

    def below(self, s: int) -> list[int]:
        return [u for u in self.base.arrows() if (u, s) in self.leq]


def _idempotents(sgpd: FiniteSemigroupoid) -> list[int]:
    return [
        e for e in sgpd.arrows()
        if sgpd.src[e] == sgpd.rng[e] and sgpd.prod[e][e] == e
    ]


def _order_by_characterizations(sgpd, inv, idems):
    """The relation s <= t computed four ways; returns the list of relations."""
    n = sgpd.n_arrows
    rel_i, rel_ii, rel_iii, rel_iv = set(), set(), set(), set()
    for s in range(n):
        for t in range(n):
            ss = sgpd.compose(inv[s], s)          # s*s, endo at src(s)
            if ss is not None and sgpd.is_composable(t, ss) and sgpd.prod[t][ss] == s:
                rel_i.add((s, t))
            for e in idems:
                if sgpd.is_composable(t, e) and sgpd.prod[t][e] == s:
                    rel_ii.add((s, t))
                    break
            rr = sgpd.compose(s, inv[s])          # ss*, endo at rng(s)
            if rr is not None and sgpd.is_composable(rr, t) and sgpd.prod[rr][t] == s:
                rel_iii.add((s, t))
            for f in idems:
                if sgpd.is_composable(f, t) and sgpd.prod[f][t] == s:
                    rel_iv.add((s, t))
                    break
    return [rel_i, rel_ii, rel_iii, rel_iv]


def validate_inverse_semigroupoid(sgpd: FiniteSemigroupoid, inv_raw) -> FiniteInverseSemigroupoid | ValidationReport:
    """Check the inverse axioms and materialize idempotents and the natural order.

    inv_raw maps arrow name -> arrow name (or id -> id on a built object).
    The four order characterizations are compared; disagreement raises
    InternalConsistencyError since they provably coincide once the inverse
    axioms passed.
    """
    report = ValidationReport(f"inverse semigroupoid {sgpd.name or '<anonymous>'}")
    names = sgpd.arrow_names
    n = sgpd.n_arrows

    inv = [UNDEF] * n
    if isinstance(inv_raw, dict):
        for key, val in inv_raw.items():
            k, v = str(key), str(val)
            if k not in names or v not in names:
                report.add("structural", (k, v), "inv entry references an unknown arrow")
                return report
            inv[names.index(k)] = names.index(v)
    else:
        inv = list(inv_raw)
    if any(x == UNDEF for x in inv):
        missing = names[inv.index(UNDEF)]
        report.add("structural", (missing,), f"no inverse declared for {missing!r}")
        return report

    def is_inverse_pair(s: int, t: int) -> bool:
        if sgpd.src[t] != sgpd.rng[s] or sgpd.rng[t] != sgpd.src[s]:
            return False
        st = sgpd.compose(s, t)
        ts = sgpd.compose(t, s)
        if st is None or ts is None:
            return False
        return (
            sgpd.compose(st, s) == s and sgpd.compose(ts, t) == t
        )

    for s in range(n):
        if not is_inverse_pair(s, inv[s]):
            report.add("inverse-condition", (names[s],),
                       f"declared inverse of {names[s]} fails s s* s = s or s* s s* = s*")
    if not report.ok:
        return report

    for s in range(n):
        others = [t for t in range(n) if t != inv[s] and is_inverse_pair(s, t)]
        if others:
            report.add("non-unique-inverse", (names[s], names[inv[s]], names[others[0]]),
                       f"{names[s]} admits two generalized inverses")
    if not report.ok:
        return report

    for s in range(n):
        if inv[inv[s]] != s:
            report.add("involution", (names[s],), "(s*)* != s")
    for a, b in sgpd.composable:
        ab = sgpd.prod[a][b]
        anti = sgpd.compose(inv[b], inv[a])
        if anti != inv[ab]:
            report.add("antihomomorphism", (names[a], names[b]), "(st)* != t* s*")
            break

    idems = _idempotents(sgpd)
    for e in idems:
        for f in idems:
            ef = sgpd.compose(e, f)
            fe = sgpd.compose(f, e)
            if (ef is None) != (fe is None) or (ef is not None and ef != fe):
                report.add("idempotents-commute", (names[e], names[f]),
                           f"idempotents {names[e]}, {names[f]} do not commute")
                break
    if not report.ok:
        return report

    relations = _order_by_characterizations(sgpd, inv, idems)
    if any(rel != relations[0] for rel in relations[1:]):
        labels = ["ts*s", "te", "ss*t", "ft"]
        diffs = [
            labels[i]
            for i in range(1, 4)
            if relations[i] != relations[0]
        ]
        raise InternalConsistencyError(
            "natural-order characterizations disagree "
            f"({labels[0]} vs {', '.join(diffs)}); this is a bug in the validator"
        )

    return FiniteInverseSemigroupoid(
        base=sgpd,
        inv=tuple(inv),
        idempotents=tuple(idems),
        leq=frozenset(relations[0]),
    )


@dataclass
class Homomorphism:
    source: FiniteSemigroupoid
    target: FiniteSemigroupoid
    map: tuple[int, ...]
    rigid: bool = False

    def __call__(self, a: int) -> int:
        return self.map[a]


def validate_homomorphism(raw_map, source: FiniteSemigroupoid, target: FiniteSemigroupoid) -> Homomorphism | ValidationReport:
    """Check multiplicativity on all composable pairs and decide rigidity.

    Rigidity is the set equality: a pair maps to a composable pair exactly
    when it is composable. Both inclusions are enumerated.
    """
    report = ValidationReport("homomorphism")
    n = source.n_arrows
    mapping = [UNDEF] * n
    if isinstance(raw_map, dict):
        for key, val in raw_map.items():
            k, v = str(key), str(val)
            if k not in source.arrow_names or v not in target.arrow_names:
                report.add("structural", (k, v), "map entry references an unknown arrow")
                return report
            mapping[source.arrow_index(k)] = target.arrow_index(v)
    else:
        mapping = list(raw_map)
    if any(x == UNDEF for x in mapping):
        missing = source.arrow_names[mapping.index(UNDEF)]
        report.add("structural", (missing,), f"map does not cover arrow {missing!r}")
        return report

    for a, b in source.composable:
        fa, fb = mapping[a], mapping[b]
        if not target.is_composable(fa, fb):
            report.add("multiplicativity",
                       (source.arrow_names[a], source.arrow_names[b]),
                       "image of a composable pair is not composable")
            break
        if target.prod[fa][fb] != mapping[source.prod[a][b]]:
            report.add("multiplicativity",
                       (source.arrow_names[a], source.arrow_names[b]),
                       "f(ab) != f(a)f(b)")
            break
    if not report.ok:
        return report

    rigid = True
    for a in range(n):
        for b in range(n):
            if target.is_composable(mapping[a], mapping[b]) and not source.is_composable(a, b):
                rigid = False
                break
        if not rigid:
            break
    return Homomorphism(source, target, tuple(mapping), rigid)


def identity_homomorphism(sgpd: FiniteSemigroupoid) -> Homomorphism:
    return Homomorphism(sgpd, sgpd, tuple(range(sgpd.n_arrows)), rigid=True)


def direct_product(a: FiniteSemigroupoid, b: FiniteSemigroupoid) -> FiniteSemigroupoid:
    """Componentwise product; arrow (x,y) at index x*|b| + y."""
    vertices = tuple(
        f"({va},{vb})" for va in a.vertex_names for vb in b.vertex_names
    )
    arrows = tuple(
        f"({xa},{xb})" for xa in a.arrow_names for xb in b.arrow_names
    )
    nb, nvb = b.n_arrows, b.n_vertices
    src = []
    rng = []
    for x in a.arrows():
        for y in b.arrows():
            src.append(a.src[x] * nvb + b.src[y])
            rng.append(a.rng[x] * nvb + b.rng[y])
    n = len(arrows)
    prod = [[UNDEF] * n for _ in range(n)]
    for x1 in a.arrows():
        for y1 in b.arrows():
            i = x1 * nb + y1
            for x2 in a.arrows():
                if a.prod[x1][x2] == UNDEF:
                    continue
                for y2 in b.arrows():
                    if b.prod[y1][y2] == UNDEF:
                        continue
                    j = x2 * nb + y2
                    prod[i][j] = a.prod[x1][x2] * nb + b.prod[y1][y2]
    out = FiniteSemigroupoid(
        vertices, arrows, tuple(src), tuple(rng),
        tuple(tuple(row) for row in prod),
        name=f"{a.name}x{b.name}" if a.name and b.name else "",
    )
    return must(validate_semigroupoid(out))


@dataclass
class GroupoidCheck:
    ok: bool
    units: dict[int, int]
    inverses: dict[int, int]
    witness: tuple = ()
    message: str = ""


def is_groupoid(sgpd: FiniteSemigroupoid) -> GroupoidCheck:
    """Decide whether every vertex has an identity and every arrow an inverse."""
    units: dict[int, int] = {}
    for v in range(sgpd.n_vertices):
        for e in sgpd.arrows():
            if sgpd.src[e] != v or sgpd.rng[e] != v:
                continue
            left_ok = all(
                sgpd.prod[a][e] == a
                for a in sgpd.arrows() if sgpd.src[a] == v
            )
            right_ok = all(
                sgpd.prod[e][b] == b
                for b in sgpd.arrows() if sgpd.rng[b] == v
            )
            if left_ok and right_ok:
                units[v] = e
                break
        if v not in units:
            return GroupoidCheck(
                False, {}, {}, (sgpd.vertex_names[v],),
                f"vertex {sgpd.vertex_names[v]} has no identity arrow",
            )
    inverses: dict[int, int] = {}
    for a in sgpd.arrows():
        for x in sgpd.arrows():
            if (
                sgpd.compose(a, x) == units[sgpd.rng[a]]
                and sgpd.compose(x, a) == units[sgpd.src[a]]
            ):
                inverses[a] = x
                break
        if a not in inverses:
            return GroupoidCheck(
                False, units, {}, (sgpd.arrow_names[a],),
                f"arrow {sgpd.arrow_names[a]} has no two-sided inverse",
            )
    return GroupoidCheck(True, units, inverses)


def find_isomorphism(a: FiniteSemigroupoid, b: FiniteSemigroupoid) -> dict[int, int] | None:
    """Search for an arrow bijection realizing an isomorphism (desk scale only).

    Backtracks over arrow assignments with a consistent vertex bijection and
    product preservation, pruning by src/rng profiles.
    """
    if a.n_arrows != b.n_arrows or a.n_vertices != b.n_vertices:
        return None

    def profile(s: FiniteSemigroupoid, x: int):
        out_deg = sum(1 for y in s.arrows() if s.src[y] == s.src[x])
        in_deg = sum(1 for y in s.arrows() if s.rng[y] == s.rng[x])
        loop = s.src[x] == s.rng[x]
        idem = s.prod[x][x] == x if s.is_composable(x, x) else None
        return (loop, idem, out_deg, in_deg)

    prof_a = [profile(a, x) for x in a.arrows()]
    prof_b = [profile(b, x) for x in b.arrows()]
    if sorted(prof_a) != sorted(prof_b):
        return None

    arrow_map: dict[int, int] = {}
    vertex_map: dict[int, int] = {}
    used_arrows: set[int] = set()
    used_vertices: set[int] = set()

    def vertex_compatible(va: int, vb: int) -> bool:
        if va in vertex_map:
            return vertex_map[va] == vb
        return vb not in used_vertices

    def assign_vertex(va: int, vb: int) -> bool:
        if va in vertex_map:
            return False
        vertex_map[va] = vb
        used_vertices.add(vb)
        return True

    def unassign_vertex(va: int):
        used_vertices.discard(vertex_map.pop(va))

    def consistent(x: int, y: int) -> bool:
        for x2, y2 in arrow_map.items():
            for (p, q, fp, fq) in ((x, x2, y, y2), (x2, x, y2, y)):
                ca = a.prod[p][q]
                cb = b.prod[fp][fq]
                if (ca == UNDEF) != (cb == UNDEF):
                    return False
                if ca != UNDEF and ca in arrow_map and arrow_map[ca] != cb:
                    return False
        ca = a.prod[x][x]
        cb = b.prod[y][y]
        if (ca == UNDEF) != (cb == UNDEF):
            return False
        if ca != UNDEF and ca in arrow_map and arrow_map[ca] != cb:
            return False
        return True

    def total_check() -> bool:
        for x in a.arrows():
            for y in a.arrows():
                ca = a.prod[x][y]
                cb = b.prod[arrow_map[x]][arrow_map[y]]
                if (ca == UNDEF) != (cb == UNDEF):
                    return False
                if ca != UNDEF and arrow_map[ca] != cb:
                    return False
        return True

    def backtrack(x: int) -> bool:
        if x == a.n_arrows:
            return total_check()
        for y in b.arrows():
            if y in used_arrows or prof_a[x] != prof_b[y]:
                continue
            new_vs = []
            ok = True
            for va, vb in ((a.src[x], b.src[y]), (a.rng[x], b.rng[y])):
                if va in vertex_map:
                    if vertex_map[va] != vb:
                        ok = False
                        break
                else:
                    if not vertex_compatible(va, vb):
                        ok = False
                        break
                    assign_vertex(va, vb)
                    new_vs.append(va)
            if ok and consistent(x, y):
                arrow_map[x] = y
                used_arrows.add(y)
                if backtrack(x + 1):
                    return True
                used_arrows.discard(arrow_map.pop(x))
            for va in new_vs:
                unassign_vertex(va)
        return False

    return dict(arrow_map) if backtrack(0) else None


def are_isomorphic(a: FiniteSemigroupoid, b: FiniteSemigroupoid) -> bool:
    return find_isomorphism(a, b) is not None
