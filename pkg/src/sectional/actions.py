"""Actions of inverse semigroupoids on semigroupoids, and their quotients.

A wedge-preaction assigns to each arrow s of the acting inverse semigroupoid
a partial isomorphism theta_s of the space, subject to ideal conditions, the
inverse condition theta_{s*} = theta_s^{-1}, and an extension law for
composable pairs. The validator enumerates all of it and classifies the
action (partial, global, associative).

Quotients: rigid congruences with class-wise constant source and range, the
canonical quotient semigroupoid, and the germ quotient of a semidirect
product. Germ transitivity is checked at runtime, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .semigroupoids import (
    UNDEF,
    FiniteInverseSemigroupoid,
    FiniteSemigroupoid,
    GroupoidCheck,
    Homomorphism,
    is_groupoid,
    validate_homomorphism,
    validate_semigroupoid,
)
from .validation import (
    InternalConsistencyError,
    StructureError,
    ValidationReport,
    must,
)


@dataclass
class LandPreaction:
    actor: FiniteInverseSemigroupoid
    space: FiniteSemigroupoid
    maps: tuple[dict[int, int], ...]   # per actor arrow: space arrow -> space arrow
    is_partial: bool = False
    is_global: bool = False
    is_associative: bool = False
    associativity_witness: tuple = ()

    def dom(self, s: int) -> tuple[int, ...]:
        return tuple(sorted(self.maps[s]))

    def ran(self, s: int) -> tuple[int, ...]:
        return tuple(sorted(self.maps[s].values()))

    def apply(self, s: int, a: int) -> int | None:
        return self.maps[s].get(a)

    def big_ideal(self, v: int) -> set[int]:
        """Union of the domains over arrows with source v."""
        out: set[int] = set()
        for s in self.actor.base.arrows():
            if self.actor.base.src[s] == v:
                out.update(self.maps[s])
        return out


def _is_ideal(subset: set[int], ambient: set[int], space: FiniteSemigroupoid) -> tuple | None:
    """Check subset absorbs products with ambient inside the space; witness or None."""
    for x in sorted(subset):
        for y in sorted(ambient):
            for p, q in ((x, y), (y, x)):
                c = space.compose(p, q)
                if c is not None and c not in subset:
                    return (space.arrow_names[p], space.arrow_names[q])
    return None


def validate_preaction(raw_maps, actor: FiniteInverseSemigroupoid, space: FiniteSemigroupoid) -> LandPreaction | ValidationReport:
    """Check the four wedge-preaction axioms and classify the action.

    raw_maps: {actor arrow name: {"dom": [...], "img": [...]}} with img parallel
    to dom; arrows not mentioned act with empty domain. Classification:
    is_partial (domains grow along the natural order), is_global (the
    extension inclusion is an equality), is_associative (the twisted triple
    products agree, with definedness matched on both sides).
    """
    base = actor.base
    report = ValidationReport("wedge-preaction")
    maps: list[dict[int, int]] = [dict() for _ in base.arrows()]

    if not isinstance(raw_maps, dict):
        report.add("structural", (), "maps must be an object keyed by actor arrows")
        return report
    for key, entry in raw_maps.items():
        k = str(key)
        if k not in base.arrow_names:
            report.add("structural", (k,), f"unknown actor arrow {k!r}")
            return report
        dom = [str(x) for x in entry.get("dom", [])]
        img = [str(x) for x in entry.get("img", [])]
        if len(dom) != len(img):
            report.add("structural", (k,), "img must be parallel to dom")
            return report
        table: dict[int, int] = {}
        for d, i in zip(dom, img):
            if d not in space.arrow_names or i not in space.arrow_names:
                report.add("structural", (k, d, i), "dom/img reference unknown space arrows")
                return report
            di, ii = space.arrow_index(d), space.arrow_index(i)
            if di in table:
                report.add("structural", (k, d), f"duplicate domain entry {d!r}")
                return report
            table[di] = ii
        if len(set(table.values())) != len(table):
            report.add("structural", (k,), f"theta_{k} is not injective")
            return report
        maps[base.arrow_index(k)] = table

    theta = LandPreaction(actor, space, tuple(maps))
    names = base.arrow_names
    anames = space.arrow_names

    # (iii) theta_{s*} = theta_s^{-1}
    for s in base.arrows():
        inv_s = actor.inv[s]
        ran_s = set(maps[s].values())
        if set(maps[inv_s]) != ran_s:
            report.add("inverse-compatibility", (names[s],),
                       f"dom(theta_{names[inv_s]}) differs from ran(theta_{names[s]})")
            continue
        for a, b in maps[s].items():
            if maps[inv_s].get(b) != a:
                report.add("inverse-compatibility", (names[s], anames[a]),
                           f"theta_{names[inv_s]} does not invert theta_{names[s]} at {anames[a]}")
                break
    if not report.ok:
        return report

    # (i) the union of domains at each actor vertex is an ideal of the space
    for v in range(base.n_vertices):
        big = theta.big_ideal(v)
        w = _is_ideal(big, set(space.arrows()), space)
        if w is not None:
            report.add("ideal-property", (base.vertex_names[v],) + w,
                       f"I(theta,{base.vertex_names[v]}) is not an ideal of the space")
    if not report.ok:
        return report

    # (ii) each domain and range is an ideal of the relevant big ideal, and
    # theta_s is a semigroupoid isomorphism onto its range
    for s in base.arrows():
        dom = set(maps[s])
        ran = set(maps[s].values())
        w = _is_ideal(dom, theta.big_ideal(base.src[s]), space)
        if w is not None:
            report.add("ideal-property", (names[s],) + w,
                       f"dom(theta_{names[s]}) is not an ideal of I(theta,src)")
            continue
        w = _is_ideal(ran, theta.big_ideal(base.rng[s]), space)
        if w is not None:
            report.add("ideal-property", (names[s],) + w,
                       f"ran(theta_{names[s]}) is not an ideal of I(theta,rng)")
            continue
        for x in sorted(dom):
            for y in sorted(dom):
                xy = space.compose(x, y)
                fxy = space.compose(maps[s][x], maps[s][y])
                if (xy is None) != (fxy is None):
                    report.add("isomorphism", (names[s], anames[x], anames[y]),
                               f"theta_{names[s]} does not preserve composability")
                    break
                if xy is not None and maps[s].get(xy) != fxy:
                    report.add("isomorphism", (names[s], anames[x], anames[y]),
                               f"theta_{names[s]}(xy) != theta_{names[s]}(x)theta_{names[s]}(y)")
                    break
            else:
                continue
            break
    if not report.ok:
        return report

    # (iv) extension law on composable actor pairs
    for s, t in base.composable:
        st = base.prod[s][t]
        for x, tx in maps[t].items():
            if tx in maps[s]:
                if x not in maps[st]:
                    report.add("extension-law", (names[s], names[t], anames[x]),
                               f"theta_{names[st]} does not extend theta_{names[s]}theta_{names[t]}")
                    break
                if maps[st][x] != maps[s][tx]:
                    report.add("extension-law", (names[s], names[t], anames[x]),
                               "theta_st(x) != theta_s(theta_t(x))")
                    break
    if not report.ok:
        return report

    # classification
    is_partial = all(
        set(maps[s]) <= set(maps[t])
        for (s, t) in actor.leq
    )
    is_global = all(
        set(maps[base.prod[s][t]]) == {x for x, tx in maps[t].items() if tx in maps[s]}
        for s, t in base.composable
    )
    is_assoc, assoc_witness = _associativity(theta)

    theta.is_partial = is_partial
    theta.is_global = is_global
    theta.is_associative = is_assoc
    theta.associativity_witness = assoc_witness
    return theta


def _twisted(theta: LandPreaction, t: int, a: int, b: int) -> int | None:
    """theta_{t*}(a * theta_t(b)), or None when any step is undefined."""
    tb = theta.apply(t, b)
    if tb is None:
        return None
    prod = theta.space.compose(a, tb)
    if prod is None:
        return None
    return theta.apply(theta.actor.inv[t], prod)


def _associativity(theta: LandPreaction) -> tuple[bool, tuple]:
    """Triple condition: theta_{t*}(a theta_t(b)) c = theta_{t*}(a theta_t(bc)).

    Runs over actor triples (s,t,u) with stu defined and (a,b,c) in
    dom(theta_s) x dom(theta_t) x ran(theta_u). Sides must agree as partial
    values: defined together and equal, or undefined together.
    """
    base = theta.actor.base
    space = theta.space
    for s, t in base.composable:
        st = base.prod[s][t]
        for u in base.arrows():
            if not base.is_composable(st, u):
                continue
            for a in theta.dom(s):
                for b in theta.dom(t):
                    for c in theta.ran(u):
                        inner = _twisted(theta, t, a, b)
                        left = None if inner is None else space.compose(inner, c)
                        bc = space.compose(b, c)
                        right = None if bc is None else _twisted(theta, t, a, bc)
                        if left != right:
                            return False, (
                                base.arrow_names[s], base.arrow_names[t],
                                base.arrow_names[u], space.arrow_names[a],
                                space.arrow_names[b], space.arrow_names[c],
                            )
    return True, ()


def trivial_action(actor: FiniteInverseSemigroupoid, space: FiniteSemigroupoid) -> LandPreaction:
    """theta_s = identity on the whole space for every arrow (needs one actor vertex)."""
    if actor.base.n_vertices != 1:
        raise StructureError(_quick_report(
            "trivial action", "structural", (actor.base.name,),
            "the identity-on-everything action needs a one-vertex actor",
        ))
    raw = {
        name: {"dom": list(space.arrow_names), "img": list(space.arrow_names)}
        for name in actor.base.arrow_names
    }
    return must(validate_preaction(raw, actor, space))


def _quick_report(subject, kind, witness, message) -> ValidationReport:
    report = ValidationReport(subject)
    report.add(kind, witness, message)
    return report


@dataclass
class SemidirectProduct:
    """Semigroupoid of pairs (s, a) with a in dom(theta_s), plus bookkeeping."""

    action: LandPreaction
    semigroupoid: FiniteSemigroupoid
    pairs: tuple[tuple[int, int], ...]
    index: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.pairs)}


def semidirect_product(theta: LandPreaction) -> SemidirectProduct:
    """Arrows (s,a), product (s,a)(t,b) = (st, theta_{t*}(a theta_t(b))).

    Refuses non-associative actions: the table it would produce could violate
    associativity, so the failing triple is reported instead.
    """
    if not theta.is_associative:
        raise StructureError(_quick_report(
            "semidirect product", "not-associative", theta.associativity_witness,
            "the action fails the twisted associativity condition",
        ))
    actor = theta.actor.base
    space = theta.space
    pairs = [(s, a) for s in actor.arrows() for a in theta.dom(s)]
    index = {p: i for i, p in enumerate(pairs)}

    # vertex pairs live in actor^(0) x space^(0); only those met by an arrow
    # are kept, so groupoid detection sees the operative graph
    src_pairs = []
    rng_pairs = []
    for s, a in pairs:
        src_pairs.append((actor.src[s], space.src[a]))
        image = theta.apply(s, a)
        rng_pairs.append((actor.rng[s], space.rng[image]))
    touched = sorted(set(src_pairs) | set(rng_pairs))
    vid = {pair: i for i, pair in enumerate(touched)}
    vertex_names = tuple(
        f"({actor.vertex_names[v]},{space.vertex_names[w]})" for v, w in touched
    )

    arrow_names = tuple(
        f"({actor.arrow_names[s]},{space.arrow_names[a]})" for s, a in pairs
    )
    src = [vid[p] for p in src_pairs]
    rng = [vid[p] for p in rng_pairs]

    n = len(pairs)
    prod = [[UNDEF] * n for _ in range(n)]
    for i, (s, a) in enumerate(pairs):
        for j, (t, b) in enumerate(pairs):
            if not actor.is_composable(s, t):
                continue
            tb = theta.apply(t, b)
            if space.rng[tb] != space.src[a]:
                continue
            st = actor.prod[s][t]
            value = _twisted(theta, t, a, b)
            if value is None or value not in theta.maps[st]:
                raise InternalConsistencyError(
                    "semidirect product formula left its domain at "
                    f"({arrow_names[i]},{arrow_names[j]}); the action validator "
                    "should have prevented this"
                )
            prod[i][j] = index[(st, value)]

    sgpd = FiniteSemigroupoid(
        vertex_names, arrow_names, tuple(src), tuple(rng),
        tuple(tuple(row) for row in prod),
        name=f"{actor.name}|x{space.name}",
    )
    sgpd = must(validate_semigroupoid(sgpd))
    return SemidirectProduct(theta, sgpd, tuple(pairs))


@dataclass
class RigidCongruence:
    base: FiniteSemigroupoid
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]

    def representative(self, cls: int) -> int:
        return self.classes[cls][0]


def validate_rigid_congruence(partition, base: FiniteSemigroupoid) -> RigidCongruence | ValidationReport:
    """Partition of the arrows with class-wise constant src/rng, product compatible."""
    report = ValidationReport("rigid congruence")
    names = base.arrow_names
    resolved: list[list[int]] = []
    seen: set[int] = set()
    for block in partition:
        ids = []
        for x in block:
            if isinstance(x, int):
                xi = x
            else:
                if str(x) not in names:
                    report.add("structural", (str(x),), f"unknown arrow {x!r}")
                    return report
                xi = base.arrow_index(str(x))
            if xi in seen:
                report.add("structural", (names[xi],), f"arrow {names[xi]!r} appears twice")
                return report
            seen.add(xi)
            ids.append(xi)
        if ids:
            resolved.append(sorted(ids))
    if seen != set(base.arrows()):
        missing = sorted(set(base.arrows()) - seen)[0]
        report.add("structural", (names[missing],), f"partition misses arrow {names[missing]!r}")
        return report
    resolved.sort(key=lambda block: block[0])
    class_of = [0] * base.n_arrows
    for ci, block in enumerate(resolved):
        for x in block:
            class_of[x] = ci

    for block in resolved:
        rep = block[0]
        for x in block[1:]:
            if base.src[x] != base.src[rep] or base.rng[x] != base.rng[rep]:
                report.add("source-range-mismatch", (names[rep], names[x]),
                           "equivalent arrows must share source and range")
                break
    if not report.ok:
        return report

    for x1 in base.arrows():
        for y1 in resolved[class_of[x1]]:
            for x2 in base.arrows():
                if not base.is_composable(x1, x2):
                    continue
                for y2 in resolved[class_of[x2]]:
                    left = base.prod[x1][x2]
                    right = base.prod[y1][y2]
                    if class_of[left] != class_of[right]:
                        report.add("product-incompatibility",
                                   (names[x1], names[y1], names[x2], names[y2]),
                                   "x1x2 and y1y2 land in different classes")
                        return report
    return RigidCongruence(base, tuple(tuple(b) for b in resolved), tuple(class_of))


def quotient_semigroupoid(cong: RigidCongruence) -> tuple[FiniteSemigroupoid, Homomorphism]:
    """Classes as arrows over the original vertex set, plus the projection.

    Well-definedness of the class product is re-verified over every pair of
    representatives; a failure would mean the congruence validator is broken.
    """
    base = cong.base
    names = base.arrow_names
    arrow_names = tuple(f"[{names[block[0]]}]" for block in cong.classes)
    src = tuple(base.src[block[0]] for block in cong.classes)
    rng = tuple(base.rng[block[0]] for block in cong.classes)
    k = len(cong.classes)
    prod = [[UNDEF] * k for _ in range(k)]
    for i, bi in enumerate(cong.classes):
        for j, bj in enumerate(cong.classes):
            if base.src[bi[0]] != base.rng[bj[0]]:
                continue
            expected = None
            for x in bi:
                for y in bj:
                    c = base.compose(x, y)
                    if c is None:
                        raise InternalConsistencyError(
                            "rigid congruence produced a non-composable member pair"
                        )
                    cls = cong.class_of[c]
                    if expected is None:
                        expected = cls
                    elif expected != cls:
                        raise InternalConsistencyError(
                            f"quotient product ill-defined on ({arrow_names[i]},{arrow_names[j]})"
                        )
            prod[i][j] = expected

    quotient = FiniteSemigroupoid(
        base.vertex_names, arrow_names, src, rng,
        tuple(tuple(row) for row in prod),
        name=f"{base.name}/~" if base.name else "",
    )
    quotient = must(validate_semigroupoid(quotient))
    projection = must(validate_homomorphism(
        {names[a]: arrow_names[cong.class_of[a]] for a in base.arrows()},
        base, quotient,
    ))
    if not projection.rigid:
        raise InternalConsistencyError("quotient projection of a rigid congruence must be rigid")
    return quotient, projection


@dataclass
class GermQuotient:
    semidirect: SemidirectProduct
    congruence: RigidCongruence
    quotient: FiniteSemigroupoid
    projection: Homomorphism
    groupoid_check: GroupoidCheck


def germ_quotient(theta: LandPreaction) -> GermQuotient | ValidationReport:
    """Collapse (s1,g) ~ (s2,g) when some u below both has g in its domain.

    The relation is reflexive and symmetric by construction; transitivity and
    the congruence conditions are checked, with a structured refusal carrying
    a witness when they fail (possible for general wedge-preactions).
    """
    space_check = is_groupoid(theta.space)
    if not space_check.ok:
        return _quick_report("germ quotient", "space-not-groupoid",
                             space_check.witness, space_check.message)
    if not theta.is_associative:
        return _quick_report("germ quotient", "not-associative",
                             theta.associativity_witness,
                             "germ quotients need an associative action")

    sp = semidirect_product(theta)
    actor = theta.actor
    pairs = sp.pairs
    n = len(pairs)

    def related(i: int, j: int) -> bool:
        s1, g1 = pairs[i]
        s2, g2 = pairs[j]
        if g1 != g2:
            return False
        return any(
            actor.le(u, s1) and actor.le(u, s2) and g1 in theta.maps[u]
            for u in actor.base.arrows()
        )

    rel = [[related(i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not rel[i][j]:
                continue
            for k in range(n):
                if rel[j][k] and not rel[i][k]:
                    names = sp.semigroupoid.arrow_names
                    return _quick_report(
                        "germ quotient", "germ-transitivity",
                        (names[i], names[j], names[k]),
                        "the germ relation is not transitive for this action",
                    )

    blocks: list[list[int]] = []
    assigned = [False] * n
    for i in range(n):
        if assigned[i]:
            continue
        block = [j for j in range(n) if rel[i][j]]
        for j in block:
            assigned[j] = True
        blocks.append(block)

    cong = validate_rigid_congruence(
        [[sp.semigroupoid.arrow_names[j] for j in block] for block in blocks],
        sp.semigroupoid,
    )
    if isinstance(cong, ValidationReport):
        return cong
    quotient, projection = quotient_semigroupoid(cong)
    return GermQuotient(sp, cong, quotient, projection, is_groupoid(quotient))
