"""Algebra bundles over finite semigroupoids and their sectional algebras.

A bundle assigns to every base arrow a free bimodule fiber and to every
composable pair a balanced fiber product. Two modes are supported:

  - "sc": arbitrary ranks with structure constants; needs a commutative
    coefficient ring so free fibers can carry the symmetric bimodule action.
  - "ringfiber": every rank is 1 and the product is ring multiplication times
    a central twist constant; works over non-commutative rings.

Sections (finitely supported choices of a fiber vector per arrow) multiply by
convolution over factorizations, which turns the basis sections into the
uniform algebra presentations used everywhere else: sectional algebras,
semigroupoid algebras, graded round trips, and naive crossed products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebras import AlgebraPresentation
from .maps import LinearMapOnBasis
from .rings import (
    Ring,
    Vector,
    vec_add,
    vec_is_zero,
    zero_vector,
)
from .semigroupoids import (
    FiniteInverseSemigroupoid,
    FiniteSemigroupoid,
    Homomorphism,
    identity_homomorphism,
)
from .validation import (
    CapabilityError,
    InternalConsistencyError,
    StructureError,
    ValidationReport,
    must,
)


@dataclass
class Bundle:
    ring: Ring
    base: FiniteSemigroupoid
    ranks: tuple[int, ...]
    mode: str = "sc"
    constants: dict[tuple[int, int], tuple] = field(default_factory=dict)
    twists: dict[tuple[int, int], object] = field(default_factory=dict)

    def rank(self, arrow: int) -> int:
        return self.ranks[arrow]

    def zero_fiber(self, arrow: int) -> Vector:
        return zero_vector(self.ranks[arrow], self.ring)

    def fiber_mul(self, a: int, b: int, x: Vector, y: Vector) -> Vector:
        """Balanced product fiber(a) x fiber(b) -> fiber(ab)."""
        ring = self.ring
        c = self.base.compose(a, b)
        if c is None:
            raise ValueError("fiber_mul on a non-composable pair")
        if self.mode == "ringfiber":
            twist = self.twists.get((a, b), ring.one)
            return (ring.mul(ring.mul(x[0], y[0]), twist),)
        table = self.constants[(a, b)]
        out = list(zero_vector(self.ranks[c], ring))
        for i, xi in enumerate(x):
            if xi == ring.zero:
                continue
            for j, yj in enumerate(y):
                if yj == ring.zero:
                    continue
                coeff = ring.mul(xi, yj)
                for k, ck in enumerate(table[i][j]):
                    if ck != ring.zero:
                        out[k] = ring.add(out[k], ring.mul(coeff, ck))
        return tuple(out)


def trivial_bundle(ring: Ring, base: FiniteSemigroupoid) -> Bundle:
    """Rank-1 fibers, every constant 1: the direct-product bundle R x base."""
    return must(validate_bundle({"mode": "sc" if ring.commutative else "ringfiber"},
                                ring, base))


def validate_bundle(raw, ring: Ring, base: FiniteSemigroupoid) -> Bundle | ValidationReport:
    """Build a bundle from a stanza and enumerate total-product associativity.

    Stanza fields: "ranks" {arrow: k} (default 1), "mode" ("sc"/"ringfiber"),
    "constants" {"a,b": [[[r]]]} for sc, "twist" {"a,b": r} for ringfiber.
    Missing constants are allowed only for rank-1 pairs and default to 1.
    """
    report = ValidationReport("bundle")
    if isinstance(raw, Bundle):
        bundle = raw
    else:
        mode = raw.get("mode", "sc")
        if mode not in ("sc", "ringfiber"):
            report.add("structural", (str(mode),), f"unknown bundle mode {mode!r}")
            return report
        ranks = [1] * base.n_arrows
        for key, val in raw.get("ranks", {}).items():
            k = str(key)
            if k not in base.arrow_names:
                report.add("structural", (k,), f"rank given for unknown arrow {k!r}")
                return report
            if not isinstance(val, int) or val < 0:
                report.add("structural", (k,), "ranks must be non-negative integers")
                return report
            ranks[base.arrow_index(k)] = val

        def parse_pair(key: str):
            # arrow ids may themselves contain commas, so try every split
            # point and demand a unique reading as two declared ids
            text = str(key)
            candidates = []
            for cut in range(len(text)):
                if text[cut] != ",":
                    continue
                left, right = text[:cut], text[cut + 1:]
                if left in base.arrow_names and right in base.arrow_names:
                    candidates.append((base.arrow_index(left), base.arrow_index(right)))
            if len(candidates) != 1 or not base.is_composable(*candidates[0]):
                return None
            return candidates[0]

        constants: dict[tuple[int, int], tuple] = {}
        twists: dict[tuple[int, int], object] = {}
        if mode == "ringfiber":
            if any(k != 1 for k in ranks):
                report.add("structural", (), "ringfiber mode needs every rank equal to 1")
                return report
            for key, val in raw.get("twist", {}).items():
                pair = parse_pair(key)
                if pair is None:
                    report.add("structural", (str(key),),
                               f"twist key {key!r} is not a composable arrow pair")
                    return report
                try:
                    twists[pair] = ring.coerce(val)
                except ValueError as exc:
                    report.add("structural", (str(key),), str(exc))
                    return report
        else:
            for key, val in raw.get("constants", {}).items():
                pair = parse_pair(key)
                if pair is None:
                    report.add("structural", (str(key),),
                               f"constants key {key!r} is not a composable arrow pair")
                    return report
                a, b = pair
                c = base.prod[a][b]
                name = f"{base.arrow_names[a]},{base.arrow_names[b]}"
                if (
                    not isinstance(val, list) or len(val) != ranks[a]
                    or any(not isinstance(row, list) or len(row) != ranks[b] for row in val)
                    or any(
                        not isinstance(vec, list) or len(vec) != ranks[c]
                        for row in val for vec in row
                    )
                ):
                    report.add("rank-mismatch", (name,),
                               f"constants at ({name}) must be {ranks[a]}x{ranks[b]} vectors of length {ranks[c]}")
                    return report
                try:
                    table = tuple(
                        tuple(tuple(ring.coerce(x) for x in vec) for vec in row)
                        for row in val
                    )
                except ValueError as exc:
                    report.add("structural", (name,), str(exc))
                    return report
                constants[pair] = table
            for a, b in base.composable:
                if (a, b) in constants:
                    continue
                c = base.prod[a][b]
                if ranks[a] == ranks[b] == ranks[c] == 1:
                    constants[(a, b)] = (((ring.one,),),)
                else:
                    report.add("rank-mismatch",
                               (base.arrow_names[a], base.arrow_names[b]),
                               "constants missing for a composable pair with ranks above 1")
                    return report
        bundle = Bundle(ring, base, tuple(ranks), mode, constants, twists)

    if bundle.mode == "sc" and not ring.commutative:
        raise CapabilityError(
            "structure-constants mode needs a commutative ring; "
            "use ringfiber mode for non-commutative coefficients"
        )
    if bundle.mode == "ringfiber":
        if any(k != 1 for k in bundle.ranks):
            report.add("structural", (), "ringfiber mode needs every rank equal to 1")
            return report
        if hasattr(ring, "is_central"):
            for (a, b), t in bundle.twists.items():
                if not ring.is_central(t):
                    report.add("structural",
                               (bundle.base.arrow_names[a], bundle.base.arrow_names[b]),
                               "twist constants must be central in the ring")
                    return report

    names = bundle.base.arrow_names
    for a, b, c in bundle.base.composable_triples():
        ab = bundle.base.prod[a][b]
        bc = bundle.base.prod[b][c]
        for i in range(bundle.ranks[a]):
            ei = _unit(bundle, a, i)
            for j in range(bundle.ranks[b]):
                ej = _unit(bundle, b, j)
                left_inner = bundle.fiber_mul(a, b, ei, ej)
                for l in range(bundle.ranks[c]):
                    el = _unit(bundle, c, l)
                    left = bundle.fiber_mul(ab, c, left_inner, el)
                    right = bundle.fiber_mul(a, bc, ei, bundle.fiber_mul(b, c, ej, el))
                    if left != right:
                        report.add("associativity",
                                   (names[a], names[b], names[c], str(i), str(j), str(l)),
                                   "fiber products are not associative on this triple")
                        return report
    return bundle


def _unit(bundle: Bundle, arrow: int, i: int) -> Vector:
    vec = [bundle.ring.zero] * bundle.ranks[arrow]
    vec[i] = bundle.ring.one
    return tuple(vec)


@dataclass
class Section:
    """Finitely supported right-inverse of the bundle projection.

    Stored sparsely, arrow -> fiber vector; absent means the zero vector.
    Zero vectors are pruned so equality of normalized forms is literal.
    """

    bundle: Bundle
    values: dict[int, Vector] = field(default_factory=dict)

    def __post_init__(self):
        ring = self.bundle.ring
        self.values = {
            a: tuple(v) for a, v in self.values.items() if not vec_is_zero(v, ring)
        }

    def at(self, arrow: int) -> Vector:
        return self.values.get(arrow, self.bundle.zero_fiber(arrow))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.values))

    def add(self, other: "Section") -> "Section":
        _same_bundle(self, other)
        ring = self.bundle.ring
        values = dict(self.values)
        for a, v in other.values.items():
            values[a] = vec_add(values.get(a, self.bundle.zero_fiber(a)), v, ring)
        return Section(self.bundle, values)

    def neg(self) -> "Section":
        ring = self.bundle.ring
        return Section(self.bundle, {
            a: tuple(ring.neg(x) for x in v) for a, v in self.values.items()
        })

    def scale(self, r) -> "Section":
        ring = self.bundle.ring
        return Section(self.bundle, {
            a: tuple(ring.mul(r, x) for x in v) for a, v in self.values.items()
        })

    def __eq__(self, other):
        return (
            isinstance(other, Section)
            and self.bundle is other.bundle
            and self.values == other.values
        )


def zero_section(bundle: Bundle) -> Section:
    return Section(bundle, {})


def delta_section(bundle: Bundle, arrow: int, coords: Vector | None = None,
                  index: int = 0) -> Section:
    """Section supported on one arrow; defaults to the index-th basis vector."""
    if coords is None:
        coords = _unit(bundle, arrow, index)
    return Section(bundle, {arrow: tuple(coords)})


def _same_bundle(a: Section, b: Section) -> None:
    if a.bundle is not b.bundle:
        raise ValueError("sections live on different bundles")


def convolve(alpha: Section, beta: Section) -> Section:
    """(alpha * beta)(c) = sum over factorizations ab = c of the fiber products."""
    _same_bundle(alpha, beta)
    bundle = alpha.bundle
    ring = bundle.ring
    acc: dict[int, list] = {}
    for a, va in alpha.values.items():
        for b, vb in beta.values.items():
            c = bundle.base.compose(a, b)
            if c is None:
                continue
            term = bundle.fiber_mul(a, b, va, vb)
            if c not in acc:
                acc[c] = list(bundle.zero_fiber(c))
            acc[c] = [ring.add(x, y) for x, y in zip(acc[c], term)]
    return Section(bundle, {c: tuple(v) for c, v in acc.items()})


def section_from_vector(bundle: Bundle, labels: tuple, v: Vector) -> Section:
    """Reassemble a coordinate vector of the sectional algebra into a section."""
    values: dict[int, list] = {}
    ring = bundle.ring
    for idx, x in enumerate(v):
        if x == ring.zero:
            continue
        arrow, i = labels[idx]
        vec = values.setdefault(arrow, list(bundle.zero_fiber(arrow)))
        vec[i] = ring.add(vec[i], x)
    return Section(bundle, {a: tuple(vec) for a, vec in values.items()})


def basis_labels(bundle: Bundle) -> tuple[tuple[int, int], ...]:
    return tuple(
        (arrow, i) for arrow in bundle.base.arrows() for i in range(bundle.ranks[arrow])
    )


def sectional_algebra(bundle: Bundle, grading: Homomorphism | None = None) -> AlgebraPresentation:
    """Convolution algebra on the basis sections, optionally graded.

    The structure constants are computed by literally convolving basis
    sections, so the presentation is an independent record of the convolution
    product. With a grading homomorphism c on the base, basis section (γ,i)
    gets degree c(γ); a section is homogeneous of degree g exactly when it
    vanishes off the preimage of g.
    """
    if grading is not None and grading.source is not bundle.base and grading.source != bundle.base:
        raise ValueError("grading must be a homomorphism out of the bundle base")
    labels = basis_labels(bundle)
    position = {lab: idx for idx, lab in enumerate(labels)}
    names = tuple(
        f"{bundle.base.arrow_names[arrow]}" + (f"#{i}" if bundle.ranks[arrow] > 1 else "")
        for arrow, i in labels
    )
    ring = bundle.ring
    table: dict[tuple[int, int], Vector] = {}
    for p, (a, i) in enumerate(labels):
        da = delta_section(bundle, a, index=i)
        for q, (b, j) in enumerate(labels):
            product = convolve(da, delta_section(bundle, b, index=j))
            if not product.values:
                continue
            vec = [ring.zero] * len(labels)
            for c, coords in product.values.items():
                for k, x in enumerate(coords):
                    vec[position[(c, k)]] = x
            table[(p, q)] = tuple(vec)
    degrees = None
    g = None
    if grading is not None:
        g = grading.target
        degrees = tuple(grading.map[arrow] for arrow, _ in labels)
    return AlgebraPresentation(
        ring=ring, basis=names, table=table, grading=g, degrees=degrees,
        provenance=f"sectional algebra over {bundle.base.name or 'base'}",
    )


def semigroupoid_algebra(coefficients, sgpd: FiniteSemigroupoid,
                         grading: Homomorphism | None = None) -> AlgebraPresentation:
    """Functions into a ring or algebra under convolution, as a sectional algebra.

    This is literally the sectional algebra of the coordinate-projection
    bundle: fibers all equal to the coefficient ring (rank 1) or to the given
    algebra (its structure constants repeated over every composable pair).
    """
    bundle = coefficient_bundle(coefficients, sgpd)
    return sectional_algebra(bundle, grading)


def coefficient_bundle(coefficients, sgpd: FiniteSemigroupoid) -> Bundle:
    if isinstance(coefficients, Ring):
        return trivial_bundle(coefficients, sgpd)
    algebra: AlgebraPresentation = coefficients
    ring = algebra.ring
    if not ring.commutative:
        raise CapabilityError("algebra coefficients need a commutative ring")
    m = algebra.rank
    constants = {}
    for a, b in sgpd.composable:
        constants[(a, b)] = tuple(
            tuple(algebra.basis_product(i, j) for j in range(m)) for i in range(m)
        )
    bundle = Bundle(ring, sgpd, (m,) * sgpd.n_arrows, "sc", constants, {})
    return must(validate_bundle(bundle, ring, sgpd))


def bundle_from_graded(algebra: AlgebraPresentation) -> Bundle:
    """Disassemble a graded algebra into a bundle over its grading semigroupoid.

    The fiber over g is the degree-g homogeneous component; fiber products are
    the restrictions of the structure constants, which land in the right
    degree by graded closure.
    """
    if not algebra.graded:
        raise StructureError(_single(
            "bundle from graded algebra", "structural", (),
            "the algebra carries no grading",
        ))
    g = algebra.grading
    ring = algebra.ring
    witness = algebra.check_graded_closure()
    if witness is not None:
        raise StructureError(_single(
            "bundle from graded algebra", "graded-closure", witness,
            "products leave the homogeneous component dictated by the degrees",
        ))
    fibers = [algebra.homogeneous_indices(arrow) for arrow in g.arrows()]
    ranks = tuple(len(f) for f in fibers)
    constants: dict[tuple[int, int], tuple] = {}
    for a, b in g.composable:
        c = g.prod[a][b]
        rows = []
        for i in fibers[a]:
            row = []
            for j in fibers[b]:
                prod = algebra.basis_product(i, j)
                row.append(tuple(prod[k] for k in fibers[c]))
            rows.append(tuple(row))
        constants[(a, b)] = tuple(rows)
    if ring.commutative:
        bundle = Bundle(ring, g, ranks, "sc", constants, {})
    else:
        if any(r > 1 for r in ranks):
            raise CapabilityError(
                "non-commutative coefficients need rank-1 homogeneous components"
            )
        twists = {}
        for (a, b), table in constants.items():
            t = table[0][0][0] if table and table[0] and table[0][0] else ring.zero
            twists[(a, b)] = t
        bundle = Bundle(ring, g, ranks, "ringfiber", {}, twists)
    return must(validate_bundle(bundle, ring, g))


def graded_roundtrip_iso(algebra: AlgebraPresentation) -> LinearMapOnBasis:
    """Sectional algebra of the disassembled bundle back onto the algebra.

    On a basis section supported at degree g with fiber coordinate i, the map
    picks out the i-th basis element of the degree-g component; summed over
    degrees this is exactly the evaluation-and-forget map, and it is a graded
    isomorphism with the obvious inverse.
    """
    bundle = bundle_from_graded(algebra)
    g = algebra.grading
    rebuilt = sectional_algebra(bundle, identity_homomorphism(g))
    labels = basis_labels(bundle)
    fibers = [algebra.homogeneous_indices(arrow) for arrow in g.arrows()]
    images = tuple(
        algebra.unit_vector(fibers[arrow][i]) for arrow, i in labels
    )
    back_position = {fibers[arrow][i]: idx for idx, (arrow, i) in enumerate(labels)}
    back = tuple(
        rebuilt.unit_vector(back_position[k]) for k in range(algebra.rank)
    )
    inverse = LinearMapOnBasis(algebra, rebuilt, back)
    out = LinearMapOnBasis(rebuilt, algebra, images, inverse=inverse)
    inverse.inverse = out
    return out


def _single(subject, kind, witness, message) -> ValidationReport:
    report = ValidationReport(subject)
    report.add(kind, witness, message)
    return report


# ---------------------------------------------------------------------------
# Algebra-level actions and naive crossed products
# ---------------------------------------------------------------------------

@dataclass
class AlgebraAction:
    """Wedge-preaction of an inverse semigroupoid on an algebra presentation.

    Domains are coordinate subspaces (spans of basis subsets), so ideal and
    membership checks reduce to support containment; the per-arrow maps are
    linear isomorphisms given on the domain basis.
    """

    actor: FiniteInverseSemigroupoid
    algebra: AlgebraPresentation
    domains: tuple[tuple[int, ...], ...]
    matrices: tuple[dict[int, Vector], ...]

    def dom(self, s: int) -> tuple[int, ...]:
        return self.domains[s]

    def apply(self, s: int, v: Vector) -> Vector:
        """Linear extension of the basis images; v must be supported in dom(s)."""
        ring = self.algebra.ring
        out = list(self.algebra.zero())
        for i, x in enumerate(v):
            if x == ring.zero:
                continue
            image = self.matrices[s].get(i)
            if image is None:
                raise ValueError(
                    f"vector leaves dom at basis {self.algebra.basis[i]} for arrow "
                    f"{self.actor.base.arrow_names[s]}"
                )
            for k, c in enumerate(image):
                if c != ring.zero:
                    out[k] = ring.add(out[k], ring.mul(x, c))
        return tuple(out)

    def big_ideal(self, v: int) -> set[int]:
        out: set[int] = set()
        for s in self.actor.base.arrows():
            if self.actor.base.src[s] == v:
                out.update(self.domains[s])
        return out


def validate_algebra_action(actor: FiniteInverseSemigroupoid,
                            algebra: AlgebraPresentation,
                            domains, matrices) -> AlgebraAction | ValidationReport:
    """Check the wedge-preaction axioms at the algebra level.

    domains: per actor arrow, the basis indices spanning dom(Theta_s);
    matrices: per actor arrow, {basis index: image vector}. Checks: domains
    are multiplication-closed against the ambient span (ideals), the maps are
    multiplicative bijections, Theta_{s*} inverts Theta_s, and the extension
    law for composable pairs holds on the computable spanning vectors.
    """
    base = actor.base
    report = ValidationReport("algebra action")
    names = base.arrow_names
    doms = [tuple(sorted(set(d))) for d in domains]
    mats = [dict(m) for m in matrices]
    if len(doms) != base.n_arrows or len(mats) != base.n_arrows:
        report.add("structural", (), "need one domain and one matrix per actor arrow")
        return report
    for s in base.arrows():
        if set(mats[s]) != set(doms[s]):
            report.add("structural", (names[s],),
                       "matrix rows must cover exactly the domain basis")
            return report
        for i, vec in mats[s].items():
            if len(vec) != algebra.rank:
                report.add("structural", (names[s], algebra.basis[i]),
                           "image vector has wrong rank")
                return report

    action = AlgebraAction(actor, algebra, tuple(doms), tuple(mats))

    def in_span(vec: Vector, dom: tuple[int, ...]) -> bool:
        return set(algebra.support(vec)) <= set(dom)

    # images must span the inverse's domain, and the two maps must compose to
    # the identity on basis vectors
    for s in base.arrows():
        t = actor.inv[s]
        for i in doms[s]:
            img = mats[s][i]
            if not in_span(img, doms[t]):
                report.add("inverse-compatibility", (names[s], algebra.basis[i]),
                           "image leaves dom of the inverse arrow")
                return report
            if action.apply(t, img) != algebra.unit_vector(i):
                report.add("inverse-compatibility", (names[s], algebra.basis[i]),
                           "Theta_{s*} does not invert Theta_s")
                return report

    # ideal conditions on coordinate subspaces
    for v in range(base.n_vertices):
        big = action.big_ideal(v)
        for i in sorted(big):
            for j in range(algebra.rank):
                for (p, q) in ((i, j), (j, i)):
                    prod = algebra.basis_product(p, q)
                    if not in_span(prod, tuple(sorted(big))):
                        report.add("ideal-property",
                                   (base.vertex_names[v], algebra.basis[p], algebra.basis[q]),
                                   "I(Theta, v) is not multiplication closed")
                        return report
    for s in base.arrows():
        ambient = sorted(action.big_ideal(base.src[s]))
        for i in doms[s]:
            for j in ambient:
                for (p, q) in ((i, j), (j, i)):
                    prod = algebra.basis_product(p, q)
                    if not in_span(prod, doms[s]):
                        report.add("ideal-property",
                                   (names[s], algebra.basis[p], algebra.basis[q]),
                                   f"dom(Theta_{names[s]}) is not an ideal: a product leaves the span")
                        return report

    # multiplicativity on domain basis pairs
    for s in base.arrows():
        for i in doms[s]:
            for j in doms[s]:
                lhs = action.apply(s, algebra.basis_product(i, j))
                rhs = algebra.mul(mats[s][i], mats[s][j])
                if lhs != rhs:
                    report.add("isomorphism", (names[s], algebra.basis[i], algebra.basis[j]),
                               "Theta_s is not multiplicative on its domain")
                    return report

    # extension law: Theta_{st} extends Theta_s Theta_t. The preimage of
    # ran(Theta_t) ∩ dom(Theta_s) is spanned by Theta_{t*} images of the basis
    # in that intersection, which keeps everything enumerable.
    for s, t in base.composable:
        st = base.prod[s][t]
        tstar = actor.inv[t]
        for d in doms[tstar]:
            if d not in set(doms[s]):
                continue
            x = mats[tstar][d]                      # a spanning vector of the preimage
            if not in_span(x, doms[st]):
                report.add("extension-law", (names[s], names[t], algebra.basis[d]),
                           "preimage vector leaves dom(Theta_st)")
                return report
            lhs = action.apply(st, x)
            rhs = action.apply(s, action.apply(t, x))
            if lhs != rhs:
                report.add("extension-law", (names[s], names[t], algebra.basis[d]),
                           "Theta_st differs from Theta_s Theta_t on the common domain")
                return report

    return action


def algebra_action_associativity(action: AlgebraAction) -> tuple | None:
    """Twisted triple condition at the algebra level; witness or None.

    For actor triples with stu defined and basis vectors a, b, c drawn from
    dom(Theta_s), dom(Theta_t), ran(Theta_u):
    Theta_{t*}(a Theta_t(b)) c == Theta_{t*}(a Theta_t(bc)).
    """
    base = action.actor.base
    inv = action.actor.inv
    alg = action.algebra
    for s, t in base.composable:
        st = base.prod[s][t]
        for u in base.arrows():
            if not base.is_composable(st, u):
                continue
            ran_u = action.domains[inv[u]]
            for a in action.domains[s]:
                va = alg.unit_vector(a)
                for b in action.domains[t]:
                    tb = action.apply(t, alg.unit_vector(b))
                    inner = action.apply(inv[t], alg.mul(va, tb))
                    for c in ran_u:
                        vc = alg.unit_vector(c)
                        left = alg.mul(inner, vc)
                        bc = alg.mul(alg.unit_vector(b), vc)
                        right = action.apply(inv[t], alg.mul(va, action.apply(t, bc)))
                        if left != right:
                            return (
                                base.arrow_names[s], base.arrow_names[t],
                                base.arrow_names[u], alg.basis[a], alg.basis[b],
                                alg.basis[c],
                            )
    return None


def trivial_algebra_action(actor: FiniteInverseSemigroupoid,
                           algebra: AlgebraPresentation) -> AlgebraAction:
    """Every arrow acts as the identity on the whole algebra."""
    full = tuple(range(algebra.rank))
    identity = {i: algebra.unit_vector(i) for i in full}
    return must(validate_algebra_action(
        actor, algebra,
        [full] * actor.base.n_arrows,
        [dict(identity) for _ in actor.base.arrows()],
    ))


def naive_crossed_product(action: AlgebraAction,
                          grading: Homomorphism | None = None) -> AlgebraPresentation:
    """Formal sums of delta_s a with a in dom(Theta_s), twisted convolution.

    Product on generators: (delta_s a)(delta_t b) = delta_{st}
    Theta_{t*}(a Theta_t(b)) when (s,t) is composable, zero otherwise.
    Graded by the supplied homomorphism, defaulting to the actor itself.
    """
    actor = action.actor
    base = actor.base
    alg = action.algebra
    ring = alg.ring
    if grading is None:
        grading = identity_homomorphism(base)
    labels = [(s, d) for s in base.arrows() for d in action.domains[s]]
    position = {lab: idx for idx, lab in enumerate(labels)}
    names = tuple(
        f"d_{base.arrow_names[s]}.{alg.basis[d]}" for s, d in labels
    )
    table: dict[tuple[int, int], Vector] = {}
    for p, (s, a) in enumerate(labels):
        for q, (t, b) in enumerate(labels):
            if not base.is_composable(s, t):
                continue
            st = base.prod[s][t]
            tb = action.apply(t, alg.unit_vector(b))
            value = action.apply(actor.inv[t], alg.mul(alg.unit_vector(a), tb))
            if alg.is_zero_vector(value):
                continue
            if not set(alg.support(value)) <= set(action.domains[st]):
                raise InternalConsistencyError(
                    "crossed product landed outside dom(Theta_st); the action "
                    "validator should have refused this input"
                )
            vec = [ring.zero] * len(labels)
            for k in alg.support(value):
                vec[position[(st, k)]] = value[k]
            table[(p, q)] = tuple(vec)
    degrees = tuple(grading.map[s] for s, _ in labels)
    return AlgebraPresentation(
        ring=ring, basis=names, table=table,
        grading=grading.target, degrees=degrees,
        provenance="naive crossed product",
    )


def lscript_presentation(action: AlgebraAction) -> AlgebraPresentation:
    """Range-side twist of the crossed product: f(s) in ran(Theta_s).

    Product on generators: (delta_x a)(delta_y b) = delta_{xy}
    Theta_x(Theta_{x*}(a) b).
    """
    actor = action.actor
    base = actor.base
    alg = action.algebra
    ring = alg.ring
    labels = [(s, d) for s in base.arrows() for d in action.domains[actor.inv[s]]]
    position = {lab: idx for idx, lab in enumerate(labels)}
    names = tuple(
        f"L_{base.arrow_names[s]}.{alg.basis[d]}" for s, d in labels
    )
    table: dict[tuple[int, int], Vector] = {}
    for p, (x, a) in enumerate(labels):
        for q, (y, b) in enumerate(labels):
            if not base.is_composable(x, y):
                continue
            xy = base.prod[x][y]
            pulled = action.apply(actor.inv[x], alg.unit_vector(a))
            value = action.apply(x, alg.mul(pulled, alg.unit_vector(b)))
            if alg.is_zero_vector(value):
                continue
            if not set(alg.support(value)) <= set(action.domains[actor.inv[xy]]):
                raise InternalConsistencyError(
                    "range-side product landed outside ran(Theta_xy)"
                )
            vec = [ring.zero] * len(labels)
            for k in alg.support(value):
                vec[position[(xy, k)]] = value[k]
            table[(p, q)] = tuple(vec)
    grading = identity_homomorphism(base)
    degrees = tuple(grading.map[s] for s, _ in labels)
    return AlgebraPresentation(
        ring=ring, basis=names, table=table,
        grading=grading.target, degrees=degrees,
        provenance="range-side crossed product",
    )


def lscript_iso(action: AlgebraAction) -> LinearMapOnBasis:
    """phi(f)(s) = Theta_s(f(s)) from the crossed product onto the range-side
    presentation, with inverse f -> (s -> Theta_{s*}(f(s)))."""
    actor = action.actor
    base = actor.base
    alg = action.algebra
    crossed = naive_crossed_product(action)
    ranged = lscript_presentation(action)

    cross_labels = [(s, d) for s in base.arrows() for d in action.domains[s]]
    range_labels = [(s, d) for s in base.arrows() for d in action.domains[actor.inv[s]]]
    range_pos = {lab: idx for idx, lab in enumerate(range_labels)}
    cross_pos = {lab: idx for idx, lab in enumerate(cross_labels)}

    def embed(labels_pos, arrow, value, rank):
        vec = [alg.ring.zero] * rank
        for k in alg.support(value):
            vec[labels_pos[(arrow, k)]] = value[k]
        return tuple(vec)

    fwd = tuple(
        embed(range_pos, s, action.apply(s, alg.unit_vector(d)), ranged.rank)
        for s, d in cross_labels
    )
    back = tuple(
        embed(cross_pos, s, action.apply(actor.inv[s], alg.unit_vector(d)), crossed.rank)
        for s, d in range_labels
    )
    inverse = LinearMapOnBasis(ranged, crossed, back)
    out = LinearMapOnBasis(crossed, ranged, fwd, inverse=inverse)
    inverse.inverse = out
    return out
