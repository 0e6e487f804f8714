"""Raw table builders shared across the test modules.

These return plain stanza dicts so tests can perturb single entries and watch
the validators reject them; the library's own constructors live in
sectional.standard.
"""

import copy


def trivial_monoid_raw():
    return {
        "id": "trivial",
        "vertices": ["*"],
        "arrows": [{"id": "a", "src": "*", "rng": "*"}],
        "prod": [["a", "a", "a"]],
        "inv": {"a": "a"},
    }


def cyclic2_raw():
    return {
        "id": "Z2",
        "vertices": ["*"],
        "arrows": [
            {"id": "u", "src": "*", "rng": "*"},
            {"id": "g", "src": "*", "rng": "*"},
        ],
        "prod": [["u", "u", "u"], ["u", "g", "g"], ["g", "u", "g"], ["g", "g", "u"]],
        "inv": {"u": "u", "g": "g"},
    }


def semilattice_raw():
    return {
        "id": "E2",
        "vertices": ["*"],
        "arrows": [
            {"id": "1", "src": "*", "rng": "*"},
            {"id": "e", "src": "*", "rng": "*"},
        ],
        "prod": [["1", "1", "1"], ["1", "e", "e"], ["e", "1", "e"], ["e", "e", "e"]],
        "inv": {"1": "1", "e": "e"},
    }


def pair_groupoid_raw():
    points = ("1", "2")

    def name(i, j):
        return f"({i},{j})"

    return {
        "id": "P2",
        "vertices": list(points),
        "arrows": [
            {"id": name(i, j), "src": j, "rng": i} for i in points for j in points
        ],
        "prod": [
            [name(i, j), name(j, k), name(i, k)]
            for i in points for j in points for k in points
        ],
        "inv": {name(i, j): name(j, i) for i in points for j in points},
    }


def klein_four_raw():
    table = {
        ("e", "e"): "e", ("e", "a"): "a", ("e", "b"): "b", ("e", "c"): "c",
        ("a", "e"): "a", ("a", "a"): "e", ("a", "b"): "c", ("a", "c"): "b",
        ("b", "e"): "b", ("b", "a"): "c", ("b", "b"): "e", ("b", "c"): "a",
        ("c", "e"): "c", ("c", "a"): "b", ("c", "b"): "a", ("c", "c"): "e",
    }
    return {
        "id": "V4",
        "vertices": ["*"],
        "arrows": [{"id": x, "src": "*", "rng": "*"} for x in "eabc"],
        "prod": [[x, y, table[(x, y)]] for (x, y) in table],
        "inv": {x: x for x in "eabc"},
    }


def unit_groupoid_raw(labels=("x", "y")):
    return {
        "id": "X",
        "vertices": list(labels),
        "arrows": [{"id": f"1{x}", "src": x, "rng": x} for x in labels],
        "prod": [[f"1{x}", f"1{x}", f"1{x}"] for x in labels],
        "inv": {f"1{x}": f"1{x}" for x in labels},
    }


def with_product_entry(raw, a, b, value):
    """Copy of the stanza with the (a,b) product entry replaced by value."""
    out = copy.deepcopy(raw)
    out["prod"] = [e for e in out["prod"] if not (e[0] == a and e[1] == b)]
    out["prod"].append([a, b, value])
    return out


def without_product_entry(raw, a, b):
    out = copy.deepcopy(raw)
    out["prod"] = [e for e in out["prod"] if not (e[0] == a and e[1] == b)]
    return out


def with_inverse_entry(raw, s, value):
    out = copy.deepcopy(raw)
    out["inv"] = dict(out["inv"])
    out["inv"][s] = value
    return out


def semilattice_on_points_action():
    """The running example: {1,e} acting on the two-point unit groupoid."""
    return {
        "1": {"dom": ["1x", "1y"], "img": ["1x", "1y"]},
        "e": {"dom": ["1x"], "img": ["1x"]},
    }


def upper_triangular_f2_ring_spec():
    """The 8-element ring of upper triangular 2x2 matrices over F2: the
    smallest non-commutative unital ring, as a finite-table literal."""
    elems = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    idx = {e: i for i, e in enumerate(elems)}

    def add(x, y):
        return tuple((p + q) % 2 for p, q in zip(x, y))

    def mul(x, y):
        a1, b1, c1 = x
        a2, b2, c2 = y
        return ((a1 * a2) % 2, (a1 * b2 + b1 * c2) % 2, (c1 * c2) % 2)

    names = ["".join(map(str, e)) for e in elems]
    return {
        "kind": "table",
        "elements": names,
        "add": [[idx[add(x, y)] for y in elems] for x in elems],
        "mul": [[idx[mul(x, y)] for y in elems] for x in elems],
        "zero": idx[(0, 0, 0)],
        "one": idx[(1, 0, 1)],
    }
