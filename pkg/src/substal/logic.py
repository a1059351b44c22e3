"""Satisfiability and validity for the point-algebra semantics.

A formula is evaluated at a point q of a square unit; each substitution
modality moves the point by the right action, so the truth of a formula at
q unfolds into a propositional formula over (variable, reached point)
atoms.  Which points are reached — and which diagonal tests hold — depends
only on the coincidence pattern of q's coordinates, so satisfiability
reduces to one propositional check per partition of the coordinate set.
Witnesses are rebuilt as concrete models and re-verified.
"""

from dataclasses import dataclass

from .monoid import apply_point, normalize_mode, num_blocks, partitions
from .terms import (Compl, Diag, Join, Meet, One, Sub, Var, Zero, eval_term,
                    iff, variables)
from .setalg import point_index
from .frames import ComplexAlgebra, point_frame

TRUE = ("true",)
FALSE = ("false",)


def unfold(term, point, n, mode="full"):
    """Propositional unfolding of `term` at the tuple `point`."""
    if isinstance(term, Var):
        return ("atom", (term.index, point))
    if isinstance(term, Zero):
        return FALSE
    if isinstance(term, One):
        return TRUE
    if isinstance(term, Meet):
        return ("and", unfold(term.left, point, n, mode),
                unfold(term.right, point, n, mode))
    if isinstance(term, Join):
        return ("or", unfold(term.left, point, n, mode),
                unfold(term.right, point, n, mode))
    if isinstance(term, Compl):
        return ("not", unfold(term.arg, point, n, mode))
    if isinstance(term, Sub):
        moved = apply_point(point, term.sym.tr(n))
        return unfold(term.arg, moved, n, mode)
    if isinstance(term, Diag):
        return TRUE if point[term.i] == point[term.j] else FALSE
    raise TypeError("not a term: %r" % (term,))


def prop_atoms(f):
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g[0] == "atom":
            out.add(g[1])
        elif g[0] == "not":
            stack.append(g[1])
        elif g[0] in ("and", "or"):
            stack.append(g[1])
            stack.append(g[2])
    return out


def _simplify(f, key, value):
    """Partially evaluate one atom and fold constants."""
    kind = f[0]
    if kind == "atom":
        if f[1] == key:
            return TRUE if value else FALSE
        return f
    if kind == "not":
        s = _simplify(f[1], key, value)
        if s == TRUE:
            return FALSE
        if s == FALSE:
            return TRUE
        return ("not", s)
    if kind in ("and", "or"):
        a = _simplify(f[1], key, value)
        b = _simplify(f[2], key, value)
        if kind == "and":
            if a == FALSE or b == FALSE:
                return FALSE
            if a == TRUE:
                return b
            if b == TRUE:
                return a
        else:
            if a == TRUE or b == TRUE:
                return TRUE
            if a == FALSE:
                return b
            if b == FALSE:
                return a
        return (kind, a, b)
    return f


def _first_atom(f):
    if f[0] == "atom":
        return f[1]
    if f[0] == "not":
        return _first_atom(f[1])
    if f[0] in ("and", "or"):
        return _first_atom(f[1]) or _first_atom(f[2])
    return None


def prop_sat(f):
    """Splitting solver; returns a satisfying {atom: bool} or None."""

    def go(g, asg):
        if g == TRUE:
            return asg
        if g == FALSE:
            return None
        a = _first_atom(g)
        for value in (True, False):
            found = go(_simplify(g, a, value), {**asg, a: value})
            if found is not None:
                return found
        return None

    # fold constants before the first split
    g = _simplify(f, None, False)
    return go(g, {})


@dataclass
class Model:
    frame: object
    valuation: dict        # var index -> bitmask over worlds

    def algebra(self):
        return ComplexAlgebra(self.frame)


def model_check(model, term, world):
    """Truth of `term` at `world` under the model's valuation.

    Variables the valuation does not mention denote the empty set.
    """
    valuation = dict(model.valuation)
    for v in variables(term):
        valuation.setdefault(v, 0)
    value = eval_term(model.algebra(), term, valuation)
    return bool(value >> world & 1)


def _witness_model(n, mode, point, base, assignment):
    """Rebuild a kernel witness as a concrete point model."""
    frame = point_frame(n, base, mode)
    valuation = {}
    touched = set()
    for (var, q), value in assignment.items():
        touched.add(q)
        if value:
            valuation[var] = valuation.get(var, 0) | (1 << point_index(q, base))
    model = Model(frame, valuation)
    world = point_index(point, base)
    return model, world, touched


def satisfiable(term, n, mode="full"):
    """Decide satisfiability over the square point algebras of this mode.

    Returns (verdict, witness).  The witness carries the base, the
    satisfying point, the valuation, and the set of points the decision
    actually touched; it has already been re-checked against a concrete
    model when returned.
    """
    mode = normalize_mode(mode)
    for part in partitions(n):
        base = max(1, num_blocks(part))
        point = tuple(part)
        f = unfold(term, point, n, mode)
        assignment = prop_sat(f)
        if assignment is None:
            continue
        model, world, touched = _witness_model(n, mode, point, base, assignment)
        for v in variables(term):
            model.valuation.setdefault(v, 0)
        if not model_check(model, term, world):
            raise AssertionError(
                "internal: witness failed re-verification at %r" % (point,))
        witness = {
            "k": base,
            "point": list(point),
            "world": world,
            "valuation": {"p%d" % v: _points_of(mask) for v, mask in
                          sorted(model.valuation.items())},
            "partition": list(part),
            "touched": sorted(touched),
        }
        return True, witness
    return False, None


def _points_of(mask):
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


def valid(term, n, mode="full"):
    """Validity over the mode's square point algebras.

    Returns (verdict, counterexample-witness or None): the witness, when
    present, is a satisfying model of the negation.
    """
    sat, witness = satisfiable(Compl(term), n, mode)
    return (not sat), witness


def equation_valid(eq, n, mode="full"):
    """An equation holds identically iff lhs ↔ rhs is valid."""
    return valid(iff(eq.lhs, eq.rhs), n, mode)
