"""Transformations of {0..n-1}, substitution generators, words, kernels.

Generator tokens use one bracket convention everywhere: ``s[i,j]`` is the
transposition exchanging i and j, ``s[i|j]`` is the replacement sending i to
j and fixing everything else.  Composition is ``(sigma*tau)(i) =
sigma(tau(i))``, and points act on the right: ``(q.tau)(i) = q(tau(i))``,
so applying a composite equals applying its factors left to right.
"""

import re
from collections import deque
from functools import lru_cache

DIM_LIMIT = 6

MODES = ("replacements", "transpositions", "full", "full_diagonal")

_MODE_ALIASES = {
    "pinter": "replacements",
    "diag": "full_diagonal",
    "diagonal": "full_diagonal",
}


def normalize_mode(mode):
    mode = _MODE_ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ValueError("unknown mode: %r" % (mode,))
    return mode


def has_diagonals(mode):
    return normalize_mode(mode) == "full_diagonal"


class NotGenerated(Exception):
    """Raised when a transformation lies outside the mode's monoid."""

    def __init__(self, tau, mode):
        self.tau = tau
        self.mode = mode
        super().__init__("%r is not generated in mode %s" % (tau, mode))


class Transformation:
    """A map {0..n-1} -> {0..n-1}, stored as the tuple of its values."""

    __slots__ = ("map",)

    def __init__(self, values):
        self.map = tuple(values)

    @property
    def n(self):
        return len(self.map)

    def __call__(self, i):
        return self.map[i]

    def is_permutation(self):
        return len(set(self.map)) == len(self.map)

    def __eq__(self, other):
        return isinstance(other, Transformation) and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def __lt__(self, other):
        return self.map < other.map

    def __repr__(self):
        return "Transformation(%r)" % (list(self.map),)


def identity(n):
    return Transformation(range(n))


def compose(sigma, tau):
    """compose(sigma, tau)(i) = sigma(tau(i))."""
    return Transformation(sigma.map[x] for x in tau.map)


def apply_point(q, tau):
    """Right action of tau on a coordinate tuple: (q.tau)(i) = q(tau(i))."""
    return tuple(q[x] for x in tau.map)


class GenSym:
    """A single substitution generator symbol.

    kind is "transposition" (token s[i,j], i<j after normalization) or
    "replacement" (token s[i|j]: i is the moved index, j the value it takes).
    """

    __slots__ = ("kind", "i", "j")

    def __init__(self, kind, i, j):
        if i == j:
            raise ValueError("generator indices must differ")
        if kind == "transposition" and i > j:
            i, j = j, i
        if kind not in ("transposition", "replacement"):
            raise ValueError("bad generator kind: %r" % (kind,))
        self.kind = kind
        self.i = i
        self.j = j

    def token(self):
        sep = "," if self.kind == "transposition" else "|"
        return "s[%d%s%d]" % (self.i, sep, self.j)

    def tr(self, n):
        """The transformation this symbol names, at dimension n."""
        if not (0 <= self.i < n and 0 <= self.j < n):
            raise ValueError("%s is out of range for n=%d" % (self.token(), n))
        values = list(range(n))
        if self.kind == "transposition":
            values[self.i], values[self.j] = self.j, self.i
        else:
            values[self.i] = self.j
        return Transformation(values)

    def __eq__(self, other):
        return (
            isinstance(other, GenSym)
            and (self.kind, self.i, self.j) == (other.kind, other.i, other.j)
        )

    def __hash__(self):
        return hash((self.kind, self.i, self.j))

    def __repr__(self):
        return self.token()


def swap(i, j):
    return GenSym("transposition", i, j)


def repl(i, j):
    return GenSym("replacement", i, j)


_TOKEN_RE = re.compile(r"s\[(\d+)([,|])(\d+)\]")


def gensym_from_token(text):
    m = _TOKEN_RE.fullmatch(text.strip())
    if m is None:
        raise ValueError("bad generator token: %r" % (text,))
    i, sep, j = int(m.group(1)), m.group(2), int(m.group(3))
    return swap(i, j) if sep == "," else repl(i, j)


def mode_allows(mode, sym):
    mode = normalize_mode(mode)
    if mode == "replacements":
        return sym.kind == "replacement"
    if mode == "transpositions":
        return sym.kind == "transposition"
    return True


def generators(n, mode):
    """All generator symbols of the given mode at dimension n, fixed order."""
    mode = normalize_mode(mode)
    gens = []
    if mode in ("transpositions", "full", "full_diagonal"):
        gens.extend(swap(i, j) for i in range(n) for j in range(i + 1, n))
    if mode in ("replacements", "full", "full_diagonal"):
        gens.extend(repl(i, j) for i in range(n) for j in range(n) if i != j)
    return gens


def hat(syms, n):
    """Fold a word of generator symbols into one transformation.

    hat(g1 g2 ... gm) = g1 * g2 * ... * gm, so a point traverses the word
    left to right: apply_point(q, hat(w)) applies g1 first.
    """
    acc = identity(n)
    for g in syms:
        acc = compose(acc, g.tr(n))
    return acc


def word_equiv(w1, w2, n):
    return hat(w1, n) == hat(w2, n)


def parse_word(text, n, mode):
    """Parse a whitespace-separated word of generator tokens."""
    syms = []
    for piece in text.split():
        g = gensym_from_token(piece)
        if not mode_allows(mode, g):
            raise ValueError("%s is not allowed in mode %s" % (g.token(), mode))
        g.tr(n)  # range check
        syms.append(g)
    return tuple(syms)


def format_word(syms):
    return " ".join(g.token() for g in syms)


@lru_cache(maxsize=None)
def monoid_table(n, mode, limit=DIM_LIMIT):
    """BFS word table: every reachable transformation -> a shortest word."""
    mode = normalize_mode(mode)
    if limit is not None and n > limit:
        raise ValueError("dimension %d exceeds limit %d" % (n, limit))
    gens = tuple(generators(n, mode))
    gen_trs = [g.tr(n) for g in gens]
    start = identity(n)
    words = {start: ()}
    queue = deque([start])
    while queue:
        tau = queue.popleft()
        base = words[tau]
        for g, gt in zip(gens, gen_trs):
            nxt = compose(tau, gt)
            if nxt not in words:
                words[nxt] = base + (g,)
                queue.append(nxt)
    return words


def enumerate_monoid(n, mode, limit=DIM_LIMIT):
    """All transformations generated by the mode's symbols, BFS order."""
    return list(monoid_table(n, normalize_mode(mode), limit))


def _perm_cycles_word(pi):
    # each cycle (c0 c1 ... ck), c0 minimal, becomes s[c0,c1] s[c1,c2] ...
    syms = []
    seen = set()
    for start in range(pi.n):
        if start in seen or pi.map[start] == start:
            seen.add(start)
            continue
        cycle = [start]
        x = pi.map[start]
        while x != start:
            cycle.append(x)
            x = pi.map[x]
        seen.update(cycle)
        for a, b in zip(cycle, cycle[1:]):
            syms.append(swap(a, b))
    return syms


def canonical_word(tau, mode):
    """A canonical word over the mode's generators evaluating to tau.

    Transposition mode uses the cycle decomposition.  Full mode peels off
    one replacement per colliding coordinate pair (always choosing the
    least colliding pair and the least value missing from the image) until
    a permutation remains.  Replacement mode looks the word up in the BFS
    table of the generated monoid.  Raises NotGenerated when tau is not in
    the mode's monoid.
    """
    mode = normalize_mode(mode)
    n = tau.n
    if mode == "transpositions":
        if not tau.is_permutation():
            raise NotGenerated(tau, mode)
        return tuple(_perm_cycles_word(tau))
    if mode == "replacements":
        try:
            return monoid_table(n, mode)[tau]
        except KeyError:
            raise NotGenerated(tau, mode) from None
    values = list(tau.map)
    peeled = []
    while len(set(values)) < len(values):
        pair = next(
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if values[i] == values[j]
        )
        missing = min(set(range(n)) - set(values))
        peeled.append(repl(pair[0], pair[1]))
        values[pair[0]] = missing
    head = _perm_cycles_word(Transformation(values))
    return tuple(head) + tuple(reversed(peeled))


def partitions(n):
    """Kernel partitions of {0..n-1} as restricted growth strings.

    The string itself doubles as a representative point: coordinate i
    carries its block index, and the base is the number of blocks.
    """
    if n == 0:
        return [()]
    out = []

    def rec(prefix, mx):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in range(mx + 2):
            prefix.append(v)
            rec(prefix, max(mx, v))
            prefix.pop()

    rec([0], 0)
    return out


def num_blocks(rgs):
    return max(rgs) + 1 if rgs else 0
