"""Action frames: finite world sets carrying a right action of the
substitution monoid, plus the complex-algebra / atom-frame duality.

The action of a composite runs factors left to right over worlds (the
anti-homomorphism dual to the right point action): the table of sigma∘tau
sends w to table_tau[table_sigma[w]].  Substitution in the complex algebra
is action preimage: S_g(X) = {w : act_g(w) in X}.
"""

import itertools
import random
from dataclasses import dataclass, field

from .monoid import (
    GenSym,
    canonical_word,
    compose,
    enumerate_monoid,
    generators,
    has_diagonals,
    monoid_table,
    normalize_mode,
    apply_point,
)
from .setalg import point_coords, point_index


class Frame:
    def __init__(self, n, mode, num_worlds, action, diag=None):
        self.n = n
        self.mode = normalize_mode(mode)
        self.num_worlds = num_worlds
        self.action = {}
        needed = generators(n, self.mode)
        for g in needed:
            if g not in action:
                raise ValueError("frame action is missing %s" % g.token())
            tab = tuple(action[g])
            if len(tab) != num_worlds or any(
                not (0 <= w < num_worlds) for w in tab
            ):
                raise ValueError("bad action table for %s" % g.token())
            self.action[g] = tab
        self.diag = None
        if has_diagonals(self.mode):
            self.diag = {}
            diag = diag or {}
            norm = {}
            for (i, j), mask in diag.items():
                if i == j:
                    continue
                key = (min(i, j), max(i, j))
                if key in norm and norm[key] != mask:
                    raise ValueError("conflicting diagonal markings for %r" % (key,))
                norm[key] = mask
            for i in range(n):
                for j in range(i + 1, n):
                    if (i, j) not in norm:
                        raise ValueError("missing diagonal marking d(%d,%d)" % (i, j))
                    self.diag[(i, j)] = norm[(i, j)]
        self._tau_tables = {}

    def act(self, g):
        return self.action[g]

    def act_word(self, syms):
        tab = list(range(self.num_worlds))
        for g in syms:
            gt = self.action[g]
            tab = [gt[w] for w in tab]
        return tuple(tab)

    def act_tau(self, tau):
        cached = self._tau_tables.get(tau)
        if cached is None:
            cached = self.act_word(canonical_word(tau, self.mode))
            self._tau_tables[tau] = cached
        return cached

    def diag_mask(self, i, j):
        if self.diag is None:
            raise ValueError("frame has no diagonal markings")
        if i == j:
            return (1 << self.num_worlds) - 1
        return self.diag[(min(i, j), max(i, j))]

    def __repr__(self):
        return "Frame(n=%d, mode=%s, worlds=%d)" % (self.n, self.mode, self.num_worlds)


@dataclass
class FrameReport:
    ok: bool
    failures: list = field(default_factory=list)
    pairs_checked: int = 0

    def __bool__(self):
        return self.ok


def frame_check(frame, budget=2 * 10**6, max_failures=10):
    """Semantic coherence: the generated action must be a genuine right
    action, checked over every pair of monoid elements; diagonal markings
    must satisfy their correspondents."""
    n, mode, m = frame.n, frame.mode, frame.num_worlds
    monoid = enumerate_monoid(n, mode)
    if len(monoid) ** 2 * max(m, 1) > budget:
        raise ValueError("coherence check exceeds budget")
    acts = {tau: frame.act_tau(tau) for tau in monoid}
    failures = []
    pairs = 0
    # canonical words may spell a generator through other generators, so
    # the raw table must agree with the derived one or it escapes checking
    for g in generators(n, mode):
        if frame.act(g) != acts[g.tr(n)]:
            failures.append(("generator", g.token()))
    if len(failures) >= max_failures:
        return FrameReport(False, failures, pairs)
    for sigma in monoid:
        a_s = acts[sigma]
        for tau in monoid:
            a_t = acts[tau]
            expect = acts[compose(sigma, tau)]
            pairs += 1
            for w in range(m):
                if expect[w] != a_t[a_s[w]]:
                    failures.append(
                        ("coherence", tuple(sigma.map), tuple(tau.map), w)
                    )
                    break
            if len(failures) >= max_failures:
                return FrameReport(False, failures, pairs)
    if frame.diag is not None:
        full = (1 << m) - 1
        for i in range(n):
            for j in range(n):
                dij = frame.diag_mask(i, j)
                for k in range(n):
                    both = frame.diag_mask(i, k) & frame.diag_mask(k, j)
                    if both & ~dij:
                        failures.append(("diag-chain", i, k, j))
        for g in generators(n, mode):
            gt = g.tr(n)
            tab = frame.act(g)
            for i in range(n):
                for j in range(i, n):
                    dij = frame.diag_mask(i, j)
                    pre = 0
                    for w in range(m):
                        if dij >> tab[w] & 1:
                            pre |= 1 << w
                    if pre != frame.diag_mask(gt(i), gt(j)):
                        failures.append(("diag-subst", g.token(), i, j))
        failures = failures[:max_failures]
    return FrameReport(not failures, failures, pairs)


def point_frame(n, k, mode="full"):
    """The frame of all points of ⁿk under the right generator action."""
    mode = normalize_mode(mode)
    num = k**n
    coords = [point_coords(p, n, k) for p in range(num)]
    action = {}
    for g in generators(n, mode):
        gt = g.tr(n)
        action[g] = tuple(point_index(apply_point(q, gt), k) for q in coords)
    diag = None
    if has_diagonals(mode):
        diag = {}
        for i in range(n):
            for j in range(i + 1, n):
                mask = 0
                for p, q in enumerate(coords):
                    if q[i] == q[j]:
                        mask |= 1 << p
                diag[(i, j)] = mask
    return Frame(n, mode, num, action, diag)


class ComplexAlgebra:
    """Cm(F): all subsets of the frame's worlds, substitution by preimage."""

    def __init__(self, frame):
        self.frame = frame
        self.n = frame.n
        self.mode = frame.mode
        self.num_worlds = frame.num_worlds
        self.zero = 0
        self.one = (1 << frame.num_worlds) - 1
        self.unit = self.one

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def compl(self, a):
        return self.one ^ a

    def subst(self, g, x):
        tab = self.frame.act(g) if isinstance(g, GenSym) else self.frame.act_tau(g)
        out = 0
        for w in range(self.num_worlds):
            if x >> tab[w] & 1:
                out |= 1 << w
        return out

    def diag(self, i, j):
        return self.frame.diag_mask(i, j)

    def size(self):
        return 1 << self.num_worlds

    def atoms(self):
        return [1 << w for w in range(self.num_worlds)]

    def elements(self, limit=20):
        if self.num_worlds > limit:
            raise ValueError(
                "too many elements to enumerate (2^%d)" % self.num_worlds
            )
        return list(range(1 << self.num_worlds))

    def random_element(self, rng):
        if self.num_worlds == 0:
            return 0
        return rng.getrandbits(self.num_worlds)

    def __repr__(self):
        return "ComplexAlgebra(%r)" % (self.frame,)


def complex_algebra(frame):
    return ComplexAlgebra(frame)


def atom_frame(algebra):
    """The dual frame on the atoms: act_g(x) is the unique atom y with
    x ≤ s_g(y).  Returns (frame, atoms in world order)."""
    ats = algebra.atoms()
    idx = {a: i for i, a in enumerate(ats)}
    action = {}
    for g in generators(algebra.n, algebra.mode):
        tab = []
        for x in ats:
            hits = [y for y in ats if algebra.meet(x, algebra.subst(g, y)) == x]
            if len(hits) != 1:
                raise ValueError(
                    "atom action not functional under %s (%d candidates)"
                    % (g.token(), len(hits))
                )
            tab.append(idx[hits[0]])
        action[g] = tuple(tab)
    diag = None
    if has_diagonals(algebra.mode):
        diag = {}
        for i in range(algebra.n):
            for j in range(i + 1, algebra.n):
                dij = algebra.diag(i, j)
                mask = 0
                for w, x in enumerate(ats):
                    if algebra.meet(x, dij) == x:
                        mask |= 1 << w
                diag[(i, j)] = mask
    return Frame(algebra.n, algebra.mode, len(ats), action, diag), ats


@dataclass
class Equivariant:
    """A world map between frames of the same signature."""

    source: Frame
    target: Frame
    mapping: tuple


def check_equivariant(em):
    """Failures of act-compatibility (and diagonal preservation, both ways)."""
    failures = []
    src, tgt, f = em.source, em.target, em.mapping
    for g in generators(src.n, src.mode):
        ts, tt = src.act(g), tgt.act(g)
        for w in range(src.num_worlds):
            if f[ts[w]] != tt[f[w]]:
                failures.append(("action", g.token(), w))
    if src.diag is not None and tgt.diag is not None:
        for i in range(src.n):
            for j in range(i + 1, src.n):
                ds, dt = src.diag_mask(i, j), tgt.diag_mask(i, j)
                for w in range(src.num_worlds):
                    if bool(ds >> w & 1) != bool(dt >> f[w] & 1):
                        failures.append(("diag", i, j, w))
    return failures


def disjoint_union(frames):
    """One frame on the tagged union of worlds; returns (frame, offsets)."""
    if not frames:
        raise ValueError("need at least one frame")
    n, mode = frames[0].n, frames[0].mode
    if any(f.n != n or f.mode != mode for f in frames):
        raise ValueError("frames must share dimension and mode")
    offsets = []
    total = 0
    for f in frames:
        offsets.append(total)
        total += f.num_worlds
    action = {}
    for g in generators(n, mode):
        tab = []
        for f, off in zip(frames, offsets):
            tab.extend(off + w for w in f.act(g))
        action[g] = tuple(tab)
    diag = None
    if has_diagonals(mode):
        diag = {}
        for i in range(n):
            for j in range(i + 1, n):
                mask = 0
                for f, off in zip(frames, offsets):
                    mask |= f.diag_mask(i, j) << off
                diag[(i, j)] = mask
    return Frame(n, mode, total, action, diag), offsets


def insep_zigzag(frame_b, frame_c, label_b, label_c):
    """The pullback frame: worlds are pairs (u, v) with matching labels,
    action coordinatewise.  Returns (frame, world pairs).  Raises if the
    pair set is not closed under the action (the labels were not dual maps
    over a common base)."""
    n, mode = frame_b.n, frame_b.mode
    if frame_c.n != n or frame_c.mode != mode:
        raise ValueError("frames must share dimension and mode")
    worlds = [
        (u, v)
        for u in range(frame_b.num_worlds)
        for v in range(frame_c.num_worlds)
        if label_b[u] == label_c[v]
    ]
    index = {uv: w for w, uv in enumerate(worlds)}
    action = {}
    for g in generators(n, mode):
        tb, tc = frame_b.act(g), frame_c.act(g)
        tab = []
        for u, v in worlds:
            img = (tb[u], tc[v])
            if img not in index:
                raise ValueError(
                    "pair set not closed under %s at %r" % (g.token(), (u, v))
                )
            tab.append(index[img])
        action[g] = tuple(tab)
    return Frame(n, mode, len(worlds), action), worlds


def _dual_atom_map(sub, big, embed):
    """For each atom u of `big`, the unique atom a of `sub` with u ≤ embed(a)."""
    sub_atoms = sub.atoms()
    out = []
    for u in big.atoms():
        hits = [idx for idx, a in enumerate(sub_atoms)
                if big.meet(u, embed(a)) == u]
        if len(hits) != 1:
            raise ValueError("not an embedding: atom %r lies under %d images"
                             % (u, len(hits)))
        out.append(hits[0])
    return out


def _hom_failures(source, target, hmap):
    """Exhaustive homomorphism check for small enumerable algebras."""
    els = source.elements()
    imgs = {z: hmap(z) for z in els}
    bad = []
    if imgs[source.zero] != target.zero or imgs[source.one] != target.one:
        bad.append(("bounds",))
    for x in els:
        if hmap(source.compl(x)) != target.compl(imgs[x]):
            bad.append(("compl", x))
        for g in generators(source.n, source.mode):
            if hmap(source.subst(g, x)) != target.subst(g, imgs[x]):
                bad.append(("subst", g.token(), x))
        for y in els:
            if hmap(source.meet(x, y)) != target.meet(imgs[x], imgs[y]):
                bad.append(("meet", x, y))
    injective = len(set(imgs.values())) == len(els)
    return bad, injective


def superamalgam(A, B, C, f, h):
    """Amalgamate B and C over their common subalgebra A.

    f: A→B and h: A→C must be injective homomorphisms (verified).  The
    amalgam D is the complex algebra of the pullback of the dual atom maps
    At B → At A ← At C, with m(b) = {(u,v) : u ≤ b} and k(c) symmetric.
    Returns (D, m, k, report); the report carries the commuting square,
    injectivity, and the order-interpolation biconditional
    m(b) ≤ k(c) ⇔ ∃a: b ≤ f(a) and h(a) ≤ c over every pair.
    """
    for name, src, tgt, emb in (("f", A, B, f), ("h", A, C, h)):
        bad, injective = _hom_failures(src, tgt, emb)
        if bad or not injective:
            raise ValueError("%s is not an embedding: %r" % (name, bad[:3]))

    frame_b, atoms_b = atom_frame(B)
    frame_c, atoms_c = atom_frame(C)
    label_b = _dual_atom_map(A, B, f)
    label_c = _dual_atom_map(A, C, h)
    frame_d, pairs = insep_zigzag(frame_b, frame_c, label_b, label_c)
    D = ComplexAlgebra(frame_d)

    def m(b):
        out = 0
        for w, (u, v) in enumerate(pairs):
            if B.meet(atoms_b[u], b) == atoms_b[u]:
                out |= 1 << w
        return out

    def k(c):
        out = 0
        for w, (u, v) in enumerate(pairs):
            if C.meet(atoms_c[v], c) == atoms_c[v]:
                out |= 1 << w
        return out

    report = {"worlds": len(pairs), "failures": []}
    a_els = A.elements()
    report["square_commutes"] = all(m(f(z)) == k(h(z)) for z in a_els)

    m_bad, m_inj = _hom_failures(B, D, m)
    k_bad, k_inj = _hom_failures(C, D, k)
    report["m_homomorphism"] = not m_bad
    report["k_homomorphism"] = not k_bad
    report["m_injective"] = m_inj
    report["k_injective"] = k_inj
    report["failures"].extend(m_bad[:3] + k_bad[:3])

    f_imgs = [(f(z), h(z)) for z in a_els]
    supap = True
    pairs_checked = 0
    for b in B.elements():
        mb = m(b)
        for c in C.elements():
            kc = k(c)
            pairs_checked += 1
            below = (mb & ~kc) == 0
            witnessed = any(
                B.meet(b, fa) == b and C.meet(ha, c) == ha
                for fa, ha in f_imgs
            )
            if below != witnessed:
                supap = False
                if len(report["failures"]) < 10:
                    report["failures"].append(("interpolation", b, c))
    report["supap"] = supap
    report["pairs_checked"] = pairs_checked
    report["pass"] = (report["square_commutes"] and supap and m_inj and k_inj
                      and not m_bad and not k_bad)
    return D, m, k, report


def random_coherent_frame(n, mode="full", max_worlds=8, rng=None):
    """A random quotient of (a disjoint union of copies of) the monoid's
    regular right action — coherent by construction."""
    mode = normalize_mode(mode)
    if has_diagonals(mode):
        raise ValueError("random diagonal frames are not supported")
    rng = rng or random.Random()
    monoid = enumerate_monoid(n, mode)
    pos = {tau: i for i, tau in enumerate(monoid)}
    gens = generators(n, mode)
    gtabs = [
        [pos[compose(tau, g.tr(n))] for tau in monoid] for g in gens
    ]
    pieces = []
    worlds_left = rng.randint(1, max_worlds)
    while worlds_left > 0:
        target = rng.randint(1, worlds_left)
        pieces.append(_quotient_of_regular(monoid, gtabs, gens, n, mode, target, rng))
        worlds_left -= pieces[-1].num_worlds
        if rng.random() < 0.5:
            break
    frame, _ = disjoint_union(pieces)
    perm = list(range(frame.num_worlds))
    rng.shuffle(perm)
    action = {
        g: tuple(perm[frame.act(g)[w]] for w in _inverse(perm))
        for g in generators(n, mode)
    }
    return Frame(n, mode, frame.num_worlds, action)


def _inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def _quotient_of_regular(monoid, gtabs, gens, n, mode, target_classes, rng):
    size = len(monoid)
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            parent[ry] = rx
            for tab in gtabs:
                queue.append((tab[rx], tab[ry]))

    classes = len({find(x) for x in range(size)})
    while classes > target_classes:
        union(rng.randrange(size), rng.randrange(size))
        classes = len({find(x) for x in range(size)})
    roots = sorted({find(x) for x in range(size)})
    world = {r: i for i, r in enumerate(roots)}
    action = {}
    for g, tab in zip(gens, gtabs):
        action[g] = tuple(world[find(tab[r])] for r in roots)
    return Frame(n, mode, len(roots), action)


def frame_to_json(frame):
    data = {
        "n": frame.n,
        "mode": frame.mode,
        "worlds": frame.num_worlds,
        "action": {g.token(): list(frame.act(g)) for g in sorted(
            frame.action, key=lambda s: s.token())},
    }
    if frame.diag is not None:
        data["diag"] = {
            "%d,%d" % key: [w for w in range(frame.num_worlds) if mask >> w & 1]
            for key, mask in sorted(frame.diag.items())
        }
    return data


def frame_from_json(data):
    from .monoid import gensym_from_token

    n = int(data["n"])
    mode = normalize_mode(data.get("mode", "full"))
    m = int(data["worlds"])
    action = {
        gensym_from_token(tok): tuple(tab) for tok, tab in data["action"].items()
    }
    diag = None
    if "diag" in data:
        diag = {}
        for key, worlds in data["diag"].items():
            i, j = (int(x) for x in key.split(","))
            mask = 0
            for w in worlds:
                mask |= 1 << w
            diag[(i, j)] = mask
    return Frame(n, mode, m, action, diag)
