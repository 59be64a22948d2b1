"""Corona-by-corona growth of face-homogeneous patches from a root.

The boundary of the patch grown so far is the cycle U_n. Every vertex on it
still owes r = valence - degree outward edges. The faces of the next corona
sit between cyclically consecutive outward edges: two edges of one vertex
bound a wedge, otherwise the face contains the run of boundary vertices from
one edge to the next. A face with a run of s vertices gets k - s new
vertices, and the valence word of σ read around it fixes their valences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclic import as_sequence, format_sequence, traversals

DEFAULT_MAX_FACES = 10**7


class SimulationError(Exception):
    pass


class Stuck(SimulationError):
    def __init__(self, message, corona=None, nonconcentric_at=None, patch=None):
        super().__init__(message)
        self.corona = corona
        self.nonconcentric_at = nonconcentric_at
        self.patch = patch


class PolicyRequired(SimulationError):
    pass


class BudgetExceeded(SimulationError):
    pass


# policies ------------------------------------------------------------------

class Policy:
    """Accretion policy: orders and vets the consistent placements."""

    name = "first"
    canonical = False

    def check(self, patch, touched):
        return True


class FirstChoice(Policy):
    name = "first"


class _Policy4468(Policy):
    canonical = True

    @staticmethod
    def off_ray(patch, v):
        val = patch.valence
        return [val[u] for u in patch.adj[v] if val[u] != 4]


class T1(_Policy4468):
    """Each 4-valent vertex sees one 6 and one 8 off its ray of 4s."""

    name = "T1"

    def check(self, patch, touched):
        val = patch.valence
        adj = patch.adj
        for v in touched:
            if val[v] != 4:
                continue
            first = 0
            for u in adj[v]:
                x = val[u]
                if x != 4:
                    if first == 0:
                        first = x
                    elif first == x or first < 0:
                        return False
                    else:
                        first = -1
        return True


class T2(_Policy4468):
    """Each 4-valent vertex sees 6,6 or 8,8, alternating along its ray."""

    name = "T2"

    def __init__(self, root_off=8):
        # off-ray type of a 4-valent root vertex
        self.root_off = root_off

    def check(self, patch, touched):
        val = patch.valence
        adj = patch.adj

        def kind(w):
            # common off-ray valence (0 if none yet), or -1 if mixed/too many
            seen, n = 0, 0
            for u in adj[w]:
                x = val[u]
                if x != 4:
                    n += 1
                    if seen == 0:
                        seen = x
                    elif seen != x or n > 2:
                        return -1
            return seen

        if isinstance(patch.root, int) and val[0] == 4 and 0 in touched:
            if kind(0) not in (0, self.root_off):
                return False
        for v in touched:
            if val[v] != 4:
                continue
            mine = kind(v)
            if mine < 0:
                return False
            for u in adj[v]:
                if val[u] == 4:
                    theirs = kind(u)
                    if theirs < 0 or (mine and theirs == mine):
                        return False
        return True


POLICIES = {"first": FirstChoice, "default": FirstChoice, "T1": T1, "T2": T2}


def get_policy(policy):
    if policy is None:
        return None
    if isinstance(policy, Policy):
        return policy
    try:
        return POLICIES[policy]()
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}; choose from {sorted(POLICIES)}") from None


# profile -------------------------------------------------------------------

@dataclass
class CoronaProfile:
    faces: list = field(default_factory=list)
    vertices: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.faces)

    @property
    def tau(self):
        out, acc = [], 0
        for f in self.faces:
            acc += f
            out.append(acc)
        return out

    def tau_ratios(self):
        t = self.tau
        return [t[i + 1] / t[i] for i in range(len(t) - 1)]

    def face_ratios(self):
        f = self.faces
        return [f[i + 1] / f[i] for i in range(len(f) - 1)]

    def to_dict(self):
        return {
            "faces": list(self.faces),
            "vertices": list(self.vertices),
            "tau": self.tau,
            "tau_ratios": self.tau_ratios(),
            "face_ratios": self.face_ratios(),
        }


# patch graph ---------------------------------------------------------------

class PatchGraph:
    def __init__(self, sigma):
        self.sigma = as_sequence(sigma)
        self.valence = []
        self.corona = []
        self.adj = []
        self.faces = []
        self.face_corona = []
        self.boundary = []
        self.root = None
        self.complete_coronas = 0
        self.nonconcentric_at = None

    def add_vertex(self, val, corona):
        self.valence.append(val)
        self.corona.append(corona)
        self.adj.append([])
        return len(self.valence) - 1

    def add_edge(self, u, v):
        self.adj[u].append(v)
        self.adj[v].append(u)

    def remove_edge(self, u, v):
        self.adj[u].pop()
        self.adj[v].pop()

    def remaining(self, v):
        return self.valence[v] - len(self.adj[v])

    def edges(self):
        out = []
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    out.append((u, v))
        return sorted(out)

    def corona_vertices(self, n):
        return [v for v, c in enumerate(self.corona) if c == n]

    def to_dict(self):
        return {
            "sigma": list(self.sigma.terms),
            "root": self.root,
            "complete_coronas": self.complete_coronas,
            "vertices": [{"id": v, "valence": self.valence[v], "corona": self.corona[v]}
                         for v in range(len(self.valence))],
            "edges": [list(e) for e in self.edges()],
            "faces": [{"cycle": list(f), "corona": c} for f, c in zip(self.faces, self.face_corona)],
        }

    @classmethod
    def from_dict(cls, d):
        g = cls(d["sigma"])
        g.root = d.get("root")
        g.complete_coronas = d.get("complete_coronas", 0)
        for v in sorted(d["vertices"], key=lambda x: x["id"]):
            g.add_vertex(v["valence"], v["corona"])
        for u, v in d["edges"]:
            g.add_edge(u, v)
        for f in d["faces"]:
            g.faces.append(tuple(f["cycle"]))
            g.face_corona.append(f["corona"])
        return g


def check_concentric(g, n):
    """True iff the subgraph induced by U_n is a single cycle."""
    if g.nonconcentric_at is not None and n >= g.nonconcentric_at:
        return False
    if n > g.complete_coronas:
        raise ValueError(f"corona {n} is not complete (have {g.complete_coronas})")
    if n == 0:
        # a vertex root is not a cycle; a face root is
        return len(g.corona_vertices(0)) >= 3 and _is_cycle(g, set(g.corona_vertices(0)))
    return _is_cycle(g, set(g.corona_vertices(n)))


def _is_cycle(g, vs):
    if len(vs) < 3:
        return False
    for v in vs:
        if sum(1 for u in g.adj[v] if u in vs) != 2:
            return False
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if u in vs and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vs)


# growth --------------------------------------------------------------------

class _Words:
    """Valence words of σ indexed by (run prefix, last letter)."""

    def __init__(self, sigma):
        self.k = sigma.k
        self.words = sorted(set(traversals(sigma.terms)))
        self.cache = {}
        # valence runs that a future face can meet the boundary in
        self.runs = {t[:j] for t in self.words for j in range(1, self.k)}
        self.valences = sorted(set(sigma.terms))

    def candidates(self, run, last, closing=None, single=False):
        key = (run, last, closing, single)
        hit = self.cache.get(key)
        if hit is None:
            s = len(run)
            hit = []
            for t in self.words:
                if t[:s] != run or t[-1] != last:
                    continue
                if single and t[s] != last:
                    continue
                if closing is not None and t[s] != closing:
                    continue
                hit.append(t)
            self.cache[key] = hit
        return hit


def _faces_of_boundary(boundary, r):
    """Runs of the next corona's faces, as lists of boundary positions."""
    n = len(boundary)
    edges = [i for i in range(n) for _ in range(r[i])]
    if not edges:
        return []
    if n == 1:
        return [[0] for _ in edges]
    runs = []
    E = len(edges)
    for e in range(E):
        a = edges[e]
        b = edges[(e + 1) % E]
        if a == b and e + 1 < E:
            runs.append([a])
        elif b > a:
            runs.append(list(range(a, b + 1)))
        else:
            runs.append(list(range(a, n)) + list(range(0, b + 1)))
    return runs


def grow(s, root=None, n_coronas=4, policy=None, max_faces=DEFAULT_MAX_FACES,
         keep_faces=True, classification=None, counts_only=False):
    """Grow n_coronas coronas around a root.

    root is a vertex valence (int), "vertex" for the largest valence, or
    "face" to start from a single face. Returns (PatchGraph, CoronaProfile).
    With counts_only the last corona is counted from the boundary before it
    but not placed, so the patch holds n_coronas - 1 coronas.
    """
    sigma = as_sequence(s)
    k = sigma.k
    pol = get_policy(policy)
    if pol is None:
        if classification is None:
            from .classification import classify
            classification = classify(sigma)
        if classification.morphism == "Polymorphic":
            raise PolicyRequired(f"{sigma} is polymorphic; pass a policy (first, T1, T2)")
        pol = FirstChoice()
    words = _Words(sigma)
    g = PatchGraph(sigma)
    profile = CoronaProfile()

    if root is None or root == "vertex":
        root = max(sigma.terms)
    if root == "face":
        cyc = [g.add_vertex(v, 0) for v in sigma.terms]
        for i in range(k):
            g.add_edge(cyc[i], cyc[(i + 1) % k])
        g.faces.append(tuple(cyc))
        g.face_corona.append(0)
        g.boundary = cyc
        g.root = "face"
    else:
        root = int(root)
        if root not in sigma.terms:
            raise ValueError(f"root valence {root} does not occur in {sigma}")
        g.boundary = [g.add_vertex(root, 0)]
        g.root = root

    total = 0
    for n in range(1, n_coronas + 1):
        nxt = sum(g.remaining(v) for v in g.boundary)
        total += nxt
        if total > max_faces:
            raise BudgetExceeded(f"corona {n} would bring the patch to {total} faces (cap {max_faces})")
        if counts_only and n == n_coronas:
            profile.faces.append(nxt)
            profile.vertices.append(_next_corona_size(g, k))
            break
        try:
            _next_corona(g, words, pol, n, keep_faces)
        except Stuck as exc:
            exc.patch = g
            exc.corona = n
            if exc.nonconcentric_at is not None:
                g.nonconcentric_at = exc.nonconcentric_at
            raise
        g.complete_coronas = n
        profile.faces.append(nxt)
        profile.vertices.append(len(g.boundary))
    return g, profile


def _next_corona_size(g, k):
    # each face adds k - s - 1 vertices to the next boundary
    B = g.boundary
    runs = _faces_of_boundary(B, [g.remaining(v) for v in B])
    return sum(k - len(run) - 1 for run in runs)


def _next_corona(g, words, pol, n, keep_faces):
    k = words.k
    B = g.boundary
    r = [g.remaining(v) for v in B]
    runs = _faces_of_boundary(B, r)
    if not runs:
        raise Stuck(f"corona {n - 1} has no outward edges", nonconcentric_at=n - 1)
    for run in runs:
        s = len(run)
        if s >= k or len(set(run)) != len(run):
            raise Stuck(f"a face of corona {n} meets corona {n - 1} in {s} vertices "
                        f"(k={k}); the boundary is not a cycle", nonconcentric_at=n - 1)
    # process faces starting after one with at least two new vertices
    E = len(runs)
    last = next((i for i in range(E - 1, -1, -1) if k - len(runs[i]) >= 2), None)
    if last is None:
        raise Stuck(f"every face of corona {n} closes on a single new vertex", nonconcentric_at=n)
    order = [(last + 1 + i) % E for i in range(E)]
    runs = [runs[i] for i in order]
    run_vals = [tuple(g.valence[B[i]] for i in run) for run in runs]
    ends = [B[run[-1]] for run in runs]
    starts = [B[run[0]] for run in runs]

    nv0 = len(g.valence)
    failure = [None]
    for guess in sorted(set(g.sigma.terms)):
        x1 = g.add_vertex(guess, n)
        cnt = {x1: 1}
        ok = _place(g, words, pol, n, runs, run_vals, starts, ends, x1, cnt, failure)
        if ok is not None:
            new_faces, new_boundary, cnt = ok
            break
        # undo the starting vertex
        g.valence.pop()
        g.corona.pop()
        g.adj.pop()
    else:
        msg, nc = failure[0] or ("no consistent completion", None)
        raise Stuck(f"corona {n}: {msg}", nonconcentric_at=nc)
    if keep_faces:
        for run, tail in new_faces:
            if not isinstance(tail, tuple):
                tail = (tail,)
            g.faces.append(tuple(B[j] for j in run) + tail)
            g.face_corona.append(n)
    for v in B:
        if g.remaining(v) != 0:
            raise Stuck(f"vertex {v} left with {g.remaining(v)} unplaced edges")
    g.boundary = new_boundary
    assert len(g.valence) >= nv0


def _place(g, words, pol, n, runs, run_vals, starts, ends, x1, cnt, failure):
    """Depth-first placement of the faces of one corona, with undo."""
    k = words.k
    E = len(runs)
    # per level: (candidate list, index, undo record)
    stack = []
    faces = []
    boundary = [x1]
    cur_x = x1
    i = 0
    cands = None
    while True:
        if i == E:
            if _cyclic_runs_ok(g, boundary, words):
                return faces, boundary, cnt
            if failure[0] is None:
                failure[0] = ("the new boundary has a run no face can meet", None)
            cands, idx, undo, cur_x, rv = stack.pop()
            _undo(g, undo, cnt, boundary, faces)
            i -= 1
            continue
        if cands is None:
            rv = run_vals[i]
            s = len(rv)
            m = k - s
            closing = g.valence[x1] if (i == E - 1) else None
            cands = words.candidates(rv, g.valence[cur_x], closing, single=(m == 1))
            idx = 0
        else:
            idx += 1
        placed = False
        while idx < len(cands):
            t = cands[idx]
            undo = _apply(g, n, runs[i], rv, t, starts[i], ends[i], cur_x, x1, i == E - 1, cnt, boundary, faces,
                          words)
            if undo is None:
                if failure[0] is None:
                    failure[0] = (f"vertex of valence {g.valence[cur_x]} would exceed its valence", n)
                idx += 1
                continue
            touched = undo[5]
            if not pol.check(g, touched):
                _undo(g, undo, cnt, boundary, faces)
                if failure[0] is None:
                    failure[0] = ("policy rejects every placement", None)
                idx += 1
                continue
            stack.append((cands, idx, undo, cur_x, rv))
            cur_x = undo[4]
            placed = True
            break
        if placed:
            i += 1
            cands = None
            continue
        # backtrack
        if not stack:
            return None
        cands, idx, undo, cur_x, rv = stack.pop()
        _undo(g, undo, cnt, boundary, faces)
        i -= 1


def _apply(g, n, run, rv, t, a, b, cur_x, x1, is_last, cnt, boundary, faces, words):
    k = len(t)
    s = len(rv)
    adj = g.adj
    valence = g.valence
    if k - s == 1:
        if cnt[cur_x] + 1 > valence[cur_x] - 2:
            return None
        cnt[cur_x] += 1
        adj[b].append(cur_x)
        adj[cur_x].append(b)
        faces.append((run, cur_x))
        return ((), ((b, cur_x),), (cur_x,), 0, cur_x, (b, cur_x, a))
    # interior vertices in boundary order, from cur_x's side
    interior_vals = t[s + 1:k - 1][::-1]
    r_cur = valence[cur_x] - 2 - cnt[cur_x]
    if (r_cur == 0 or (len(boundary) > 2 and g.remaining(boundary[-2]) == 0)) \
            and not _runs_ok(g, boundary, cur_x, r_cur, interior_vals, words):
        return None
    corona = g.corona
    v0 = len(valence)
    chain = list(range(v0, v0 + len(interior_vals)))
    valence.extend(interior_vals)
    corona.extend([n] * len(interior_vals))
    adj.extend([] for _ in interior_vals)
    added_v = list(chain)
    if is_last:
        nxt = x1
    else:
        nxt = len(valence)
        valence.append(t[s])
        corona.append(n)
        adj.append([])
        added_v.append(nxt)
        cnt[nxt] = 1
    path = [cur_x] + chain + [nxt]
    added_e = list(zip(path, path[1:]))
    added_e.append((b, nxt))
    for u, v in added_e:
        adj[u].append(v)
        adj[v].append(u)
    faces.append((run, tuple(reversed(path))))
    bnd = len(chain)
    boundary.extend(chain)
    if not is_last:
        boundary.append(nxt)
        bnd += 1
    return (added_v, added_e, (), bnd, nxt, [a, b] + path)


def _runs_ok(g, boundary, cur_x, r_cur, interior_vals, words):
    """One-corona lookahead for the run of the next corona ending at or
    through cur_x. It starts at the last boundary vertex with outward edges
    and must be the start of some valence word of σ.
    """
    valence = g.valence
    tail = [valence[cur_x]]
    j = len(boundary) - 2
    while j >= 1:
        v = boundary[j]
        tail.append(valence[v])
        if g.remaining(v) > 0:
            break
        j -= 1
    else:
        return True  # reaches the wrap vertex; checked at the end
    tail.reverse()
    if r_cur > 0:
        return tuple(tail) in words.runs
    if interior_vals:
        tail.append(interior_vals[0])
        return tuple(tail) in words.runs
    return len(tail) < words.k


def _cyclic_runs_ok(g, boundary, words):
    n = len(boundary)
    rs = [g.remaining(v) for v in boundary]
    pos = [i for i in range(n) if rs[i] > 0]
    if not pos:
        return False
    for a, b in zip(pos, pos[1:] + [pos[0] + n]):
        if b - a > 1:
            run = tuple(g.valence[boundary[i % n]] for i in range(a, b + 1))
            if run not in words.runs:
                return False
    return True


def _undo(g, undo, cnt, boundary, faces):
    added_v, added_e, bumped, bnd, _, _ = undo
    adj = g.adj
    for u, v in reversed(added_e):
        # edges were appended last, so they are at the ends of both lists
        adj[u].pop()
        adj[v].pop()
    for x in bumped:
        cnt[x] -= 1
    if added_v:
        for v in added_v:
            cnt.pop(v, None)
        m = len(added_v)
        del g.valence[-m:]
        del g.corona[-m:]
        del adj[-m:]
    if bnd:
        del boundary[-bnd:]
    faces.pop()


# compressed counting ---------------------------------------------------------
#
# The boundary U_n is kept as a hash-consed rope of (valence, r) symbols. One
# corona is a left-to-right transduction of the rope whose state holds the
# current junction vertex, the open run of old vertices, and the short tails
# needed by the run lookahead. For every (node, state) the reachable end
# states are kept in the order the depth-first placement would try them,
# each with its first path only: two prefixes that reach the same state
# have the same completions, so the first complete placement always passes
# through the earlier one. The result equals the graph placement while the
# work grows with the number of distinct rope nodes, not with |F_n|.

class _Rope:
    def __init__(self):
        self.kind = []   # leaf symbol or (left, right)
        self.size = []
        self.rsum = []
        self.index = {}

    def leaf(self, sym):
        key = ("L", sym)
        hit = self.index.get(key)
        if hit is None:
            hit = len(self.kind)
            self.index[key] = hit
            self.kind.append(sym)
            self.size.append(1)
            self.rsum.append(sym[1])
        return hit

    def cat(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        key = (a, b)
        hit = self.index.get(key)
        if hit is None:
            hit = len(self.kind)
            self.index[key] = hit
            self.kind.append(key)
            self.size.append(self.size[a] + self.size[b])
            self.rsum.append(self.rsum[a] + self.rsum[b])
        return hit

    def from_list(self, syms):
        nodes = [self.leaf(x) for x in syms]
        if not nodes:
            return None
        while len(nodes) > 1:
            nodes = [self.cat(nodes[i], nodes[i + 1]) if i + 1 < len(nodes) else nodes[i]
                     for i in range(0, len(nodes), 2)]
        return nodes[0]

    def is_leaf(self, x):
        return self.size[x] == 1

    def symbols(self, x, limit=None):
        out = []
        stack = [x]
        while stack and (limit is None or len(out) < limit):
            y = stack.pop()
            if self.size[y] == 1:
                out.append(self.kind[y])
            else:
                a, b = self.kind[y]
                stack.append(b)
                stack.append(a)
        return out

    def split(self, x, i):
        """(first i symbols, the rest)."""
        if i <= 0:
            return None, x
        if i >= self.size[x]:
            return x, None
        a, b = self.kind[x]
        na = self.size[a]
        if i <= na:
            l, r = self.split(a, i)
            return l, self.cat(r, b)
        l, r = self.split(b, i - na)
        return self.cat(a, l), r


class _Transducer:
    def __init__(self, words, rope, x1, n):
        self.w = words
        self.k = words.k
        self.rope = rope
        self.x1 = x1
        self.n = n
        self.memo = {}

    def run(self, node, state):
        key = (node, state)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        rope = self.rope
        if rope.is_leaf(node):
            res = [(st, rope.from_list(out)) for st, out in self.step(rope.kind[node], state)]
        else:
            a, b = rope.kind[node]
            res = []
            seen = set()
            for mid, oa in self.run(a, state):
                for end, ob in self.run(b, mid):
                    if end not in seen:
                        seen.add(end)
                        res.append((end, rope.cat(oa, ob)))
        self.memo[key] = res
        return res

    def step(self, sym, state):
        """Ordered (state, emitted symbols) after reading one boundary symbol."""
        val, r, end = sym
        open_run = state[0]
        if r == 0:
            run = open_run + (val,)
            if len(run) >= self.k:
                raise Stuck(f"a face of corona {self.n} meets corona {self.n - 1} in {len(run)} "
                            f"vertices (k={self.k}); the boundary is not a cycle",
                            nonconcentric_at=self.n - 1)
            return [((run,) + state[1:], ())]
        runs = [open_run + (val,)] + [(val,)] * (r - 1)
        if len(runs[0]) >= self.k:
            raise Stuck(f"a face of corona {self.n} meets corona {self.n - 1} in {len(runs[0])} "
                        f"vertices (k={self.k}); the boundary is not a cycle",
                        nonconcentric_at=self.n - 1)
        paths = [(state[1:], ())]
        last = len(runs) - 1
        for i, rv in enumerate(runs):
            nxt = []
            for st, out in paths:
                for st2, emit in self.face(rv, st, end and i == last):
                    nxt.append((st2, out + emit))
            paths = nxt
            if not paths:
                return []
        new_open = () if end else (val,)
        res = []
        seen = set()
        for st, out in paths:
            full = (new_open,) + st
            if full not in seen:
                seen.add(full)
                res.append((full, out))
        return res

    def face(self, rv, st, is_last):
        # st = (cur_val, cnt, cur_is_x1, tail, head)
        cur_val, cnt, cur_is_x1, tail, head = st
        k = self.k
        s = len(rv)
        m = k - s
        closing = self.x1 if is_last else None
        out = []
        for t in self.w.candidates(rv, cur_val, closing, single=(m == 1)):
            if m == 1:
                if cnt + 1 > cur_val - 2:
                    continue
                out.append(((cur_val, cnt + 1, cur_is_x1, tail, head), ()))
                continue
            r_cur = cur_val - 2 - cnt
            interior = t[s + 1:k - 1][::-1]
            if not cur_is_x1 and tail is not None and (r_cur == 0 or len(tail) > 1):
                full = tail + (cur_val,)
                if r_cur > 0:
                    ok = full in self.w.runs
                elif interior:
                    ok = full + (interior[0],) in self.w.runs
                else:
                    ok = len(full) < k
                if not ok:
                    continue
            emit = ((cur_val, r_cur, False),) + tuple((v, v - 2, False) for v in interior)
            # update the run tail and the wrap head
            if cur_is_x1:
                ntail = tail
                nhead = ((cur_val, r_cur),)
            else:
                if r_cur > 0:
                    ntail = (cur_val,)
                else:
                    ntail = tail + (cur_val,) if tail is not None else None
                nhead = head
                if not _head_done(head):
                    nhead = head + ((cur_val, r_cur),)
            if interior:
                ntail = (interior[-1],)
                if not _head_done(nhead):
                    nhead = nhead + ((interior[0], interior[0] - 2),)
            if is_last:
                nst = (None, 0, False, ntail, nhead)
            else:
                nst = (t[s], 1, False, ntail, nhead)
            out.append((nst, emit))
        return out


def _head_done(head):
    # the head ends at the first vertex after x1 with outward edges
    return len(head) >= 2 and head[-1][1] > 0


def _wrap_ok(words, tail, head):
    if tail is None or not _head_done(head):
        return False
    vals = list(tail) + [v for v, _ in head]
    pos = [0] + [len(tail) + i for i, (_, r) in enumerate(head) if r > 0]
    for a, b in zip(pos, pos[1:]):
        if b - a > 1 and tuple(vals[a:b + 1]) not in words.runs:
            return False
    return True


def count_coronas(s, root=None, n_coronas=8):
    """Corona sizes |F_1|..|F_n| without building the patch.

    Same placement as grow() with the first-choice policy; only for
    sequences that need no accretion policy.
    """
    sigma = as_sequence(s)
    k = sigma.k
    words = _Words(sigma)
    rope = _Rope()
    if root is None or root == "vertex":
        root = max(sigma.terms)
    if root == "face":
        syms = [(v, v - 2, False) for v in sigma.terms]
    else:
        root = int(root)
        if root not in sigma.terms:
            raise ValueError(f"root valence {root} does not occur in {sigma}")
        syms = [(root, root, False)]
    profile = CoronaProfile()
    boundary = rope.from_list(syms)
    for n in range(1, n_coronas + 1):
        profile.faces.append(rope.rsum[boundary])
        if n == n_coronas:
            break
        boundary = _compressed_corona(words, rope, boundary, n, k)
        profile.vertices.append(rope.size[boundary])
    return profile


def _compressed_corona(words, rope, boundary, n, k):
    # start just after the first edge of a vertex a0 chosen so that the last
    # face (a wedge at a0, or the run ending at a0) gets two new vertices
    i = None
    last_pos = None
    size = rope.size[boundary]
    for j, sym in enumerate(rope.symbols(boundary, limit=None if size < 256 else 256)):
        if sym[1] >= 2 or (sym[1] >= 1 and last_pos is not None and j - last_pos + 1 <= k - 2):
            i = j
            break
        if sym[1] > 0:
            last_pos = j
    if i is None:
        raise Stuck(f"corona {n}: no place on corona {n - 1} to start the placement")
    head, rest = rope.split(boundary, i)
    a0, rest = rope.split(rest, 1)
    val, r, _ = rope.kind[a0]
    end = rope.leaf((val, r, True))
    if rope.size[boundary] == 1:
        seq, open_run = end, ()
    else:
        seq, open_run = rope.cat(rope.cat(rest, head), end), (val,)
    for guess in words.valences:
        tr = _Transducer(words, rope, guess, n)
        start = (open_run, guess, 1, True, None, ())
        for st, out in tr.run(seq, start):
            if _wrap_ok(words, st[4], st[5]):
                return out
    raise Stuck(f"corona {n}: no consistent completion")


# estimates -----------------------------------------------------------------

def estimate_growth(profile):
    from .spectral import GrowthRate, SIMULATOR

    if profile.n < 4:
        raise ValueError(f"need at least 4 coronas, have {profile.n}")
    f = profile.faces
    # two-step face ratio: no lag from the running sum, and exact on the
    # period-2 corona series of non-concentric sequences
    value = (f[-1] / f[-3]) ** 0.5
    recent = profile.tau_ratios()[-3:] + [value]
    lo = Fraction(min(recent)).limit_denominator(10**12)
    hi = Fraction(max(recent)).limit_denominator(10**12)
    return GrowthRate(value=value, lo=lo, hi=hi, source=SIMULATOR, note="sqrt(|F_n| / |F_n-2|)")


def bounded_ratio_ok(s, profile):
    """Every tau ratio stays below 1 + sum(p_i) - 2k."""
    sigma = as_sequence(s)
    bound = 1 + sum(sigma.terms) - 2 * sigma.k
    return all(x <= bound for x in profile.tau_ratios())


# export --------------------------------------------------------------------

def export_patch(g, fmt="json"):
    if fmt == "json":
        return json.dumps(g.to_dict(), sort_keys=True).encode()
    if fmt == "edgelist":
        return "".join(f"{u} {v}\n" for u, v in g.edges()).encode()
    if fmt == "dot":
        lines = [f'graph "{format_sequence(g.sigma.terms)}" {{']
        for v in range(len(g.valence)):
            lines.append(f'  {v} [label="{g.valence[v]}", corona={g.corona[v]}];')
        for u, v in g.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}; choose json, edgelist or dot")


# oracle ----------------------------------------------------------------------

def oracle_equivalence(s, n=8, variant=None):
    """(simulated |F_n|, matrix series) from the catalog root, n coronas each."""
    from .transition import catalog_matrix
    from .spectral import corona_series

    sigma = as_sequence(s)
    m, v1, root = catalog_matrix(sigma, variant)
    series = [int(x) if x.denominator == 1 else x for x in corona_series(m, v1, n).counts]
    if variant in ("T1", "T2"):
        _, prof = grow(sigma, root["vertex"], n, policy=variant, keep_faces=False, counts_only=True)
        sim = prof.faces
    else:
        sim = count_coronas(sigma, root["vertex"], n).faces
    return sim, series
