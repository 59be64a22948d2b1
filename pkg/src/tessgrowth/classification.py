"""Monomorphic/polymorphic and concentricity verdicts from the family catalog."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .cyclic import (
    HYPERBOLIC,
    CyclicSequence,
    angle_excess,
    as_sequence,
    canonical_word,
    format_sequence,
    growth_class,
    leq,
    LESS,
)

MONOMORPHIC = "Monomorphic"
POLYMORPHIC = "Polymorphic"
UNIFORMLY_CONCENTRIC = "UniformlyConcentric"
NON_CONCENTRIC = "NonConcentric"
UNKNOWN = "Unknown"


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    id: str
    template: tuple
    morphism: str
    concentricity: str | None = None
    recommended_root: object = None
    matrix: str | None = None
    formula: str | None = None
    min: dict = field(default_factory=dict)
    even: tuple = ()
    anchor: str = ""
    note: str | None = None
    # dynamic edge-homogeneous rows let letters take the value 3
    floor: int | None = None

    @property
    def k(self):
        return len(self.template)

    @property
    def variables(self):
        seen = []
        for x in self.template:
            if isinstance(x, str) and x not in seen:
                seen.append(x)
        return seen

    @property
    def literals(self):
        return [x for x in self.template if not isinstance(x, str)]

    def variable_floor(self, name):
        base = self.floor
        if base is None:
            lits = self.literals
            base = max([4] + [x + 1 for x in lits])
        return max(base, self.min.get(name, base))

    def bind(self, word):
        """Binding of letters for this exact linear word, or None."""
        if len(word) != self.k:
            return None
        b = {}
        for slot, x in zip(self.template, word):
            if isinstance(slot, str):
                if slot in b:
                    if b[slot] != x:
                        return None
                else:
                    b[slot] = x
            elif slot != x:
                return None
        vals = list(b.values())
        if len(set(vals)) != len(vals):
            return None
        for name, v in b.items():
            if v < self.variable_floor(name):
                return None
        return b

    def match(self, s):
        s = as_sequence(s)
        if s.k != self.k:
            return None
        for word in sorted(s.traversals()):
            b = self.bind(word)
            if b is not None:
                return b
        return None

    def parity_ok(self, binding):
        return all(binding[v] % 2 == 0 for v in self.even)

    def instantiate(self, binding):
        return CyclicSequence(binding[x] if isinstance(x, str) else x for x in self.template)

    def root_valences(self, binding):
        r = self.recommended_root
        if r is None:
            return None
        if not isinstance(r, list):
            r = [r]
        return [binding[x] if isinstance(x, str) else x for x in r]


@lru_cache(maxsize=1)
def catalog_document():
    text = resources.files("tessgrowth").joinpath("data/catalog.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=1)
def families():
    out = []
    for row in catalog_document()["families"]:
        out.append(Family(
            id=row["id"],
            template=tuple(row["template"]),
            morphism=row["morphism"],
            concentricity=row.get("concentricity"),
            recommended_root=row.get("recommended_root"),
            matrix=row.get("matrix"),
            formula=row.get("formula"),
            min=dict(row.get("min") or {}),
            even=tuple(row.get("even") or ()),
            anchor=row.get("anchor", ""),
            note=row.get("note"),
        ))
    return tuple(out)


def family_by_id(fid):
    if isinstance(fid, Family):
        return fid
    key = fid.replace(" ", "")
    for f in families():
        if f.id == key:
            return f
    # aliases: any rotation/reflection of a template names the same family
    try:
        slots = [int(x) if x.isdigit() else x for x in key.strip("[]").split(",")]
    except ValueError:
        slots = None
    if slots:
        for f in families():
            if f.k == len(slots) and _same_template(f.template, slots):
                return f
    raise KeyError(f"unknown family {fid!r}")


def _same_template(a, b):
    # equal up to rotation/reflection and renaming of letters
    def shape(word):
        names = {}
        out = []
        for x in word:
            if isinstance(x, str):
                names.setdefault(x, f"v{len(names)}")
                out.append(names[x])
            else:
                out.append(x)
        return tuple(out)

    target = shape(a)
    k = len(b)
    rev = list(b)[::-1]
    for i in range(k):
        for w in (list(b)[i:] + list(b)[:i], rev[i:] + rev[:i]):
            if shape(w) == target:
                return True
    return False


def _edge_homogeneous_family(s):
    t = s.terms
    k = len(t)
    if len(set(t)) == 1:
        return Family(id=f"[p]^{k}", template=("p",) * k, morphism=MONOMORPHIC,
                      formula="edge", anchor="edge-homogeneous constant sequence",
                      floor=3, concentricity=None)
    if k % 2 == 0 and len(set(t)) == 2 and all(t[i] != t[i + 1] for i in range(k - 1)):
        return Family(id=f"[p,q]^{k // 2}", template=("p", "q") * (k // 2),
                      morphism=MONOMORPHIC, formula="edge",
                      anchor="edge-homogeneous alternating sequence", floor=3,
                      concentricity=None)
    return None


def match_pattern(s):
    s = as_sequence(s)
    for f in families():
        if f.k != s.k:
            continue
        b = f.match(s)
        if b is not None:
            return f, b
    if s.k >= 7:
        f = _edge_homogeneous_family(s)
        if f is not None:
            return f, f.match(s)
    return None


def in_g44(s):
    t = as_sequence(s).terms
    return len(t) >= 4 and min(t) >= 4


def in_g3plus5(s):
    t = as_sequence(s).terms
    k = len(t)
    return k >= 5 and not any(t[i] == 3 and t[(i + 1) % k] == 3 for i in range(k))


def in_g36(s):
    return as_sequence(s).k >= 6


def uniformly_concentric_class(s):
    return in_g44(s) or in_g3plus5(s) or in_g36(s)


@dataclass
class Classification:
    sequence: CyclicSequence
    growth_class: str
    morphism: str = UNKNOWN
    concentricity: str = UNKNOWN
    matched_family: str | None = None
    recommended_root: list | None = None
    binding: dict | None = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "sequence": str(self.sequence),
            "growth_class": self.growth_class,
            "morphism": self.morphism,
            "concentricity": self.concentricity,
            "matched_family": self.matched_family,
            "binding": self.binding,
            "recommended_root": self.recommended_root,
            "notes": list(self.notes),
        }


def classify(s):
    s = as_sequence(s)
    gc = growth_class(s)
    out = Classification(sequence=s, growth_class=gc)
    if gc != HYPERBOLIC:
        out.notes.append("angle excess is not positive; no exponential growth")
        return out
    hit = match_pattern(s)
    if hit is None:
        if s.k == 3:
            out.morphism = MONOMORPHIC
            out.notes.append("every realizable sequence of length 3 is monomorphic")
        elif s.k >= 7:
            out.notes.append("length 7 or more and not edge-homogeneous: not classified "
                             "(such sequences dominate [3,3,3,3,3,3,3])")
        else:
            out.notes.append("no catalog family matches; likely not realizable")
        if uniformly_concentric_class(s):
            out.concentricity = UNIFORMLY_CONCENTRIC
        return out
    fam, binding = hit
    out.matched_family = fam.id
    out.binding = dict(binding)
    if not fam.parity_ok(binding):
        bad = [v for v in fam.even if binding[v] % 2]
        out.notes.append("parity violation: " + ", ".join(f"{v}={binding[v]} must be even" for v in bad))
        return out
    out.morphism = fam.morphism
    if fam.morphism == MONOMORPHIC and fam.concentricity is not None:
        out.concentricity = fam.concentricity
    elif uniformly_concentric_class(s):
        out.concentricity = UNIFORMLY_CONCENTRIC
    elif fam.morphism == MONOMORPHIC:
        # monomorphic and outside the six non-concentric forms
        out.concentricity = UNIFORMLY_CONCENTRIC
    if out.concentricity == NON_CONCENTRIC:
        out.recommended_root = fam.root_valences(binding)
    return out


def polymorphism_sufficient(s):
    """Index-pair test for polymorphism.

    Raises PreconditionError when s lies outside the classes where the
    test applies, so that "not applicable" is never confused with False.
    """
    s = as_sequence(s)
    if not (in_g44(s) or in_g3plus5(s)):
        raise PreconditionError(f"{s} is neither all >= 4 (k >= 4) nor free of adjacent 3s with k >= 5")
    t = s.terms
    k = len(t)
    for i in range(k):
        if t[i] < 4 or t[(i + 1) % k] < 4:
            continue
        for j in range(k):
            if j == i:
                continue
            if (t[i] == t[j] and t[(i + 1) % k] == t[(j + 1) % k]
                    and t[(i + 2) % k] != t[(j + 2) % k]):
                return True
            if (t[i] == t[j] and t[(i + 1) % k] == t[(j - 1) % k]
                    and t[(i + 2) % k] != t[(j - 2) % k]):
                return True
    return False


def admissible(fam, binding):
    seq = fam.instantiate(binding)
    return fam.parity_ok(binding) and angle_excess(seq) > 0


def enumerate_family(fam, bound):
    """All admissible instances with letters up to `bound`, canonical and deduplicated."""
    fam = family_by_id(fam)
    names = fam.variables
    ranges = []
    for v in names:
        lo = fam.variable_floor(v)
        step = 2 if v in fam.even else 1
        if step == 2 and lo % 2:
            lo += 1
        ranges.append(range(lo, bound + 1, step))
    seen = {}
    for vals in itertools.product(*ranges):
        if len(set(vals)) != len(vals):
            continue
        b = dict(zip(names, vals))
        if not admissible(fam, b):
            continue
        seq = fam.instantiate(b)
        if seq in seen:
            continue
        # the instance must not fall into an earlier, more specific row
        hit = match_pattern(seq)
        if hit is None or hit[0].id != fam.id:
            continue
        seen[seq] = b
    return seen


def _default_bound(fam):
    n = len(fam.variables)
    return {0: 4, 1: 24, 2: 24, 3: 20}.get(n, 16)


def minimal_representatives(template, bound=None):
    """Pairwise-incomparable minimal admissible members of a family.

    Anything below a member x has all terms <= max(x), so minimality
    inside the bounded search is exact for every member it returns.
    """
    fam = family_by_id(template)
    if bound is None:
        bound = _default_bound(fam)
    members = sorted(enumerate_family(fam, bound))
    mins = []
    for x in members:
        if any(leq(y, x) == LESS for y in members):
            continue
        mins.append(x)
    return mins


def binding_for(fam, seq):
    fam = family_by_id(fam)
    b = fam.match(seq)
    if b is None:
        raise ValueError(f"{seq} is not in family {fam.id}")
    return b


def describe_family(fam):
    fam = family_by_id(fam)
    return {
        "id": fam.id,
        "template": format_sequence(fam.template),
        "morphism": fam.morphism,
        "concentricity": fam.concentricity,
        "even": list(fam.even),
        "matrix": fam.matrix,
        "formula": fam.formula,
        "anchor": fam.anchor,
    }
