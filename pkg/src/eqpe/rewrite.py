"""Orienting equations into rewrite rules and normalizing modulo axioms.

Compilation turns the equation set into a rule base that is coherent with
the structural axioms: every left-hand side rooted by an AC symbol gets an
extension sibling with a fresh remainder variable, and patterns under a
non-AC identity symbol get sibling rules with identity-eligible variables
instantiated by the identity element (the canonical form already erases
identity arguments, so the plain rule can miss such instances).
"""

from dataclasses import dataclass, field

from . import solver
from .errors import NonOrientable, NonTermination
from .terms import (App, Subst, Term, Var, fresh_var, least_sort, mk_ac,
                    mk_app, replace)

DEFAULT_FUEL = 10 ** 6


@dataclass
class Rule:
    label: str
    lhs: Term
    rhs: Term
    kind: str = "base"  # base | idvariant | ext
    # rhs arg index -> lhs arg index for args the two sides share verbatim;
    # those are copied from the matched subject instead of re-instantiated
    reuse: dict = None
    # closures deciding first_match_plain / instantiating the rhs directly,
    # present only for deterministic pattern shapes (see _compile_rule)
    matcher: object = field(default=None, repr=False, compare=False)
    builder: object = field(default=None, repr=False, compare=False)

    def __repr__(self):
        return f"[{self.label}] {self.lhs!r} -> {self.rhs!r} ({self.kind})"


def _arg_reuse(lhs, rhs):
    """Positional sharing map, only for free-rooted rules where matching
    decomposes the subject argument by argument."""
    if not (isinstance(lhs, App) and isinstance(rhs, App)):
        return None
    if lhs.op != rhs.op or lhs.ax.assoc or lhs.ax.comm:
        return None
    out = {}
    for i, ra in enumerate(rhs.args):
        if isinstance(ra, App) and ra.vset:
            for j, la in enumerate(lhs.args):
                if ra is la:
                    out[i] = j
                    break
    return out or None


# The rewrite loop re-matches the same handful of patterns millions of
# times, so left-hand sides whose matching is deterministic (free spine,
# ground arguments, fresh variables, assoc sequences of ground elements
# closed by a tail variable) are compiled to closures that decide
# first_match_plain without the generic machinery. Shapes that can branch
# (AC or commutative arguments, mid-sequence or repeated sequence
# variables) keep the generic matcher; both give the same first solution
# because the compiled shapes admit at most one.

def _compile_rule(lhs, rhs, th):
    """(matcher, builder) closures, or (None, None) when the lhs needs the
    generic search. matcher(subject) returns a binding dict or None;
    builder(bindings) instantiates the rhs."""
    rax = lhs.ax
    if rax.assoc or rax.comm:
        return None, None
    seen = set()
    subs = []
    for p in lhs.args:
        g = _csub(p, seen, th)
        if g is None:
            return None, None
        subs.append(g)

    def matcher(x, rax=rax, subs=subs):
        if x.ax != rax:
            return None
        b = {}
        args = x.args
        for i, g in enumerate(subs):
            if not g(args[i], b):
                return None
        return b

    return matcher, _compile_builder(rhs)


def _csub(p, seen, th):
    """Compile one pattern against one subject position: fn(s, b) -> bool,
    extending b in place (deterministic, so no undo is ever needed)."""
    if isinstance(p, Var):
        if p in seen:
            return lambda s, b, p=p: b[p] is s
        seen.add(p)

        def fvar(s, b, p=p, sort=p.sort, leq=th.sorts.leq, th=th):
            if leq(least_sort(th, s), sort):
                b[p] = s
                return True
            return False
        return fvar
    if not p.vset:
        return lambda s, b, p=p: s is p
    ax = p.ax
    if ax.comm:
        return None
    if ax.assoc:
        return _cseq(p, seen, th)
    subs = []
    for a in p.args:
        g = _csub(a, seen, th)
        if g is None:
            return None
        subs.append(g)

    def fapp(s, b, op=p.op, ax=ax, subs=subs):
        if not (isinstance(s, App) and s.op == op and s.ax == ax):
            return False
        sargs = s.args
        for i, g in enumerate(subs):
            if not g(sargs[i], b):
                return False
        return True
    return fapp


def _cseq(p, seen, th):
    """Sequence pattern of ground elements closed by a fresh tail variable:
    the only possible split is forced, so matching is a pointer scan plus
    one suffix chunk."""
    elems = list(p.args)
    tail = elems[-1]
    front = elems[:-1]
    if not isinstance(tail, Var) or tail in seen:
        return None
    if any(e.vset for e in front):
        return None
    seen.add(tail)
    k = len(front)
    front = tuple(front)

    def fseq(s, b, op=p.op, ax=p.ax, front=front, k=k, tail=tail,
             sort=tail.sort, leq=th.sorts.leq, th=th):
        if not (isinstance(s, App) and s.op == op and s.ax == ax):
            return False
        sv = s.args
        n = len(sv)
        if n <= k:
            return False
        for i in range(k):
            if sv[i] is not front[i]:
                return False
        val = solver._seq_chunk(op, ax, sv, k, n)
        if leq(least_sort(th, val), sort):
            b[tail] = val
            return True
        return False
    return fseq


def _compile_builder(rhs):
    if isinstance(rhs, Var):
        return lambda b, v=rhs: b[v]
    if not rhs.vset:
        return lambda b, t=rhs: t
    if rhs.is_ac:
        parts = []
        for e, c in rhs.args:
            parts.extend([e] * c)
    else:
        parts = rhs.args
    subs = [_compile_builder(a) for a in parts]

    def build(b, op=rhs.op, ax=rhs.ax, subs=subs):
        return mk_app(op, [f(b) for f in subs], ax)
    return build


class RewriteStats:
    """Counters for one normalize/rewrite_step call.

    match_attempts counts one unit per rule tried at a position plus one
    per AC candidate pairing explored inside the matcher, so theories with
    heavy AC matching report proportionally more work.
    """
    __slots__ = ("steps", "match_attempts")

    def __init__(self):
        self.reset()

    def reset(self):
        self.steps = 0
        self.match_attempts = 0

    def snapshot(self):
        return {"steps": self.steps, "match_attempts": self.match_attempts}


class CompiledTheory:
    def __init__(self, theory, rules):
        self.theory = theory
        self.rules = rules
        self.by_root = {}
        for r in rules:
            self.by_root.setdefault(r.lhs.op, []).append(r)
        self.defined = frozenset(self.by_root)
        self.stats = RewriteStats()

    def is_defined(self, t: Term) -> bool:
        return isinstance(t, App) and t.op in self.defined


def _subsumed(cand: Rule, rules, th) -> bool:
    # Plain matching here, without identity instantiation of the pattern:
    # the variant rules exist precisely because unification does not try
    # identity instances, so judging them through an identity-aware matcher
    # would discard them all.
    for r in rules:
        for b in solver._match(r.lhs, cand.lhs, {}, th):
            if Subst(b).apply(r.rhs) is cand.rhs:
                return True
    return False


def compile_theory(th) -> CompiledTheory:
    """Orient every equation left to right and complete the rule base."""
    base = []
    for i, eq in enumerate(th.equations):
        label = eq.label or f"eq{i + 1}"
        if isinstance(eq.lhs, Var):
            raise NonOrientable(f"{label}: left-hand side is a variable")
        if eq.lhs is eq.rhs:
            raise NonOrientable(f"{label}: both sides are equal modulo axioms")
        if not eq.rhs.vset <= eq.lhs.vset:
            extra = sorted(v.name for v in eq.rhs.vset - eq.lhs.vset)
            raise NonOrientable(f"{label}: right-hand side has extra "
                                f"variables {', '.join(extra)}")
        base.append(Rule(label, eq.lhs, eq.rhs,
                         reuse=_arg_reuse(eq.lhs, eq.rhs)))

    rules = list(base)
    for r in base:
        for vlhs, bind in solver._identity_variants(r.lhs, th):
            if not bind or isinstance(vlhs, Var):
                continue
            vrhs = Subst(bind).apply(r.rhs)
            if vlhs is vrhs:
                continue
            cand = Rule(r.label, vlhs, vrhs, "idvariant",
                        reuse=_arg_reuse(vlhs, vrhs))
            if not _subsumed(cand, rules, th):
                rules.append(cand)

    for r in list(rules):
        lhs = r.lhs
        if not (isinstance(lhs, App) and lhs.is_ac):
            continue
        z = fresh_var(solver._ac_elem_sort(th, lhs.op), "Z")
        ext = Rule(r.label,
                   mk_ac(lhs.op, lhs.ax, list(lhs.pairs) + [(z, 1)]),
                   mk_app(lhs.op, [r.rhs, z], lhs.ax),
                   "ext")
        if not _subsumed(ext, rules, th):
            rules.append(ext)

    for r in rules:
        r.matcher, r.builder = _compile_rule(r.lhs, r.rhs, th)
    return CompiledTheory(th, rules)


def _root_step(x, ct, nf):
    """Try the rules rooted at x's symbol; first match wins. Bindings whose
    root symbol has no rules are chunks of an already-normalized subject,
    so they can be recorded as normal forms right away."""
    rules = ct.by_root.get(x.op)
    if not rules:
        return None
    th = ct.theory
    stats = ct.stats
    byr = ct.by_root
    for r in rules:
        stats.match_attempts += 1
        cm = r.matcher
        if cm is not None:
            b = cm(x)
            if b is None:
                continue
            stats.steps += 1
            if nf is not None:
                for val in b.values():
                    if isinstance(val, Var) or val.op not in byr:
                        nf.setdefault(val, val)
            return r.builder(b), r
        m = solver.first_match_plain(r.lhs, x, th)
        if m is None:
            continue
        stats.steps += 1
        if nf is not None:
            for val in m.m.values():
                if isinstance(val, Var) or val.op not in byr:
                    nf.setdefault(val, val)
        if r.reuse:
            rhs = r.rhs
            args = [x.args[r.reuse[i]] if i in r.reuse else m.apply(a)
                    for i, a in enumerate(rhs.args)]
            return mk_app(rhs.op, args, rhs.ax), r
        return m.apply(r.rhs), r
    return None


def normalize(t: Term, ct: CompiledTheory, fuel: int = DEFAULT_FUEL) -> Term:
    """E,B-normal form of t, innermost-first with a per-call cache.

    Resets ct.stats; raises NonTermination once fuel rewrite steps have
    been spent without reaching a normal form.
    """
    ct.stats.reset()
    ac0 = solver.STATS.ac_pairings
    nf = {}
    left = fuel
    stack = [t]
    while stack:
        x = stack[-1]
        if type(x) is tuple:  # ("copy", a, b): a normalizes to nf[b]
            r = nf.get(x[2])
            if r is None:
                stack.append(x[2])
                continue
            nf[x[1]] = r
            stack.pop()
            continue
        if x in nf:
            stack.pop()
            continue
        if isinstance(x, Var):
            nf[x] = x
            stack.pop()
            continue
        kids = x.elems()
        todo = [k for k in kids if k not in nf]
        if todo:
            stack.extend(todo)
            continue
        y = _rebuild(x, kids, nf)
        if y is not x:
            stack.pop()
            stack.append(("copy", x, y))
            continue
        hit = _root_step(x, ct, nf)
        if hit is None:
            nf[x] = x
            stack.pop()
            continue
        if left <= 0:
            ct.stats.match_attempts += solver.STATS.ac_pairings - ac0
            raise NonTermination(f"no normal form within {fuel} steps")
        left -= 1
        stack.pop()
        stack.append(("copy", x, hit[0]))
    ct.stats.match_attempts += solver.STATS.ac_pairings - ac0
    return nf[t]


def _rebuild(x, kids, nf):
    if x.is_ac:
        if all(nf[e] is e for e, _ in x.args):
            return x
        return mk_ac(x.op, x.ax, [(nf[e], c) for e, c in x.args])
    mapped = [nf[k] for k in kids]
    if all(m is k for m, k in zip(mapped, kids)):
        return x
    return mk_app(x.op, mapped, x.ax)


def rewrite_step(t: Term, ct: CompiledTheory):
    """One rewrite step at the innermost-leftmost redex, or None when t is
    already a normal form. Returns (result, rule label, position)."""
    ct.stats.reset()
    ac0 = solver.STATS.ac_pairings
    pre = []
    stack = [((), t)]
    while stack:
        pos, x = stack.pop()
        if isinstance(x, Var):
            continue
        pre.append((pos, x))
        for i, k in enumerate(x.elems()):
            stack.append((pos + (i,), k))
    try:
        for pos, x in reversed(pre):  # post-order: children first, then roots
            hit = _root_step(x, ct, None)
            if hit is not None:
                z, rule = hit
                return replace(t, pos, z), rule.label, pos
        return None
    finally:
        ct.stats.match_attempts += solver.STATS.ac_pairings - ac0
