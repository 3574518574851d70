"""Matching and unification modulo the structural axioms.

Matching is complete for free, C, AC and ACU symbols; identity axioms on
non-AC symbols are realized by trying identity-instantiated variants of the
pattern. Unification handles free, C, AC, ACU natively (Diophantine basis
recombination for AC/ACU) plus the sort-disciplined fragment of flattened
assoc sequences where sequence variables occur on one side only; anything
beyond that fragment raises UnsupportedAxioms.

Substitution solving is order-sorted: variable-variable unification takes
greatest-lower-bound sorts, and a variable facing a term of a larger sort
may demote the term's variables to subsort-renamed fresh variables.
"""

from __future__ import annotations

import itertools

from .errors import CapExceeded, UnsupportedAxioms
from .signature import FREE
from .terms import (App, Subst, Term, Var, ac_minus, fresh_var, least_sort,
                    mk_ac, mk_app, sort_terms, term_cmp)

DIO_CAP = 10000


class SolverStats:
    __slots__ = ("ac_pairings",)

    def __init__(self):
        self.ac_pairings = 0

    def reset(self):
        self.ac_pairings = 0


STATS = SolverStats()


def _ls(th, t):
    return least_sort(th, t)


def _subst_key(b):
    items = sorted(b.items(), key=lambda kv: (kv[0].sort, kv[0].name))
    return tuple(items)


def _sorted_substs(dicts, vs=None):
    seen = set()
    out = []
    for b in dicts:
        if vs is not None:
            b = {v: t for v, t in b.items() if v in vs}
        key = _subst_key(b)
        if key in seen:
            continue
        seen.add(key)
        out.append(b)
    out.sort(key=lambda b: tuple(
        (v.sort, v.name, _TermKey(t)) for v, t in _subst_key(b)))
    return [Subst(b) for b in out]


class _TermKey:
    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return term_cmp(self.t, other.t) < 0

    def __eq__(self, other):
        return self.t is other.t


# =============================  matching  ====================================

def _identity_variants(pattern, th):
    """Pattern variants that instantiate variables under a non-AC
    identity-bearing operator by the identity element. Returns a list of
    (variant, base-bindings) pairs, most specific bindings last."""
    out = {pattern: [{}]}
    queue = [(pattern, {})]
    while queue:
        pat, base = queue.pop()
        for node in _app_nodes(pat):
            ax = node.ax
            if ax.identity is None or ax.is_ac:
                continue
            for a in node.elems():
                if not isinstance(a, Var) or a in base:
                    continue
                if not th.sorts.leq(_ls(th, ax.identity), a.sort):
                    continue
                b2 = dict(base)
                b2[a] = ax.identity
                p2 = Subst({a: ax.identity}).apply(pat)
                bases = out.setdefault(p2, [])
                if b2 not in bases:
                    bases.append(b2)
                    queue.append((p2, b2))
    pairs = []
    for pat in sorted(out, key=lambda p: (min(len(b) for b in out[p]),
                                          _TermKey(p))):
        for b in out[pat]:
            pairs.append((pat, b))
    return pairs


def _app_nodes(t):
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, App):
            yield x
            stack.extend(x.elems())


def match_modulo(pattern: Term, subject: Term, th) -> list:
    """All substitutions th with apply(th, pattern) =_B subject; subject
    variables are treated as constants. Deterministically ordered."""
    sols = []
    for pat, base in _identity_variants(pattern, th):
        for b in _match(pat, subject, dict(base), th):
            sols.append(b)
    out = _sorted_substs(sols)
    if __debug__:
        for s in out:
            assert s.apply(pattern) is subject, (pattern, subject, s)
    return out


def matches(pattern, subject, th) -> bool:
    for pat, base in _identity_variants(pattern, th):
        for _ in _match(pat, subject, dict(base), th):
            return True
    return False


def first_match(pattern, subject, th):
    """First matcher in the deterministic search order, or None. Cheaper
    than match_modulo when only one solution is needed (rewriting); no
    soundness re-check here, it would redo the whole match on every step."""
    for pat, base in _identity_variants(pattern, th):
        for b in _match(pat, subject, dict(base), th):
            return Subst(b)
    return None


def first_match_plain(pattern, subject, th):
    """Like first_match but without identity instantiation of the pattern.
    Rule sets compiled with explicit identity-variant rules already cover
    those instances, so the rewrite loop must not enumerate them twice."""
    for b in _match(pattern, subject, {}, th):
        return Subst(b)
    return None


def _match(p, s, b, th):
    if isinstance(p, Var):
        prev = b.get(p)
        if prev is not None:
            if prev is s:
                yield b
            return
        if th.sorts.leq(_ls(th, s), p.sort):
            b2 = dict(b)
            b2[p] = s
            yield b2
        return
    if not isinstance(s, App) or s.op != p.op or s.ax != p.ax:
        if p.ax.is_ac:
            # subject as a singleton multiset; ACU variables may take the
            # identity, so e.g. pattern (R ; BG) still matches one node
            yield from _ac_items(list(p.args), {s: 1}, b, th, p.op, p.ax)
        return
    ax = p.ax
    if ax.assoc and ax.comm:
        yield from _match_ac(p, s, b, th)
    elif ax.assoc:
        yield from _match_seq(list(p.args), s.args, 0, b, th, p.op, ax)
    elif ax.comm:
        a1, a2 = p.args
        s1, s2 = s.args
        for x1, x2 in ((s1, s2), (s2, s1)):
            for b1 in _match(a1, x1, b, th):
                yield from _match(a2, x2, b1, th)
    else:
        yield from _match_all(tuple(p.args), tuple(s.args), b, th)


def _match_all(ps, ss, b, th):
    if len(ps) != len(ss):
        return
    if not ps:
        yield b
        return
    for b1 in _match(ps[0], ss[0], b, th):
        yield from _match_all(ps[1:], ss[1:], b1, th)


def _seq_chunk(op, ax, view, lo, hi):
    if hi - lo == 1:
        return view[lo]
    return mk_app(op, view[lo:hi] if hi == len(view) else
                  tuple(view[i] for i in range(lo, hi)), ax)


def _match_seq(ps, sv, j, b, th, op, ax):
    """Positional matching of flattened assoc argument lists; pattern
    variables of a sequence-compatible sort may span several elements."""
    n = len(sv)
    if not ps:
        if j == n:
            yield b
        return
    p0, rest = ps[0], ps[1:]
    remaining_min = len(rest)
    if isinstance(p0, Var):
        prev = b.get(p0)
        if prev is not None:
            if isinstance(prev, App) and prev.op == op and prev.ax == ax:
                k = len(prev.args)
                if j + k <= n and all(prev.args[i] is sv[j + i]
                                      for i in range(k)):
                    yield from _match_seq(rest, sv, j + k, b, th, op, ax)
            elif j < n and prev is sv[j]:
                yield from _match_seq(rest, sv, j + 1, b, th, op, ax)
            return
        if not rest:
            # tail variable absorbs everything left
            if j >= n:
                return
            val = _seq_chunk(op, ax, sv, j, n)
            if th.sorts.leq(_ls(th, val), p0.sort):
                b2 = dict(b)
                b2[p0] = val
                yield b2
            return
        for k in range(1, n - j - remaining_min + 1):
            val = _seq_chunk(op, ax, sv, j, j + k)
            if th.sorts.leq(_ls(th, val), p0.sort):
                b2 = dict(b)
                b2[p0] = val
                yield from _match_seq(rest, sv, j + k, b2, th, op, ax)
        return
    if j >= n:
        return
    for b1 in _match(p0, sv[j], b, th):
        yield from _match_seq(rest, sv, j + 1, b1, th, op, ax)


def _resolved(t, b):
    if not t.vset:
        return True
    return all(v in b for v in t.vset)


def _match_ac(p, s, b, th):
    fast = _ac_elem_tail(p, s, b, th)
    if fast is not None:
        yield from fast
        return
    avail = {e: c for e, c in s.args}
    yield from _ac_items(list(p.args), avail, b, th, p.op, p.ax)


def _ac_elem_tail(p, s, b, th):
    """Fast lane for the dominant rewrite shape on large AC subjects: one
    non-variable element pattern plus one unbound remainder variable, both
    with multiplicity 1. Splices the remainder instead of rebuilding
    availability multisets. Returns None when the shape does not apply."""
    pp = p.args
    if len(pp) != 2:
        return None
    (a1, c1), (a2, c2) = pp
    if c1 != 1 or c2 != 1:
        return None
    v1, v2 = isinstance(a1, Var), isinstance(a2, Var)
    if v1 == v2:
        return None
    pe, pv = (a2, a1) if v1 else (a1, a2)
    if b.get(pv) is not None:
        return None
    if _resolved(pe, b):
        inst = Subst(b).apply(pe)
        if isinstance(inst, App) and inst.op == p.op and inst.ax == p.ax:
            return None  # multi-element consumption: general path
        def gen_resolved():
            rem = ac_minus(s, inst)
            if rem is not None and th.sorts.leq(_ls(th, rem), pv.sort):
                b2 = dict(b)
                b2[pv] = rem
                yield b2
        return gen_resolved()

    def gen():
        for e, _c in s.args:
            STATS.ac_pairings += 1
            for b1 in _match(pe, e, b, th):
                rem = ac_minus(s, e)
                got = b1.get(pv)
                if got is not None:
                    if got is rem:
                        yield b1
                    continue
                if th.sorts.leq(_ls(th, rem), pv.sort):
                    b2 = dict(b1)
                    b2[pv] = rem
                    yield b2
    return gen()


def _take_instance(inst, avail, op, ax):
    """Subtract the canonical instance from the availability multiset;
    returns the new multiset or None."""
    if inst is ax.identity:
        return dict(avail)
    if isinstance(inst, App) and inst.op == op and inst.ax == ax:
        need = inst.args
    else:
        need = ((inst, 1),)
    out = dict(avail)
    for e, c in need:
        have = out.get(e, 0)
        if have < c:
            return None
        if have == c:
            del out[e]
        else:
            out[e] = have - c
    return out


def _ac_items(items, avail, b, th, op, ax):
    # resolved items first: deterministic subtraction
    while items:
        done = None
        for i, (e, c) in enumerate(items):
            if _resolved(e, b):
                done = i
                break
        if done is None:
            break
        e, c = items.pop(done)
        inst = Subst(b).apply(e)
        for _ in range(c):
            avail2 = _take_instance(inst, avail, op, ax)
            if avail2 is None:
                return
            avail = avail2

    nonvar = [(e, c) for e, c in items if not isinstance(e, Var)]
    uvars = [(e, c) for e, c in items if isinstance(e, Var)]

    def go_nonvar(idx, avail, b):
        if idx == len(nonvar):
            yield from go_vars(0, avail, b)
            return
        e, c = nonvar[idx]
        if _resolved(e, b):
            inst = Subst(b).apply(e)
            a2 = avail
            for _ in range(c):
                a2 = _take_instance(inst, a2, op, ax)
                if a2 is None:
                    return
            yield from go_nonvar(idx + 1, a2, b)
            return
        # avail preserves canonical insertion order throughout
        for cand in list(avail):
            if avail[cand] < c:
                continue
            STATS.ac_pairings += 1
            for b1 in _match(e, cand, b, th):
                a2 = dict(avail)
                if a2[cand] == c:
                    del a2[cand]
                else:
                    a2[cand] -= c
                yield from go_nonvar(idx + 1, a2, b1)

    def go_vars(idx, avail, b):
        live = [(v, c) for v, c in uvars[idx:] if v not in b]
        fixed = [(v, c) for v, c in uvars[idx:] if v in b]
        for v, c in fixed:
            inst = b[v]
            for _ in range(c):
                avail = _take_instance(inst, avail, op, ax)
                if avail is None:
                    return
        yield from distribute(live, avail, b)

    def distribute(live, avail, b):
        if not live:
            if not avail:
                yield b
            return
        v, c = live[0]
        if len(live) == 1:
            if not avail:
                if ax.identity is not None and th.sorts.leq(
                        _ls(th, ax.identity), v.sort):
                    b2 = dict(b)
                    b2[v] = ax.identity
                    yield b2
                return
            if any(cnt % c for cnt in avail.values()):
                return
            pairs = tuple((e, cnt // c) for e, cnt in avail.items())
            val = mk_ac(op, ax, pairs)
            if th.sorts.leq(_ls(th, val), v.sort):
                b2 = dict(b)
                b2[v] = val
                yield b2
            return
        elems = list(avail.items())
        ranges = [range(cnt // c + 1) for _, cnt in elems]
        for pick in itertools.product(*ranges):
            total = sum(pick)
            if total == 0:
                if ax.identity is None or not th.sorts.leq(
                        _ls(th, ax.identity), v.sort):
                    continue
                val = ax.identity
            else:
                pairs = tuple((e, k) for (e, _), k in zip(elems, pick) if k)
                val = mk_ac(op, ax, pairs)
            if not th.sorts.leq(_ls(th, val), v.sort):
                continue
            a2 = {}
            for (e, cnt), k in zip(elems, pick):
                left = cnt - c * k
                if left:
                    a2[e] = left
            b2 = dict(b)
            b2[v] = val
            yield from distribute(live[1:], a2, b2)

    yield from go_nonvar(0, avail, b)


# ============================  renaming variants  ============================

def eq_modulo_renaming(t1: Term, t2: Term, th):
    """A variable renaming rho with t1 =_B (t2 rho), if one exists."""
    if t1 is t2:
        return Subst()
    for s in match_modulo(t2, t1, th):
        if s.is_var_renaming():
            return s
    return None


def instance_of(t1: Term, t2: Term, th) -> bool:
    """True iff t1 is a B-instance of t2."""
    return matches(t2, t1, th)


# =============================  unification  =================================

def unify_modulo(t1: Term, t2: Term, th, protect=frozenset()) -> list:
    pvars = t1.vset | t2.vset
    sols = []
    for b in _solve([(t1, t2)], {}, th):
        sols.append({v: t for v, t in b.items() if v in pvars})
    out = _sorted_substs(sols)
    if __debug__:
        for s in out:
            a, c = s.apply(t1), s.apply(t2)
            assert a is c, (t1, t2, s, a, c)
    return _minimal_unifiers(out, pvars, th)


def _minimal_unifiers(subs, pvars, th):
    if len(subs) <= 1:
        return subs
    vs = sort_terms(pvars)
    packed = [mk_app("\x00tup", [s.apply(v) for v in vs], FREE) for s in subs]
    keep = [True] * len(subs)
    for i in range(len(subs)):
        if not keep[i]:
            continue
        for j in range(len(subs)):
            if i == j or not keep[j]:
                continue
            # drop j if it is a strict instance of i
            if matches(packed[i], packed[j], th) and \
                    not matches(packed[j], packed[i], th):
                keep[j] = False
    return [s for k, s in zip(keep, subs) if k]


def _bind(b, v, t):
    one = Subst({v: t})
    b2 = {x: one.apply(w) for x, w in b.items()}
    b2[v] = t
    return b2


def _solve(pairs, b, th):
    if not pairs:
        yield b
        return
    (s, t), rest = pairs[0], list(pairs[1:])
    sub = Subst(b)
    s, t = sub.apply(s), sub.apply(t)
    if s is t:
        yield from _solve(rest, b, th)
        return
    if isinstance(t, Var) and not isinstance(s, Var):
        s, t = t, s
    if isinstance(s, Var):
        if isinstance(t, Var):
            if th.sorts.leq(t.sort, s.sort):
                yield from _solve(rest, _bind(b, s, t), th)
            elif th.sorts.leq(s.sort, t.sort):
                yield from _solve(rest, _bind(b, t, s), th)
            else:
                for g in sorted(th.sorts.glb_set(s.sort, t.sort)):
                    z = fresh_var(g)
                    yield from _solve(rest, _bind(_bind(b, s, z), t, z), th)
            return
        if s in t.vset:
            return
        for req in _demote_req(t, s.sort, th):
            if not req:
                yield from _solve(rest, _bind(b, s, t), th)
                continue
            b2 = dict(b)
            for v, srt in sorted(req.items(),
                                 key=lambda kv: (kv[0].sort, kv[0].name)):
                b2 = _bind(b2, v, fresh_var(srt))
            t2 = Subst(b2).apply(t)
            if s in t2.vset:
                continue
            yield from _solve(rest, _bind(b2, s, t2), th)
        return
    if s.op != t.op or s.ax != t.ax:
        if s.ax.is_ac:
            yield from _solve_ac(dict(s.args), {t: 1}, s.op, s.ax,
                                 rest, b, th)
        if t.ax.is_ac:
            yield from _solve_ac({s: 1}, dict(t.args), t.op, t.ax,
                                 rest, b, th)
        return
    ax = s.ax
    if ax.assoc and ax.comm:
        yield from _solve_ac(dict(s.args), dict(t.args), s.op, ax,
                             rest, b, th)
    elif ax.assoc:
        yield from _solve_seq(list(s.args), list(t.args), rest, b, th,
                              s.op, ax)
    elif ax.comm:
        a1, a2 = s.args
        c1, c2 = t.args
        yield from _solve([(a1, c1), (a2, c2)] + rest, b, th)
        yield from _solve([(a1, c2), (a2, c1)] + rest, b, th)
    else:
        if len(s.args) != len(t.args):
            return
        yield from _solve(list(zip(s.args, t.args)) + rest, b, th)


def _demote_req(t, target, th):
    """Requirement maps var -> lower sort making least_sort(t) <= target.
    Yields {} when t already fits."""
    if th.sorts.leq(_ls(th, t), target):
        yield {}
        return
    if isinstance(t, Var):
        for g in sorted(th.sorts.glb_set(t.sort, target)):
            yield {t: g}
        return
    seen = set()
    for d in th.decls(t.op):
        if not th.sorts.leq(d.result_sort, target):
            continue
        if t.is_ac:
            targets = [d.arg_sorts[0]] if d.arg_sorts[0] == d.arg_sorts[1] \
                else list(d.arg_sorts)
            kid_req = [(e, targets) for e, _ in t.args]
        elif t.is_seq:
            kid_req = [(e, [d.arg_sorts[0]]) for e in t.args[:-1]]
            kid_req.append((t.args[len(t.args) - 1], [d.arg_sorts[1]]))
        else:
            if len(d.arg_sorts) != len(t.args):
                continue
            kid_req = [(e, [srt]) for e, srt in zip(t.args, d.arg_sorts)]

        def merge(idx, acc):
            if idx == len(kid_req):
                key = tuple(sorted(((v.name, v.sort), srt)
                                   for v, srt in acc.items()))
                if key not in seen:
                    seen.add(key)
                    yield dict(acc)
                return
            e, tgts = kid_req[idx]
            for tgt in tgts:
                for req in _demote_req(e, tgt, th):
                    merged = dict(acc)
                    ok = True
                    for v, srt in req.items():
                        if v in merged and merged[v] != srt:
                            gl = sorted(th.sorts.glb_set(merged[v], srt))
                            if not gl:
                                ok = False
                                break
                            srt = gl[0]
                        merged[v] = srt
                    if ok:
                        yield from merge(idx + 1, merged)

        yield from merge(0, {})


def _solve_seq(xs, ys, rest, b, th, op, ax):
    """Unification of flattened assoc sequences: positional, with sequence
    variables allowed to absorb chunks. Sequence variables occurring as
    elements of both sides make the problem potentially infinitary."""
    x_abs_vars = [e for e in xs if isinstance(e, Var)
                  and _seq_absorbing(e, th, op, ax)]
    y_abs_vars = [e for e in ys if isinstance(e, Var)
                  and _seq_absorbing(e, th, op, ax)]
    if set(x_abs_vars) & set(y_abs_vars):
        raise UnsupportedAxioms(
            "sequence variable occurs on both sides of an assoc "
            "unification problem")
    # absorbing variables away from the tail are only finitary when the
    # other side cannot absorb (otherwise this is general word unification)
    if ((any(v is not xs[-1] for v in x_abs_vars) and y_abs_vars)
            or (any(v is not ys[-1] for v in y_abs_vars) and x_abs_vars)):
        raise UnsupportedAxioms(
            "assoc unification with interior sequence variables on "
            "opposing sides is not finitary")

    def chunk(lst, lo, hi):
        if hi - lo == 1:
            return lst[lo]
        return mk_app(op, lst[lo:hi], ax)

    def go(i, j, pairs):
        if i == len(xs) and j == len(ys):
            yield from _solve(pairs + rest, b, th)
            return
        if i == len(xs) or j == len(ys):
            return
        x, y = xs[i], ys[j]
        x_abs = isinstance(x, Var) and _seq_absorbing(x, th, op, ax)
        y_abs = isinstance(y, Var) and _seq_absorbing(y, th, op, ax)
        if x_abs and i == len(xs) - 1:
            yield from _solve(pairs + [(x, chunk(ys, j, len(ys)))] + rest,
                              b, th)
            if not y_abs:
                return
        if y_abs and j == len(ys) - 1:
            yield from _solve(pairs + [(chunk(xs, i, len(xs)), y)] + rest,
                              b, th)
            return
        if x_abs and i < len(xs) - 1:
            for k in range(1, len(ys) - j - (len(xs) - i - 1) + 1):
                yield from go(i + 1, j + k, pairs + [(x, chunk(ys, j, j + k))])
            return
        if y_abs and j < len(ys) - 1:
            for k in range(1, len(xs) - i - (len(ys) - j - 1) + 1):
                yield from go(i + k, j + 1, pairs + [(chunk(xs, i, i + k), y)])
            return
        yield from go(i + 1, j + 1, pairs + [(x, y)])

    yield from go(0, 0, [])


def _seq_absorbing(v, th, op, ax):
    """Can v take a >=2-element chunk of op? True iff some declaration's
    result sort fits under v.sort."""
    return any(th.sorts.leq(d.result_sort, v.sort) for d in th.decls(op))


# ----------------------------  AC via Diophantine  ---------------------------

def _dio_basis(coeffs):
    """Minimal nonzero non-negative solutions of sum(coeffs[i]*x[i]) = 0
    (coeffs carry signs), Contejean-Devie style breadth-first search."""
    n = len(coeffs)
    sols = []
    frontier = []
    for i in range(n):
        v = [0] * n
        v[i] = 1
        frontier.append(tuple(v))
    seen = set(frontier)
    while frontier:
        nxt = []
        for v in frontier:
            d = sum(c * x for c, x in zip(coeffs, v))
            if d == 0:
                if not any(all(x >= y for x, y in zip(v, s)) for s in sols):
                    sols.append(v)
                continue
            for k in range(n):
                if coeffs[k] * d < 0:
                    w = list(v)
                    w[k] += 1
                    w = tuple(w)
                    if w in seen:
                        continue
                    if any(all(x >= y for x, y in zip(w, s)) for s in sols):
                        continue
                    seen.add(w)
                    nxt.append(w)
            if len(seen) > DIO_CAP:
                raise CapExceeded(
                    "Diophantine basis enumeration exceeded %d vectors"
                    % DIO_CAP)
        frontier = nxt
    sols = [s for s in sols
            if not any(s != o and all(x >= y for x, y in zip(s, o))
                       for o in sols)]
    sols.sort()
    return sols


def _ac_elem_sort(th, op):
    best = None
    for d in th.decls(op):
        if best is None or th.sorts.leq(best, d.arg_sorts[0]):
            best = d.arg_sorts[0]
    return best


def _solve_ac(left, right, op, ax, rest, b, th):
    left, right = dict(left), dict(right)
    for e in sorted(set(left) & set(right), key=_TermKey):
        k = min(left[e], right[e])
        for d in (left, right):
            if d[e] == k:
                del d[e]
            else:
                d[e] -= k
    if not left and not right:
        yield from _solve(rest, b, th)
        return
    if not left or not right:
        # leftover atoms must all be variables bindable to the identity
        lo = left or right
        if ax.identity is None:
            return
        ident = ax.identity
        pairs = []
        for e in lo:
            if not isinstance(e, Var):
                return
            pairs.append((e, ident))
        yield from _solve(pairs + rest, b, th)
        return
    latoms = sorted(left, key=_TermKey)
    ratoms = sorted(right, key=_TermKey)
    atoms = latoms + ratoms
    coeffs = [left[a] for a in latoms] + [-right[a] for a in ratoms]
    basis = _dio_basis(coeffs)
    if not basis:
        return
    if len(basis) > 22:
        raise CapExceeded(
            "AC unification subset search too large (%d basis vectors)"
            % len(basis))
    is_var = [isinstance(a, Var) for a in atoms]
    elem_sort = _ac_elem_sort(th, op)
    n = len(atoms)
    idxs = list(range(len(basis)))
    for size in range(1, len(basis) + 1):
        for S in itertools.combinations(idxs, size):
            tot = [0] * n
            for k in S:
                for i in range(n):
                    tot[i] += basis[k][i]
            ok = True
            for i in range(n):
                if is_var[i]:
                    if tot[i] == 0 and ax.identity is None:
                        ok = False
                        break
                else:
                    if tot[i] != 1:
                        ok = False
                        break
            if not ok:
                continue
            # representative term per chosen basis vector
            zvals = {}
            merges = []
            bad = False
            for k in S:
                nonvars = [atoms[i] for i in range(n)
                           if basis[k][i] and not is_var[i]]
                if nonvars:
                    rep = nonvars[0]
                    for other in nonvars[1:]:
                        merges.append((rep, other))
                    zvals[k] = rep
                else:
                    zvals[k] = fresh_var(elem_sort)
            if bad:
                continue
            pairs = []
            for i in range(n):
                if not is_var[i]:
                    continue
                v = atoms[i]
                contrib = [(zvals[k], basis[k][i]) for k in S if basis[k][i]]
                if not contrib:
                    val = ax.identity
                    if val is None:
                        bad = True
                        break
                else:
                    total = sum(c for _, c in contrib)
                    val = contrib[0][0] if total == 1 else \
                        mk_ac(op, ax, contrib)
                pairs.append((v, val))
            if bad:
                continue
            yield from _solve(pairs + merges + rest, b, th)
