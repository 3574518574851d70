"""Order-sorted least general generalization modulo axioms, plus the
best-matching-terms selection built on it.

lgg_modulo returns a minimal complete set: AC roots branch over injective
argument pairings with leftovers grouped into one fresh block variable, ACU
identity absorbs a one-sided leftover, and candidates strictly more general
than another candidate are filtered out.
"""

import logging
from dataclasses import dataclass

from .errors import EmptyInput
from .terms import App, Subst, Term, least_sort, mk_app, mk_var
from . import solver

log = logging.getLogger(__name__)

_CAP = 8  # occurrence-list size up to which AC pairings are fully explored

__all__ = ["Generalizer", "lgg_modulo", "bmt", "bmt_trace"]


@dataclass
class Generalizer:
    """Generalization w of two terms: left.apply(term) gives the first
    input back, right.apply(term) the second."""
    term: Term
    left: Subst
    right: Subst


def lgg_modulo(t1: Term, t2: Term, th) -> list:
    counter = [0]
    cands = []
    for w, store in _alts(t1, t2, th, {}, counter):
        if any(solver.eq_modulo_renaming(w, g.term, th) is not None
               for g in cands):
            continue
        th1 = {x: a for (a, _), x in store.items()}
        th2 = {x: b for (_, b), x in store.items()}
        g = Generalizer(w, Subst(th1), Subst(th2))
        if __debug__:
            assert g.left.apply(w) is t1, (w, th1, t1)
            assert g.right.apply(w) is t2, (w, th2, t2)
        cands.append(g)
    # least general only: drop a candidate when another one instantiates it
    return [g for g in cands
            if not any(h is not g and _strict_instance(h.term, g.term, th)
                       for h in cands)]


def bmt(U, t: Term, th) -> list:
    """Best matching terms of t within U: keep those u whose lgg with t is
    among the most specific generalizations seen across all of U."""
    us = list(U)
    if not us:
        raise EmptyInput("best matching terms need a non-empty candidate set")
    if len(us) == 1:
        return us
    return bmt_trace(us, t, th)[2]


def bmt_trace(U, t: Term, th):
    """(per-candidate generalization term lists W_i, minimal set M,
    selected candidates); bmt returns just the selection."""
    us = list(U)
    Ws = []
    pool = []  # (candidate index, generalization term)
    for i, u in enumerate(us):
        terms = [g.term for g in lgg_modulo(u, t, th)]
        Ws.append(terms)
        pool.extend((i, w) for w in terms)
    minimal = [w for _, w in pool
               if not any(_strict_instance(w2, w, th) for _, w2 in pool)]
    keep = {i for i, w in pool if any(w is m for m in minimal)}
    return Ws, minimal, [u for i, u in enumerate(us) if i in keep]


def _strict_instance(a: Term, b: Term, th) -> bool:
    return solver.instance_of(a, b, th) and not solver.instance_of(b, a, th)


# ----------------------------  enumeration  ---------------------------------

def _gvar(counter, sort):
    counter[0] += 1
    return mk_var("#G%d" % counter[0], sort)


def _lubs(th, a: Term, b: Term):
    return sorted(th.sorts.lub_set(least_sort(th, a), least_sort(th, b)))


def _alts(u, v, th, store, counter):
    """All generalization alternatives of the pair, threading the shared
    (left-subterm, right-subterm) -> variable store."""
    if u is v:
        yield u, store
        return
    key = (u, v)
    if key in store:
        yield store[key], store
        return
    coupled = False
    for w, st in _couple(u, v, th, store, counter):
        coupled = True
        yield w, st
    if not coupled:
        for srt in _lubs(th, u, v):
            st = dict(store)
            st[key] = x = _gvar(counter, srt)
            yield x, st


def _thread(pairs, th, store, counter):
    if not pairs:
        yield [], store
        return
    (u0, v0) = pairs[0]
    for w0, st in _alts(u0, v0, th, store, counter):
        for ws, st2 in _thread(pairs[1:], th, st, counter):
            yield [w0] + ws, st2


def _couple(u, v, th, store, counter):
    uapp, vapp = isinstance(u, App), isinstance(v, App)
    if uapp and vapp and u.op == v.op and u.ax == v.ax:
        ax = u.ax
        if ax.is_ac:
            yield from _ac_lists(u.op, ax, _occurrences(u), _occurrences(v),
                                 th, store, counter)
            return
        if ax.comm:
            (a1, a2), (b1, b2) = u.args, v.args
            for order in (((a1, b1), (a2, b2)), ((a1, b2), (a2, b1))):
                for ws, st in _thread(list(order), th, store, counter):
                    yield mk_app(u.op, ws, ax), st
            return
        if len(u.args) != len(v.args):
            return  # unequal flattened sequences fall back to a variable
        for ws, st in _thread(list(zip(u.args, v.args)), th, store, counter):
            yield mk_app(u.op, ws, ax), st
        return
    # one side rooted by an ACU operator absorbs the other as a singleton
    # multiset; the identity element stands in for the empty leftover
    if (uapp and u.ax.is_ac and u.ax.identity is not None
            and not (vapp and v.op == u.op and v.ax == u.ax)):
        yield from _ac_lists(u.op, u.ax, _occurrences(u), [v],
                             th, store, counter)
    if (vapp and v.ax.is_ac and v.ax.identity is not None
            and not (uapp and u.op == v.op and u.ax == v.ax)):
        yield from _ac_lists(v.op, v.ax, [u], _occurrences(v),
                             th, store, counter)


def _occurrences(t: App):
    out = []
    for e, c in t.args:
        out.extend([e] * c)
    return out


def _ac_lists(op, ax, us, vs, th, store, counter):
    if len(us) <= _CAP and len(vs) <= _CAP:
        pairings = _pairings(us, vs)
    else:
        pairings = _greedy(us, vs, op)
    for acc, li, lj in pairings:
        lu = [us[i] for i in li]
        lv = [vs[j] for j in lj]
        if (lu or lv) and (not lu or not lv) and ax.identity is None:
            continue  # a one-sided leftover needs the identity to absorb it
        for ws, st in _thread([(us[i], vs[j]) for i, j in acc],
                              th, store, counter):
            if lu or lv:
                bu = mk_app(op, lu, ax) if lu else ax.identity
                bv = mk_app(op, lv, ax) if lv else ax.identity
                for blk, st2 in _block(bu, bv, th, st, counter):
                    yield mk_app(op, ws + [blk], ax), st2
            elif len(ws) == 1:
                yield ws[0], st
            else:
                yield mk_app(op, ws, ax), st


def _block(bu, bv, th, store, counter):
    # leftover blocks become a single shared variable, never re-coupled
    # (finer splits already arise from larger pairings)
    if bu is bv:
        yield bu, store
        return
    key = (bu, bv)
    if key in store:
        yield store[key], store
        return
    for srt in _lubs(th, bu, bv):
        st = dict(store)
        st[key] = x = _gvar(counter, srt)
        yield x, st


def _pairings(us, vs):
    """All injective partial matchings between occurrence lists, as
    (matched index pairs, unmatched us indices, unmatched vs indices)."""
    n = len(vs)
    used = [False] * n

    def go(i, acc):
        if i == len(us):
            yield list(acc)
            return
        yield from go(i + 1, acc)  # us[i] joins the leftover block
        tried = set()
        for j in range(n):
            if not used[j] and vs[j] not in tried:
                tried.add(vs[j])
                used[j] = True
                acc.append((i, j))
                yield from go(i + 1, acc)
                acc.pop()
                used[j] = False

    for acc in go(0, []):
        mi = {i for i, _ in acc}
        mj = {j for _, j in acc}
        yield (acc, [i for i in range(len(us)) if i not in mi],
               [j for j in range(n) if j not in mj])


def _greedy(us, vs, op):
    log.warning("AC generalization over %d x %d occurrences of %s exceeds "
                "the exploration cap %d; using one greedy pairing",
                len(us), len(vs), op, _CAP)
    used = [False] * len(vs)
    acc = []
    left_us = []
    for i, e in enumerate(us):
        j_hit = None
        for j, d in enumerate(vs):
            if not used[j] and d is e:
                j_hit = j
                break
        if j_hit is None:
            for j, d in enumerate(vs):
                if (not used[j] and isinstance(e, App) and isinstance(d, App)
                        and e.op == d.op and e.ax == d.ax):
                    j_hit = j
                    break
        if j_hit is None:
            left_us.append(i)
        else:
            used[j_hit] = True
            acc.append((i, j_hit))
    yield acc, left_us, [j for j in range(len(vs)) if not used[j]]
