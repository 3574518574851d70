"""Homeomorphic embedding modulo structural axioms.

The whistle relation: embeds_modulo(u, t) is true when t can be shrunk to a
renaming of u by repeatedly replacing a subterm with one of its arguments,
where argument lists are read modulo the axioms of their root (multisets for
AC/ACU, sequences for assoc, either order for comm). Implemented as a
memoized coupling/diving search over canonical terms rather than literal
shrinking; identity elements never occur inside canonical arguments, so ACU
cannot loop the search.
"""

from .terms import Term, Var, App

__all__ = ["embeds_modulo", "classic_embedding"]


def _elements(t: App):
    """Child terms for diving, one entry per distinct element."""
    if t.ax.is_ac:
        return tuple(e for e, _ in t.args)
    return tuple(t.args)


def embeds_modulo(u: Term, t: Term, th) -> bool:
    """True iff u embeds in t modulo the axioms (u smaller, t larger).

    Variables embed in anything; sorts are ignored (kind-level whistle), so
    the relation over-approximates and only ever stops unfolding earlier.
    """
    memo = {}

    def emb(u, t):
        if isinstance(u, Var):
            return True
        if isinstance(t, Var):
            return False
        key = (u, t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        memo[key] = False  # cycle guard; terms are finite, pairs may repeat
        out = _couple(u, t) or any(emb(u, s) for s in _elements(t))
        memo[key] = out
        return out

    def _couple(u, t):
        if u.op != t.op or u.ax != t.ax:
            return False
        ax = u.ax
        if ax.is_ac:
            return _ac_embed(list(u.args), list(t.args))
        if ax.comm:
            (a1, a2), (b1, b2) = u.args, t.args
            return (emb(a1, b1) and emb(a2, b2)) or \
                   (emb(a1, b2) and emb(a2, b1))
        if ax.assoc:
            return _subseq(u.args, t.args)
        if len(u.args) != len(t.args):
            return False
        return all(emb(a, b) for a, b in zip(u.args, t.args))

    def _subseq(us, ts):
        # ordered subsequence embedding over flattened sequences
        def fwd(i, j):
            if i == len(us):
                return True
            if len(us) - i > len(ts) - j:
                return False
            for k in range(j, len(ts)):
                if emb(us[i], ts[k]) and fwd(i + 1, k + 1):
                    return True
            return False

        return fwd(0, 0)

    def _ac_embed(upairs, tpairs):
        # injective multiset matching: every occurrence in u maps to a
        # distinct occurrence in t whose element embeds it
        if sum(c for _, c in upairs) > sum(c for _, c in tpairs):
            return False

        def go(i, avail):
            if i == len(upairs):
                return True
            e, need = upairs[i]
            cands = [j for j, (d, _) in enumerate(tpairs)
                     if avail[j] > 0 and emb(e, d)]

            def pick(need, ci, avail):
                if need == 0:
                    return go(i + 1, avail)
                if ci == len(cands):
                    return False
                j = cands[ci]
                take_max = min(avail[j], need)
                for take in range(take_max, -1, -1):
                    a2 = list(avail)
                    a2[j] -= take
                    if pick(need - take, ci + 1, a2):
                        return True
                return False

            return pick(need, 0, list(avail))

        return go(0, [c for _, c in tpairs])

    return emb(u, t)


def classic_embedding(u: Term, t: Term) -> bool:
    """Plain syntactic homeomorphic embedding (axioms ignored); the reference
    relation embeds_modulo must agree with on axiom-free signatures."""
    memo = {}

    def emb(u, t):
        if isinstance(u, Var):
            return True
        if isinstance(t, Var):
            return False
        key = (u, t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        memo[key] = False
        ts = _expand(t)
        out = False
        if u.op == t.op and u.ax == t.ax:
            us = _expand(u)
            if len(us) == len(ts):
                out = all(emb(a, b) for a, b in zip(us, ts))
        if not out:
            out = any(emb(u, s) for s in ts)
        memo[key] = out
        return out

    def _expand(x: App):
        if x.ax.is_ac:
            out = []
            for e, c in x.args:
                out.extend([e] * c)
            return out
        return list(x.args)

    return emb(u, t)
