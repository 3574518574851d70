"""Canonical term representation modulo structural axioms.

Terms are interned: structurally equal canonical terms are the same object,
so equality modulo axioms is pointer equality on canonical forms. Apps of
assoc operators are flattened variadic; AC argument lists are sorted
multisets stored as (element, multiplicity) pairs; identity elements are
erased at construction on the sides their axiom covers.

Assoc-only argument lists are backed by suffix views over a shared base
tuple so that peeling the head of a long sequence (the common rewrite
pattern) costs O(1) instead of O(n).
"""

from __future__ import annotations

import itertools

from .errors import IllTyped, InvalidPosition
from .signature import FREE, AxiomSet

_TABLE = {}
_NOVARS = frozenset()


class Term:
    __slots__ = ("_h", "vset", "__weakref__")

    def __hash__(self):
        return self._h

    @property
    def is_ground(self):
        return not self.vset

    def __lt__(self, other):
        return term_cmp(self, other) < 0

    def __repr__(self):
        return debug_str(self)


class Var(Term):
    __slots__ = ("name", "sort")

    @property
    def op(self):
        return None


class App(Term):
    __slots__ = ("op", "ax", "args", "mh", "src")

    @property
    def is_ac(self):
        return self.ax.assoc and self.ax.comm

    @property
    def is_seq(self):
        return self.ax.assoc and not self.ax.comm

    @property
    def pairs(self):
        """AC argument multiset as (element, multiplicity) pairs."""
        return self.args

    def elems(self):
        """Distinct immediate children (AC multiplicities not expanded)."""
        if self.is_ac:
            return [e for e, _ in self.args]
        return list(self.args)


# ---- assoc sequence views ---------------------------------------------------

class _ABase:
    """Shared backing store for assoc argument sequences, with memoized
    right-fold suffix hashes so any suffix view hashes in O(1). Views and
    suffix variable sets are memoized too: peeling the head of a long
    sequence must not re-scan the tail."""
    __slots__ = ("elems", "_sufh", "_sufv", "_views")

    def __init__(self, elems):
        self.elems = elems
        self._sufh = None
        self._sufv = None
        self._views = {}

    def suffix_hash(self, start):
        if self._sufh is None:
            n = len(self.elems)
            h = [0] * (n + 1)
            h[n] = 0x5EED
            for i in range(n - 1, -1, -1):
                h[i] = hash((self.elems[i]._h, h[i + 1]))
            self._sufh = h
        return self._sufh[start]

    def suffix_vset(self, start):
        if self._sufv is None:
            n = len(self.elems)
            v = [_NOVARS] * (n + 1)
            for i in range(n - 1, -1, -1):
                ev = self.elems[i].vset
                v[i] = (v[i + 1] | ev) if ev else v[i + 1]
            self._sufv = v
        return self._sufv[start]

    def view(self, start):
        s = self._views.get(start)
        if s is None:
            s = self._views[start] = Seq(self, start)
        return s


class Seq:
    """Immutable view of base.elems[start:]. Quacks like a tuple of terms."""
    __slots__ = ("base", "start", "_h")

    def __init__(self, base, start=0):
        self.base = base
        self.start = start
        self._h = base.suffix_hash(start)

    def __len__(self):
        return len(self.base.elems) - self.start

    def __iter__(self):
        elems = self.base.elems
        for i in range(self.start, len(elems)):
            yield elems[i]

    def __getitem__(self, i):
        if isinstance(i, slice):
            lo, hi, step = i.indices(len(self))
            if step == 1 and hi == len(self):
                return self.base.view(self.start + lo)
            return tuple(self.base.elems[self.start + lo:self.start + hi:step])
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return self.base.elems[self.start + i]

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Seq):
            return NotImplemented
        if self.base is other.base:
            return self.start == other.start
        if len(self) != len(other):
            return False
        return all(a is b for a, b in zip(self, other))


def _seq_of(elems):
    return elems if isinstance(elems, Seq) else _ABase(tuple(elems)).view(0)


# ---- construction -----------------------------------------------------------

def mk_var(name: str, sort: str) -> Var:
    key = ("v", name, sort)
    t = _TABLE.get(key)
    if t is None:
        t = Var.__new__(Var)
        t.name, t.sort = name, sort
        t._h = hash(key)
        t.vset = frozenset((t,))
        _TABLE[key] = t
    return t


def _intern_app(kind, op, ax, args, vset):
    key = (kind, op, ax, args)
    t = _TABLE.get(key)
    if t is None:
        t = App.__new__(App)
        t.op, t.ax, t.args = op, ax, args
        t._h = hash((op, hash(args)))
        t.vset = vset
        t.mh = None
        t.src = None
        _TABLE[key] = t
    return t


def _vunion(children):
    acc = _NOVARS
    for c in children:
        if c.vset:
            acc = acc | c.vset if acc else c.vset
    return acc


def mk_app(op: str, args, ax: AxiomSet = FREE) -> Term:
    """Build the canonical application of op to args (a sequence of Terms).

    Flattens assoc children, erases identity elements on covered sides,
    collapses degenerate applications, sorts C/AC argument lists."""
    if ax.assoc and ax.comm:
        pairs = []
        for a in args:
            if isinstance(a, App) and a.op == op and a.ax == ax:
                pairs.extend(a.args)
            else:
                pairs.append((a, 1))
        return _mk_ac(op, ax, pairs)

    if ax.assoc:
        if isinstance(args, Seq):
            flat = args
        else:
            flat = []
            for a in args:
                if isinstance(a, App) and a.op == op and a.ax == ax:
                    flat.extend(a.args)
                else:
                    flat.append(a)
            ident = ax.identity
            if ident is not None:
                n = len(flat)
                lo = 1 if ax.id_side == "right" else 0
                hi = n - 1 if ax.id_side == "left" else n
                flat = [e for i, e in enumerate(flat)
                        if e is not ident or not lo <= i < hi]
            if len(flat) == 1:
                return flat[0]
            if not flat:
                if ident is None:
                    raise IllTyped("empty %s application" % op)
                return ident
            flat = _seq_of(flat)
        return _intern_app("a", op, ax, flat,
                           flat.base.suffix_vset(flat.start))

    args = tuple(args)
    if ax.identity is not None and len(args) == 2:
        a, b = args
        ident = ax.identity
        right = ax.comm or ax.id_side in ("right", "both")
        left = ax.comm or ax.id_side in ("left", "both")
        if right and b is ident:
            return a
        if left and a is ident:
            return b
    if ax.comm and len(args) == 2 and term_cmp(args[0], args[1]) > 0:
        args = (args[1], args[0])
    return _intern_app("f", op, ax, args, _vunion(args))


_MASK = (1 << 61) - 1


def _melem(e):
    # per-element multiplier with an element-dependent slope in the count;
    # summing hash((e._h, c)) instead collides badly because tuple hashes are
    # near-affine in c with a slope that does not depend on e
    return (e._h * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03) & ((1 << 64) - 1)


def _mh_pairs(pairs):
    h = 0
    for e, c in pairs:
        h = (h + c * _melem(e)) & _MASK
    return h


class _MKey:
    """Interning key for AC argument multisets carrying a commutative hash,
    so derived multisets (one element added or removed) intern without
    rehashing all pairs."""
    __slots__ = ("op", "ax", "pairs", "h")

    def __init__(self, op, ax, pairs, mh):
        self.op, self.ax, self.pairs = op, ax, pairs
        self.h = hash((op, ax, mh))

    def __hash__(self):
        return self.h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, _MKey):
            return False
        if self.op != other.op or self.ax != other.ax:
            return False
        a, b = self.pairs, other.pairs
        if a is b:
            return True
        return len(a) == len(b) and all(
            x[1] == y[1] and x[0] is y[0] for x, y in zip(a, b))


def _intern_ac(op, ax, pairs, mh, vset, src=None):
    key = _MKey(op, ax, pairs, mh)
    t = _TABLE.get(key)
    if t is None:
        t = App.__new__(App)
        t.op, t.ax, t.args = op, ax, pairs
        t._h = key.h
        t.vset = vset
        t.mh = mh
        t.src = src
        _TABLE[key] = t
    return t


def _mk_ac(op: str, ax: AxiomSet, pairs) -> Term:
    """Canonical AC/ACU application from (element, count) pairs; elements
    need not be distinct or sorted; same-op elements are spliced."""
    if len(pairs) == 2:
        # joining one element onto a large multiset happens once per rewrite
        # step on AC-heavy inputs; splice instead of rebuilding
        (a, ca), (b, cb) = pairs
        big = small = None
        if (cb == 1 and isinstance(b, App) and b.op == op and b.ax == ax
                and len(b.args) > 8):
            big, small, csmall = b, a, ca
        elif (ca == 1 and isinstance(a, App) and a.op == op and a.ax == ax
                and len(a.args) > 8):
            big, small, csmall = a, b, cb
        if (big is not None and csmall > 0
                and not (isinstance(small, App) and small.op == op
                         and small.ax == ax)):
            if small is ax.identity:
                return big
            return ac_plus(big, small, csmall)
    counts = {}
    order = []
    ident = ax.identity
    for e, c in pairs:
        if c <= 0:
            continue
        if isinstance(e, App) and e.op == op and e.ax == ax:
            for e2, c2 in e.args:
                if e2 is ident:
                    continue
                if e2 not in counts:
                    counts[e2] = 0
                    order.append(e2)
                counts[e2] += c2 * c
            continue
        if e is ident:
            continue
        if e not in counts:
            counts[e] = 0
            order.append(e)
        counts[e] += c
    total = sum(counts.values())
    if total == 0:
        if ident is None:
            raise IllTyped("empty %s application" % op)
        return ident
    if total == 1:
        return order[0]
    order.sort(key=_CmpKey)
    tup = tuple((e, counts[e]) for e in order)
    return _intern_ac(op, ax, tup, _mh_pairs(tup), _vunion(order))


def mk_ac(op, ax, pairs):
    return _mk_ac(op, ax, pairs)


_AC_MINUS = {}
_AC_PLUS = {}


def ac_minus(node: App, elem: Term):
    """node's argument multiset minus one occurrence of elem, or None when
    elem is not an element. Memoized; derived nodes carry a provenance
    breadcrumb so least sorts can be maintained incrementally."""
    key = (node, elem)
    if key in _AC_MINUS:
        return _AC_MINUS[key]
    pairs = node.args
    r = new = None
    for i, (e, c) in enumerate(pairs):
        if e is elem:
            if c == 1:
                new = pairs[:i] + pairs[i + 1:]
            else:
                new = pairs[:i] + ((e, c - 1),) + pairs[i + 1:]
            break
    if new is not None:
        if len(new) == 1 and new[0][1] == 1:
            r = new[0][0]
        else:
            mh = (node.mh - _melem(elem)) & _MASK
            vset = node.vset and _vunion(e for e, _ in new)
            r = _intern_ac(node.op, node.ax, new, mh, vset,
                           src=(node, elem, -1))
    _AC_MINUS[key] = r
    return r


def ac_plus(node: App, elem: Term, count: int = 1) -> Term:
    """node's argument multiset plus count occurrences of elem (not the
    identity, not an op-rooted term of the same op). Memoized."""
    key = (node, elem, count)
    r = _AC_PLUS.get(key)
    if r is None:
        pairs = node.args
        ek = _CmpKey(elem)
        lo, hi = 0, len(pairs)
        while lo < hi:
            mid = (lo + hi) // 2
            if _CmpKey(pairs[mid][0]) < ek:
                lo = mid + 1
            else:
                hi = mid
        mh = node.mh + count * _melem(elem)
        if lo < len(pairs) and pairs[lo][0] is elem:
            new = pairs[:lo] + ((elem, pairs[lo][1] + count),) + pairs[lo + 1:]
        else:
            new = pairs[:lo] + ((elem, count),) + pairs[lo:]
        vset = node.vset | elem.vset if (node.vset or elem.vset) else _NOVARS
        r = _intern_ac(node.op, node.ax, new, mh & _MASK, vset,
                       src=(node, elem, count))
        _AC_PLUS[key] = r
    return r


# ---- total term order -------------------------------------------------------

def term_cmp(a: Term, b: Term) -> int:
    """Fixed total order: Var < App; Vars by (sort, name); Apps
    lexicographically by (op name, arity, args with multiplicities)."""
    if a is b:
        return 0
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is None:  # count / length marker: ('#', cx, cy) packed in y
            cx, cy = y
            if cx != cy:
                return -1 if cx < cy else 1
            continue
        if x is y:
            continue
        xv, yv = isinstance(x, Var), isinstance(y, Var)
        if xv or yv:
            if not yv:
                return -1
            if not xv:
                return 1
            kx, ky = (x.sort, x.name), (y.sort, y.name)
            if kx != ky:
                return -1 if kx < ky else 1
            continue
        if x.op != y.op:
            return -1 if x.op < y.op else 1
        if x.ax.is_ac != y.ax.is_ac:
            return -1 if x.ax.is_ac else 1
        ents = []
        if x.ax.is_ac and y.ax.is_ac:
            ents.append((None, (len(x.args), len(y.args))))
            for (ex, cx), (ey, cy) in zip(x.args, y.args):
                ents.append((ex, ey))
                ents.append((None, (cx, cy)))
        else:
            ents.append((None, (len(x.args), len(y.args))))
            ents.extend(zip(x.args, y.args))
        stack.extend(reversed(ents))
    return 0


class _CmpKey:
    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return term_cmp(self.t, other.t) < 0


def sort_terms(ts):
    return sorted(ts, key=_CmpKey)


# ---- traversal helpers ------------------------------------------------------

def iter_nodes(t: Term):
    """Pre-order over distinct-element structure (AC counts not expanded)."""
    stack = [t]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, App):
            if x.is_ac:
                stack.extend(e for e, _ in reversed(x.args))
            else:
                stack.extend(reversed(tuple(x.args)))


def vars_in_order(t: Term):
    """Distinct variables in first-occurrence (pre-order) order."""
    seen, out = set(), []
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            if x not in seen:
                seen.add(x)
                out.append(x)
        elif x.vset:
            stack.extend(reversed(x.elems()))
    return out


def term_size(t: Term) -> int:
    """Number of symbol occurrences, counting AC multiplicities."""
    memo = {}
    post = []
    stack = [(t, False)]
    while stack:
        x, done = stack.pop()
        if x in memo:
            continue
        if isinstance(x, Var):
            memo[x] = 1
            continue
        if done:
            if x.is_ac:
                memo[x] = 1 + sum(memo[e] * c for e, c in x.args)
            else:
                memo[x] = 1 + sum(memo[e] for e in x.args)
            continue
        stack.append((x, True))
        for e in x.elems():
            stack.append((e, False))
    return memo[t]


# ---- least sort -------------------------------------------------------------

def _binop_result(th, op, s1, s2):
    memo = th._binop_cache
    key = (op, s1, s2)
    r = memo.get(key)
    if r is not None:
        if isinstance(r, IllTyped):
            raise r
        return r
    best = None
    for d in th.decls(op):
        a1, a2 = d.arg_sorts
        if th.sorts.leq(s1, a1) and th.sorts.leq(s2, a2):
            if best is None or th.sorts.leq(d.result_sort, best):
                best = d.result_sort
            elif not th.sorts.leq(best, d.result_sort):
                r = memo[key] = IllTyped("ambiguous least sort for %s" % op)
                raise r
    if best is None:
        r = memo[key] = IllTyped("no declaration of %s applies to (%s, %s)"
                                 % (op, s1, s2))
        raise r
    memo[key] = best
    return best


def _seq_app(op, ax, base, start):
    return _intern_app("a", op, ax, base.view(start), base.suffix_vset(start))


def _fold_counter(th, op, cnt):
    """Least sort of an AC argument multiset given a sort -> count map.
    Folding the same sort more than three times cannot refine it further
    (same cap the direct fold uses per element)."""
    s = None
    for srt in sorted(cnt):
        for _ in range(min(cnt[srt], 3)):
            s = srt if s is None else _binop_result(th, op, s, srt)
    return s


_PROBE_CAP = 64


def least_sort(th, t: Term) -> str:
    cache = th._ls_cache
    out = cache.get(t)
    if out is not None:
        return out
    stack = [(t, False)]
    while stack:
        x, done = stack.pop()
        if x in cache:
            continue
        if isinstance(x, Var):
            if not th.sorts.known(x.sort):
                raise IllTyped("variable %s has unknown sort %s"
                               % (x.name, x.sort))
            cache[x] = x.sort
            continue
        if not done:
            if x.is_seq:
                # fold right from the nearest suffix whose sort is already
                # known, so peeling heads off a long sequence stays O(1)
                v = x.args
                base, st, n = v.base, v.start, len(v.base.elems)
                k = n
                for probe in range(st + 1, min(st + _PROBE_CAP, n - 1)):
                    nxt = _TABLE.get(("a", x.op, x.ax, base.view(probe)))
                    if nxt is not None and nxt in cache:
                        k = probe
                        break
                stack.append((x, ("seq", k)))
                for i in range(st, k):
                    stack.append((base.elems[i], False))
                continue
            if x.is_ac:
                if x.src is not None and x.src[0] in th._acnt_cache:
                    stack.append((x, ("acd",)))
                    stack.append((x.src[1], False))
                    continue
                if x.src is not None:
                    stack.append((x, ("acd",)))
                    stack.append((x.src[1], False))
                    stack.append((x.src[0], False))
                    continue
                stack.append((x, ("acf",)))
                for e, _ in x.args:
                    stack.append((e, False))
                continue
            stack.append((x, True))
            for e in x.elems():
                stack.append((e, False))
            continue
        if isinstance(done, tuple):
            if done[0] == "seq":
                v = x.args
                base, st, n = v.base, v.start, len(v.base.elems)
                k = done[1]
                elems = base.elems
                try:
                    if k < n:
                        s = cache[_seq_app(x.op, x.ax, base, k)]
                        i = k - 1
                    else:
                        s = cache[elems[n - 1]]
                        i = n - 2
                    while i >= st:
                        s = _binop_result(th, x.op, cache[elems[i]], s)
                        cache[_seq_app(x.op, x.ax, base, i)] = s
                        i -= 1
                    continue
                except IllTyped:
                    # ill-sorted under the cons discipline; fall back to a
                    # full fold over the whole view
                    stack.append((x, ("seqfull",)))
                    for i in range(st, n):
                        stack.append((elems[i], False))
                    continue
            if done[0] == "acd":
                base, elem, delta = x.src
                bcnt = th._acnt_cache.get(base)
                if bcnt is None:
                    # base sort was cached without a counter; rebuild fully
                    stack.append((x, ("acf",)))
                    for e, _ in x.args:
                        stack.append((e, False))
                    continue
                cnt = dict(bcnt)
                se = cache[elem]
                c = cnt.get(se, 0) + delta
                if c:
                    cnt[se] = c
                else:
                    cnt.pop(se, None)
                cache[x] = _fold_counter(th, x.op, cnt)
                th._acnt_cache[x] = cnt
                continue
            if done[0] == "acf":
                cnt = {}
                for e, c in x.args:
                    se = cache[e]
                    cnt[se] = cnt.get(se, 0) + c
                cache[x] = _fold_counter(th, x.op, cnt)
                th._acnt_cache[x] = cnt
                continue
            # ("seqfull",): right fold with left-fold fallback
            it = [cache[e] for e in x.args]
            try:
                s = it[-1]
                for s2 in reversed(it[:-1]):
                    s = _binop_result(th, x.op, s2, s)
            except IllTyped:
                s = it[0]
                for s2 in it[1:]:
                    s = _binop_result(th, x.op, s, s2)
            cache[x] = s
            continue
        child = tuple(cache[e] for e in x.args)
        best = None
        for d in th.decls(x.op):
            if len(d.arg_sorts) != len(child):
                continue
            if all(th.sorts.leq(c, a) for c, a in zip(child, d.arg_sorts)):
                if best is None or th.sorts.leq(d.result_sort, best):
                    best = d.result_sort
                elif not th.sorts.leq(best, d.result_sort):
                    raise IllTyped("ambiguous least sort for %s" % x.op)
        if best is None:
            raise IllTyped("no declaration of %s applies to (%s)"
                           % (x.op, ", ".join(child)))
        cache[x] = best
    return cache[t]


# ---- substitutions ----------------------------------------------------------

class Subst:
    __slots__ = ("m",)

    def __init__(self, m=None):
        self.m = dict(m) if m else {}

    def __bool__(self):
        return bool(self.m)

    def __len__(self):
        return len(self.m)

    def __contains__(self, v):
        return v in self.m

    def get(self, v, default=None):
        return self.m.get(v, default)

    def items(self):
        return sorted(self.m.items(), key=lambda kv: _CmpKey(kv[0]))

    @property
    def domain(self):
        return frozenset(self.m)

    def apply(self, t: Term) -> Term:
        if not self.m or not t.vset:
            return t
        dom = self.m.keys()
        if isinstance(t, Var):
            return self.m.get(t, t)
        memo = {}
        stack = [(t, False)]
        while stack:
            x, done = stack.pop()
            if x in memo:
                continue
            if isinstance(x, Var):
                memo[x] = self.m.get(x, x)
                continue
            if not x.vset or x.vset.isdisjoint(dom):
                memo[x] = x
                continue
            if not done:
                stack.append((x, True))
                for e in x.elems():
                    stack.append((e, False))
                continue
            if x.is_ac:
                memo[x] = _mk_ac(x.op, x.ax,
                                 [(memo[e], c) for e, c in x.args])
            else:
                memo[x] = mk_app(x.op, [memo[e] for e in x.args], x.ax)
        return memo[t]

    def compose(self, other: "Subst") -> "Subst":
        """self then other: apply(compose(s,o), t) = o.apply(s.apply(t))."""
        m = {v: other.apply(t) for v, t in self.m.items()}
        for v, t in other.m.items():
            if v not in m:
                m[v] = t
        return Subst({v: t for v, t in m.items() if t is not v})

    def restrict(self, vs) -> "Subst":
        vs = set(vs)
        return Subst({v: t for v, t in self.m.items() if v in vs})

    def is_var_renaming(self) -> bool:
        vals = list(self.m.values())
        return (all(isinstance(t, Var) for t in vals)
                and len(set(vals)) == len(vals))

    def check_sorts(self, th):
        from .errors import SortViolation
        for v, t in self.m.items():
            if not th.sorts.leq(least_sort(th, t), v.sort):
                raise SortViolation("%s := %s (sort %s not <= %s)"
                                    % (v.name, t, least_sort(th, t), v.sort))
        return self

    def __repr__(self):
        if not self.m:
            return "{id}"
        return "{%s}" % ", ".join(
            "%s |-> %s" % (v.name, debug_str(t)) for v, t in self.items())


ID_SUBST = Subst()

_FRESH = itertools.count(1)


def fresh_var(sort: str, hint: str = "") -> Var:
    return mk_var("%%%s%d" % (hint, next(_FRESH)), sort)


def fresh_rename(t: Term, hint: str = "") -> tuple[Term, Subst]:
    ren = Subst({v: fresh_var(v.sort, hint) for v in vars_in_order(t)})
    return ren.apply(t), ren


def fresh_rename_all(ts, hint: str = ""):
    vs = []
    seen = set()
    for t in ts:
        for v in vars_in_order(t):
            if v not in seen:
                seen.add(v)
                vs.append(v)
    ren = Subst({v: fresh_var(v.sort, hint) for v in vs})
    return [ren.apply(t) for t in ts], ren


# ---- positions --------------------------------------------------------------

def subterms_at(t: Term, with_submultisets: bool = False):
    """All non-variable positions pre-order as (position, subterm). AC
    positions index distinct elements. With with_submultisets, AC nodes also
    yield proper sub-multisets of >= 2 arguments as pseudo-positions."""
    out = []
    stack = [((), t)]
    while stack:
        pos, x = stack.pop()
        if isinstance(x, Var):
            continue
        out.append((pos, x))
        if with_submultisets and x.is_ac:
            total = sum(c for _, c in x.args)
            ranges = [range(c + 1) for _, c in x.args]
            for pick in itertools.product(*ranges):
                n = sum(pick)
                if n < 2 or n == total:
                    continue
                sub = tuple((e, k) for (e, _), k in zip(x.args, pick) if k)
                out.append((pos + (("ms", sub),), _mk_ac(x.op, x.ax, sub)))
        kids = x.elems()
        for i in range(len(kids) - 1, -1, -1):
            stack.append((pos + (i,), kids[i]))
    return out


def subterm(t: Term, pos) -> Term:
    x = t
    for p in pos:
        if not isinstance(x, App):
            raise InvalidPosition(str(pos))
        if isinstance(p, tuple) and p and p[0] == "ms":
            return _mk_ac(x.op, x.ax, p[1])
        kids = x.elems()
        if not 0 <= p < len(kids):
            raise InvalidPosition(str(pos))
        x = kids[p]
    return x


def replace(t: Term, pos, s: Term) -> Term:
    if not pos:
        return s
    if not isinstance(t, App):
        raise InvalidPosition(str(pos))
    p, rest = pos[0], pos[1:]
    if isinstance(p, tuple) and p and p[0] == "ms":
        if rest:
            raise InvalidPosition(str(pos))
        sub = dict()
        for e, c in p[1]:
            sub[e] = c
        pairs = [(s, 1)]
        for e, c in t.args:
            left = c - sub.get(e, 0)
            if left < 0:
                raise InvalidPosition(str(pos))
            if left:
                pairs.append((e, left))
        return _mk_ac(t.op, t.ax, pairs)
    kids = t.elems()
    if not 0 <= p < len(kids):
        raise InvalidPosition(str(pos))
    new = replace(kids[p], rest, s)
    if t.is_ac:
        pairs = [(e, c - 1 if i == p else c)
                 for i, (e, c) in enumerate(t.args)]
        pairs.append((new, 1))
        return _mk_ac(t.op, t.ax, pairs)
    kids[p] = new
    return mk_app(t.op, kids, t.ax)


# ---- debug printing ---------------------------------------------------------

def debug_str(t: Term, budget: int = 400) -> str:
    """Prefix-notation dump with a node budget; not the module syntax."""
    out = []

    def go(x, left):
        if left[0] <= 0:
            out.append("...")
            return
        left[0] -= 1
        if isinstance(x, Var):
            out.append(x.name)
            return
        if x.is_ac:
            kids = []
            for e, c in x.args:
                kids.extend([e] * min(c, budget))
        else:
            kids = list(x.args)
        if not kids:
            out.append(x.op)
            return
        out.append(x.op)
        out.append("(")
        for i, k in enumerate(kids):
            if i:
                out.append(", ")
            go(k, left)
        out.append(")")

    go(t, [budget])
    return "".join(out)
