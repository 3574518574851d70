"""Order-sorted signatures: sort graphs, operator declarations, axioms.

Sorts are plain strings. The sort graph closes subsort declarations
reflexively and transitively and synthesizes one top sort per connected
component so that least upper bounds always exist inside a component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IllTyped, UnknownSort, UnsupportedAxioms


class SortGraph:
    def __init__(self):
        self._sorts = {}  # insertion-ordered set of sort names
        self._edges = {}  # sort -> set of direct supersorts
        self._cache = None

    def add_sort(self, name: str):
        if name not in self._sorts:
            self._sorts[name] = True
            self._edges.setdefault(name, set())
            self._cache = None

    def add_subsort(self, lower: str, upper: str):
        for s in (lower, upper):
            if s not in self._sorts:
                raise UnknownSort(s)
        if lower == upper:
            raise IllTyped("subsort cycle at %s" % lower)
        self._edges[lower].add(upper)
        self._cache = None

    @property
    def sorts(self):
        return frozenset(self._sorts)

    @property
    def order(self):
        """Sort names in declaration order."""
        return list(self._sorts)

    def direct_pairs(self):
        """Declared subsort pairs (lower, upper), deterministically ordered."""
        return [(s, u) for s in self._sorts for u in sorted(self._edges[s])]

    # -- closure ------------------------------------------------------------

    def _closure(self):
        if self._cache is not None:
            return self._cache
        # connected components over the undirected subsort relation
        comp = {}
        for s in sorted(self._sorts):
            if s in comp:
                continue
            stack, members = [s], []
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp[x] = s
                members.append(x)
                for y in self._edges[x]:
                    stack.append(y)
                for y, ups in self._edges.items():
                    if x in ups:
                        stack.append(y)
            rep = min(members)
            for m in members:
                comp[m] = rep
        tops = {rep: "Top[%s]" % rep for rep in set(comp.values())}
        # reflexive-transitive supersorts, with the synthesized top appended
        supers = {}

        def walk(s):
            if s in supers:
                return supers[s]
            supers[s] = {s}  # cycle guard; subsort cycles are rejected above
            acc = {s}
            for up in self._edges.get(s, ()):
                acc |= walk(up)
            supers[s] = acc
            return acc

        for s in self._sorts:
            walk(s)
        for s in self._sorts:
            supers[s] = frozenset(supers[s] | {tops[comp[s]]})
        for rep, top in tops.items():
            supers[top] = frozenset({top})
            comp[top] = rep
        subs = {s: set() for s in supers}
        for s, ups in supers.items():
            for u in ups:
                subs[u].add(s)
        self._cache = (supers, {k: frozenset(v) for k, v in subs.items()}, comp)
        return self._cache

    def known(self, s: str) -> bool:
        supers, _, _ = self._closure()
        return s in supers

    def leq(self, a: str, b: str) -> bool:
        supers, _, _ = self._closure()
        if a not in supers or b not in supers:
            raise UnknownSort(a if a not in supers else b)
        return b in supers[a]

    def same_kind(self, a: str, b: str) -> bool:
        _, _, comp = self._closure()
        return comp.get(a) == comp.get(b) and a in comp

    def top_of(self, s: str) -> str:
        _, _, comp = self._closure()
        return "Top[%s]" % comp[s]

    def lub_set(self, a: str, b: str):
        """Minimal common supersorts; nonempty iff a, b share a component."""
        supers, _, _ = self._closure()
        common = supers[a] & supers[b]
        return frozenset(s for s in common
                         if not any(t != s and s in supers[t] for t in common))

    def glb_set(self, a: str, b: str):
        """Maximal common subsorts; may be empty."""
        supers, subs, _ = self._closure()
        common = subs[a] & subs[b]
        return frozenset(s for s in common
                         if not any(t != s and t in supers[s] for t in common))


@dataclass(frozen=True)
class AxiomSet:
    assoc: bool = False
    comm: bool = False
    identity: object = None  # ground Term, or None
    id_side: str = "both"    # 'both' | 'left' | 'right'

    @property
    def tag(self):
        if self.assoc and self.comm:
            return "ACU" if self.identity is not None else "AC"
        if self.comm:
            return "CU" if self.identity is not None else "C"
        if self.assoc:
            return "AU" if self.identity is not None else "A"
        return "U" if self.identity is not None else "free"

    @property
    def is_ac(self):
        return self.assoc and self.comm


FREE = AxiomSet()


@dataclass(frozen=True)
class OpDecl:
    name: str
    arg_sorts: tuple
    result_sort: str
    ctor: bool = False

    @property
    def arity(self):
        return len(self.arg_sorts)


@dataclass
class Equation:
    lhs: object
    rhs: object
    label: str = ""
    variant: bool = False

    def __repr__(self):
        return "Equation(%r, %s = %s)" % (self.label, self.lhs, self.rhs)


class Theory:
    """A signature plus its equations. Also owns the variable declarations
    used when parsing terms against this module."""

    def __init__(self, name="THEORY"):
        self.name = name
        self.sorts = SortGraph()
        self.ops = {}      # name -> [OpDecl]
        self.axioms = {}   # name -> AxiomSet
        self.equations = []
        self.var_sorts = {}  # declared variable name -> sort
        self.protecting = []
        self._ls_cache = {}
        self._binop_cache = {}
        self._acnt_cache = {}

    # -- construction ---------------------------------------------------

    def add_sort(self, name):
        self.sorts.add_sort(name)

    def add_subsort(self, lower, upper):
        self.sorts.add_subsort(lower, upper)
        self._clear_sort_caches()

    def add_op(self, name, arg_sorts, result_sort, axioms=FREE, ctor=False):
        for s in tuple(arg_sorts) + (result_sort,):
            if not self.sorts.known(s):
                raise UnknownSort(s)
        if axioms.assoc or axioms.comm:
            if len(arg_sorts) != 2:
                raise UnsupportedAxioms("%s: axioms need a binary operator" % name)
        decls = self.ops.setdefault(name, [])
        if decls and len(arg_sorts) != decls[0].arity:
            raise IllTyped("op %s redeclared with different arity" % name)
        prev = self.axioms.get(name)
        if prev is not None and prev != axioms:
            raise UnsupportedAxioms(
                "op %s: overloads must share axiom attributes" % name)
        decls.append(OpDecl(name, tuple(arg_sorts), result_sort, ctor))
        self.axioms[name] = axioms
        self._clear_sort_caches()

    def _clear_sort_caches(self):
        self._ls_cache.clear()
        self._binop_cache.clear()
        self._acnt_cache.clear()

    def add_equation(self, eq: Equation):
        self.equations.append(eq)

    def add_var(self, name, sort):
        if not self.sorts.known(sort):
            raise UnknownSort(sort)
        self.var_sorts[name] = sort

    def ax(self, name) -> AxiomSet:
        return self.axioms.get(name, FREE)

    def decls(self, name):
        try:
            return self.ops[name]
        except KeyError:
            raise UnknownSort("undeclared operator %s" % name) from None

    # -- queries ----------------------------------------------------------

    def sort_leq(self, a, b):
        return self.sorts.leq(a, b)

    def least_sort(self, term):
        from .terms import least_sort
        return least_sort(self, term)

    def classify_symbols(self):
        """Split operator names into (defined, constructors) by whether they
        root an equation's lhs."""
        defined = set()
        for eq in self.equations:
            root = getattr(eq.lhs, "op", None)
            if root is not None:
                defined.add(root)
        ctors = set(self.ops) - defined
        return frozenset(defined), frozenset(ctors)

    def copy_signature(self, name=None):
        """New theory sharing sorts/ops/axioms but no equations."""
        t = Theory(name or self.name)
        t.sorts = self.sorts
        t.ops = {k: list(v) for k, v in self.ops.items()}
        t.axioms = dict(self.axioms)
        t.var_sorts = dict(self.var_sorts)
        t.protecting = list(self.protecting)
        return t
