"""One-step narrowing modulo axioms and folding variant narrowing trees.

A narrowing step unifies a non-variable subterm with a freshly renamed rule
left-hand side and normalizes the instantiated contractum, so every node of
a tree is a variant (normal form, computed substitution) of the goal.
Folding records a candidate already subsumed by an existing node instead of
expanding it; the caller's stop predicate (the embedding whistle) turns a
candidate into a leaf.
"""

from dataclasses import dataclass, field

from .signature import FREE
from .terms import (Subst, Term, Var, fresh_rename, mk_app, replace,
                    sort_terms, subterms_at)
from .rewrite import normalize, rewrite_step
from . import solver

DEFAULT_MAX_DEPTH = 25

__all__ = ["VariantNode", "NarrowingTree", "narrow_steps",
           "build_folding_tree", "leaves", "derivations", "to_dot",
           "DEFAULT_MAX_DEPTH"]


def _tup(ts):
    return mk_app("\x00tup", list(ts), FREE)


def narrow_steps(t: Term, ct):
    """All one-step narrowings of t as (substitution restricted to vars(t),
    normalized result), deduplicated modulo axioms and renaming, most
    general representatives only."""
    return [(sig, res) for sig, res, _, _ in _narrow_full(t, ct)]


def _narrow_full(t: Term, ct):
    """(restricted substitution, normalized result, rule label, position)
    per step, in deterministic generation order."""
    if isinstance(t, Var):
        return []
    th = ct.theory
    nf = normalize(t, ct)
    if nf is not t:
        # a reducible goal takes its rewrite normalization as the only step
        # (identity substitution); proper narrowing resumes from the result
        step = rewrite_step(t, ct)
        return [(Subst(), nf, step[1], step[2])]
    tvars = sort_terms(t.vset)
    cands = []
    packed = []
    for pos, sub in subterms_at(t):
        for rule in ct.by_root.get(sub.op, ()):
            lhs, ren = fresh_rename(rule.lhs, "N")
            rhs = ren.apply(rule.rhs)
            for sig in solver.unify_modulo(sub, lhs, th):
                res = normalize(sig.apply(replace(t, pos, rhs)), ct)
                rsig = Subst({v: normalize(b, ct)
                              for v, b in sig.items() if v in t.vset})
                pk = _tup([res] + [rsig.apply(v) for v in tvars])
                if any(solver.eq_modulo_renaming(pk, p0, th) is not None
                       for p0 in packed):
                    continue
                packed.append(pk)
                cands.append((rsig, res, rule.label, pos))
    # drop steps whose computed substitution is strictly less general
    sigs = [_tup([sig.apply(v) for v in tvars]) for sig, _, _, _ in cands]
    out = []
    for i, cand in enumerate(cands):
        redundant = any(
            j != i and solver.instance_of(sigs[i], sigs[j], th)
            and not (solver.instance_of(sigs[j], sigs[i], th) and j > i)
            for j in range(len(cands)))
        if not redundant:
            out.append(cand)
    return out


@dataclass
class VariantNode:
    term: Term
    acc: Subst                    # restricted to the goal's variables
    parent: object = None
    step: tuple = None            # (rule label, position, step substitution)
    depth: int = 0
    children: list = field(default_factory=list)
    folded_to: object = None
    stopped: bool = False         # whistle leaf
    depth_hit: bool = False       # max_depth leaf

    def ancestors(self):
        """Chain from the root down to the parent of this node."""
        out = []
        n = self.parent
        while n is not None:
            out.append(n)
            n = n.parent
        out.reverse()
        return out


@dataclass
class NarrowingTree:
    root: VariantNode
    goal_vars: list
    nodes: list = field(default_factory=list)
    folded_edges: list = field(default_factory=list)
    depth_hits: list = field(default_factory=list)

    def leaves(self):
        return leaves(self)

    def derivations(self):
        return derivations(self)


def build_folding_tree(t: Term, ct, stop=None,
                       max_depth: int = DEFAULT_MAX_DEPTH) -> NarrowingTree:
    """Breadth-first folding variant narrowing tree for goal t."""
    goal_vars = sort_terms(t.vset)
    root = VariantNode(t, Subst())
    tree = NarrowingTree(root, goal_vars, [root])
    kept = [root]
    frontier = [root]
    while frontier:
        nxt = []
        for n in frontier:
            if n.depth >= max_depth:
                n.depth_hit = True
                tree.depth_hits.append(n)
                continue
            for sig, res, label, pos in _narrow_full(n.term, ct):
                acc = n.acc.compose(sig).restrict(goal_vars)
                acc = Subst({v: normalize(b, ct) for v, b in acc.items()})
                child = VariantNode(res, acc, n, (label, pos, sig),
                                    n.depth + 1)
                n.children.append(child)
                tree.nodes.append(child)
                target = _find_subsumer(kept, child, goal_vars, ct)
                if target is not None:
                    child.folded_to = target
                    tree.folded_edges.append((child, target))
                    continue
                if stop is not None and stop(child.ancestors(), child):
                    child.stopped = True
                    continue
                kept.append(child)
                nxt.append(child)
        frontier = nxt
    return tree


def _find_subsumer(kept, cand, goal_vars, ct):
    """First existing node (w, tau) with a substitution rho such that
    w rho =_B cand.term and (tau rho) =_B cand.acc on the goal variables."""
    th = ct.theory
    pc = _tup([cand.term] + [cand.acc.apply(v) for v in goal_vars])
    for w in kept:
        pw = _tup([w.term] + [w.acc.apply(v) for v in goal_vars])
        for _rho in solver.match_modulo(pw, pc, th):
            return w
    return None


def leaves(tree: NarrowingTree):
    """Unexpanded, unfolded nodes; the root only when the tree is trivial."""
    return [n for n in tree.nodes if not n.children and n.folded_to is None]


def derivations(tree: NarrowingTree):
    return [(n.acc, n.term) for n in leaves(tree)]


def to_dot(tree: NarrowingTree, name: str = "variants",
           printer=str) -> str:
    """GraphViz rendering: folded edges dashed, whistle leaves doubled."""
    ids = {id(n): i for i, n in enumerate(tree.nodes)}
    lines = ["digraph %s {" % name,
             "  node [shape=box, fontname=monospace];"]
    for n in tree.nodes:
        attrs = ""
        if n.stopped:
            attrs = ", peripheries=2"
        elif n.folded_to is not None:
            attrs = ", style=dotted"
        elif n.depth_hit:
            attrs = ", color=red"
        lines.append('  n%d [label="%s"%s];'
                     % (ids[id(n)], _esc(printer(n.term)), attrs))
        if n.parent is not None:
            lbl = ""
            if n.step is not None:
                sig = n.acc
                lbl = "%s %s" % (n.step[0], sig)
            lines.append('  n%d -> n%d [label="%s"];'
                         % (ids[id(n.parent)], ids[id(n)], _esc(lbl)))
    for src, dst in tree.folded_edges:
        lines.append("  n%d -> n%d [style=dashed, constraint=false];"
                     % (ids[id(src)], ids[id(dst)]))
    lines.append("}")
    return "\n".join(lines)


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
