"""Reading and printing functional modules and terms.

The accepted syntax is a small subset of Maude functional modules:

    fmod NAME is
      protecting NAT .                      --- built-in: Nat, 0, s_
      sorts A B .  subsort A < B .
      op _;_ : A A -> A [ctor assoc comm id: mt] .
      ops f g : A -> A .
      var X : A .
      eq [l1] : f(X) = g(X) [variant] .
    endfm

Comments run from --- to the end of the line. The characters (){}[],;
always delimit tokens; everything else splits on whitespace. An `op`
name is the concatenation of all tokens before the `:`, so bracket-y
names like _{_}_ need no escaping; `ops` declares several ops and does
not concatenate. A `.` token ends a statement when the next token is a
keyword (or the module end), which lets `.` also appear inside mixfix
operator names such as _->_._ .

Terms are parsed with a chart over the declared mixfix templates: each
underscore in an operator name is an argument hole, the rest of the
name is matched literally; operators without underscores use prefix
syntax f(t1, ..., tn). Sort checking is the arbiter for every candidate
parse, and a term that still has several distinct canonical parses is
rejected as ambiguous.
"""

from .errors import ParseError
from .signature import AxiomSet, Equation, FREE, Theory
from .terms import Term, Var, least_sort, mk_app, mk_var
from .errors import IllTyped

__all__ = ["tokenize", "parse_module", "parse_term",
           "print_module", "print_term"]

_SPECIALS = "(){}[],;"

_KEYWORDS = {"sort", "sorts", "subsort", "subsorts", "op", "ops",
             "var", "vars", "eq", "protecting", "endfm"}

_HOLE = None  # template element standing for an argument position


def tokenize(text: str):
    """(token, line, column) triples; --- comments are skipped."""
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        cut = line.find("---")
        if cut >= 0:
            line = line[:cut]
        col = 0
        n = len(line)
        while col < n:
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            if ch in _SPECIALS:
                out.append((ch, ln, col + 1))
                col += 1
                continue
            start = col
            while col < n and not line[col].isspace() \
                    and line[col] not in _SPECIALS:
                col += 1
            out.append((line[start:col], ln, start + 1))
    return out


def _toks(text):
    return [t for t, _, _ in tokenize(text)]


# ---- term parsing ------------------------------------------------------

def _name_elems(name: str):
    """Mixfix template: literal token runs and argument holes."""
    elems = []
    lit = []

    def flush():
        if lit:
            elems.extend(_toks("".join(lit)))
            del lit[:]

    for ch in name:
        if ch == "_":
            flush()
            elems.append(_HOLE)
        else:
            lit.append(ch)
    flush()
    return elems


def _templates(th: Theory):
    tpls = []
    for name, decls in th.ops.items():
        arity = decls[0].arity
        if "_" in name:
            elems = _name_elems(name)
            if sum(1 for e in elems if e is _HOLE) != arity:
                raise ParseError(
                    "operator %s has %d argument places for arity %d"
                    % (name, sum(1 for e in elems if e is _HOLE), arity))
        elif arity == 0:
            continue  # bare constants are handled per token
        else:
            elems = [name, "("]
            for k in range(arity):
                if k:
                    elems.append(",")
                elems.append(_HOLE)
            elems.append(")")
        tpls.append((name, elems))
    return tpls


def parse_term(th: Theory, text, lets=None) -> Term:
    toks = _toks(text) if isinstance(text, str) else list(text)
    if not toks:
        raise ParseError("empty term")
    return _parse_tokens(th, toks, lets or {})


def _parse_tokens(th, toks, lets):
    if not toks:
        raise ParseError("empty term")
    n = len(toks)
    templates = _templates(th)
    spans = {}

    def try_app(out, op, args):
        try:
            t = mk_app(op, args, th.ax(op))
            least_sort(th, t)
        except IllTyped:
            return
        if not any(t is u for u in out):
            out.append(t)

    for ln in range(1, n + 1):
        for i in range(0, n - ln + 1):
            j = i + ln
            out = []
            if ln == 1:
                tok = toks[i]
                if tok in lets:  # an explicit binding shadows a var decl
                    out.append(lets[tok])
                elif tok in th.var_sorts:
                    out.append(mk_var(tok, th.var_sorts[tok]))
                if any(d.arity == 0 for d in th.ops.get(tok, ())):
                    try_app(out, tok, [])
            if ln >= 3 and toks[i] == "(" and toks[j - 1] == ")":
                for t in spans[(i + 1, j - 1)]:
                    if not any(t is u for u in out):
                        out.append(t)
            for op, elems in templates:
                if len(elems) > ln:
                    continue
                if elems[0] is not _HOLE and elems[0] != toks[i]:
                    continue
                if elems[-1] is not _HOLE and elems[-1] != toks[j - 1]:
                    continue
                for args in _match_template(elems, 0, i, j, spans, toks):
                    try_app(out, op, args)
            spans[(i, j)] = out
    found = spans[(0, n)]
    if not found:
        raise ParseError("cannot parse term: %s" % " ".join(toks))
    if len(found) > 1:
        raise ParseError("ambiguous term %s: %s"
                         % (" ".join(toks), " vs ".join(map(str, found))))
    return found[0]


def _match_template(elems, k, i, j, spans, toks):
    if k == len(elems):
        if i == j:
            yield []
        return
    e = elems[k]
    if e is not _HOLE:
        if i < j and toks[i] == e:
            yield from _match_template(elems, k + 1, i + 1, j, spans, toks)
        return
    rest = len(elems) - k - 1  # every later element needs >= 1 token
    for mid in range(i + 1, j - rest + 1):
        sub = spans.get((i, mid))
        if not sub:
            continue
        for tail in _match_template(elems, k + 1, mid, j, spans, toks):
            for a in sub:
                yield [a] + tail


# ---- module parsing ----------------------------------------------------

def parse_module(text: str) -> Theory:
    toks = tokenize(text)
    pos = 0

    def err(msg, at=None):
        where = ""
        if at is not None and at < len(toks):
            where = " at line %d" % toks[at][1]
        raise ParseError(msg + where)

    def tok(k):
        return toks[k][0] if k < len(toks) else None

    if tok(0) != "fmod" or tok(2) != "is":
        err("expected 'fmod NAME is'", 0)
    th = Theory(tok(1))
    pos = 3
    while True:
        head = tok(pos)
        if head is None:
            err("missing endfm", pos)
        if head == "endfm":
            break
        stmt, pos = _read_statement(toks, pos, err)
        _dispatch(th, stmt, err)
    return th


def _read_statement(toks, pos, err):
    """Tokens up to the closing '.'; a '.' only terminates when followed
    by a keyword or the module end."""
    out = []
    k = pos
    while k < len(toks):
        t = toks[k][0]
        if t == ".":
            nxt = toks[k + 1][0] if k + 1 < len(toks) else "endfm"
            if nxt in _KEYWORDS:
                return out, k + 1
        out.append(t)
        k += 1
    err("statement not terminated by '.'", pos)


def _dispatch(th, stmt, err):
    head = stmt[0]
    if head in ("sort", "sorts"):
        for s in stmt[1:]:
            th.add_sort(s)
    elif head in ("subsort", "subsorts"):
        groups = [[]]
        for t in stmt[1:]:
            if t == "<":
                groups.append([])
            else:
                groups[-1].append(t)
        if len(groups) < 2 or not all(groups):
            err("subsort needs 'A < B'")
        for lows, ups in zip(groups, groups[1:]):
            for lo in lows:
                for up in ups:
                    th.add_subsort(lo, up)
    elif head == "protecting":
        if stmt[1:] != ["NAT"]:
            err("only 'protecting NAT' is supported")
        _add_nat(th)
    elif head in ("op", "ops"):
        _op_statement(th, head, stmt, err)
    elif head in ("var", "vars"):
        if ":" not in stmt:
            err("var needs ': Sort'")
        at = stmt.index(":")
        if at + 2 != len(stmt):
            err("var takes a single sort")
        for name in stmt[1:at]:
            th.add_var(name, stmt[at + 1])
    elif head == "eq":
        _eq_statement(th, stmt, err)
    else:
        err("unknown statement '%s'" % head)


def _add_nat(th):
    th.protecting.append("NAT")
    th.add_sort("Nat")
    if not th.ops.get("0"):
        th.add_op("0", [], "Nat", ctor=True)
    if not th.ops.get("s_"):
        th.add_op("s_", ["Nat"], "Nat", ctor=True)


def _op_statement(th, head, stmt, err):
    if ":" not in stmt:
        err("op needs ': ARGS -> SORT'")
    at = stmt.index(":")
    names = stmt[1:at] if head == "ops" else ["".join(stmt[1:at])]
    if not names or not all(names):
        err("missing operator name")
    rest = stmt[at + 1:]
    if "->" not in rest:
        err("op needs '->'")
    arrow = rest.index("->")
    arg_sorts = rest[:arrow]
    rest = rest[arrow + 1:]
    if not rest:
        err("missing result sort")
    result = rest[0]
    attrs = rest[1:]
    axioms, ctor = _op_attrs(th, attrs, err)
    for name in names:
        th.add_op(name, arg_sorts, result, axioms, ctor=ctor)


def _op_attrs(th, attrs, err):
    if not attrs:
        return FREE, False
    if attrs[0] != "[" or attrs[-1] != "]":
        err("malformed attribute list %s" % " ".join(attrs))
    toks = attrs[1:-1]
    assoc = comm = ctor = False
    identity = None
    id_side = "both"
    k = 0
    while k < len(toks):
        t = toks[k]
        if t == "assoc":
            assoc = True
        elif t == "comm":
            comm = True
        elif t == "ctor":
            ctor = True
        elif t in ("id:", "left", "right"):
            side = "both"
            if t in ("left", "right"):
                side = t
                k += 1
                if k >= len(toks) or toks[k] != "id:":
                    err("expected 'id:' after '%s'" % t)
            stop = {"assoc", "comm", "ctor", "id:", "left", "right"}
            term_toks = []
            k += 1
            while k < len(toks) and toks[k] not in stop:
                term_toks.append(toks[k])
                k += 1
            k -= 1
            identity = _parse_tokens(th, term_toks, {})
            id_side = side
        else:
            err("unknown attribute '%s'" % t)
        k += 1
    return AxiomSet(assoc, comm, identity, id_side), ctor


def _eq_statement(th, stmt, err):
    body = stmt[1:]
    label = ""
    if body and body[0] == "[":
        close = body.index("]") if "]" in body else len(body)
        if close + 1 >= len(body) or body[close + 1] != ":":
            err("malformed equation label")
        label = " ".join(body[1:close])
        body = body[close + 2:]
    variant = False
    if len(body) >= 3 and body[-1] == "]" and body[-3] == "[":
        if body[-2] != "variant":
            err("unknown equation attribute '%s'" % body[-2])
        variant = True
        body = body[:-3]
    if "=" not in body:
        err("equation needs '='")
    at = body.index("=")
    lhs, rhs = body[:at], body[at + 1:]
    if not lhs or not rhs:
        err("empty equation side")
    th.add_equation(Equation(_parse_tokens(th, lhs, {}),
                             _parse_tokens(th, rhs, {}),
                             label, variant=variant))


# ---- printing ----------------------------------------------------------

def print_term(th: Theory, t: Term) -> str:
    txt, _ = _render(th, t)
    return txt


def _render(th, t):
    """(text, atomic): atomic renderings never need parentheses."""
    if isinstance(t, Var):
        return t.name, True
    name = t.op
    if "_" not in name:
        if not t.args:
            return name, True
        inner = ", ".join(_render(th, a)[0] for a in t.args)
        return "%s(%s)" % (name, inner), True
    elems = _name_elems(name)
    if t.ax.assoc:
        args = []
        if t.is_ac:
            for e, c in t.pairs:
                args.extend([e] * c)
        else:
            args = list(t.args)
        sep = [e for e in elems if e is not _HOLE]
        joint = " %s " % " ".join(sep) if sep else " "
        return joint.join(_wrap(th, a) for a in args), False
    out = []
    k = 0
    for e in elems:
        if e is _HOLE:
            out.append(_wrap(th, t.args[k]))
            k += 1
        else:
            out.append(e)
    txt = " ".join(out)
    for a, b in (("{ ", "{"), (" }", "}"), ("( ", "("), (" )", ")")):
        txt = txt.replace(a, b)
    return txt, elems[0] is not _HOLE and elems[-1] is not _HOLE


def _wrap(th, t):
    txt, atomic = _render(th, t)
    return txt if atomic else "(%s)" % txt


def print_module(th: Theory) -> str:
    lines = ["fmod %s is" % th.name]
    skip_sorts, skip_ops = set(), set()
    for p in th.protecting:
        lines.append("  protecting %s ." % p)
        if p == "NAT":
            skip_sorts.add("Nat")
            skip_ops.update(("0", "s_"))
    sorts = [s for s in th.sorts.order if s not in skip_sorts]
    if sorts:
        lines.append("  sorts %s ." % " ".join(sorts))
    for lo, up in th.sorts.direct_pairs():
        lines.append("  subsort %s < %s ." % (lo, up))
    for name, decls in th.ops.items():
        if name in skip_ops:
            continue
        for d in decls:
            attrs = _attr_text(th, th.ax(name), d.ctor)
            lines.append("  op %s : %s-> %s%s ."
                         % (name,
                            "".join(s + " " for s in d.arg_sorts),
                            d.result_sort, attrs))
    for v, s in th.var_sorts.items():
        lines.append("  var %s : %s ." % (v, s))
    for e in th.equations:
        label = "[%s] : " % e.label if e.label else ""
        variant = " [variant]" if e.variant else ""
        lines.append("  eq %s%s = %s%s ."
                     % (label, print_term(th, e.lhs),
                        print_term(th, e.rhs), variant))
    lines.append("endfm")
    return "\n".join(lines) + "\n"


def _attr_text(th, ax: AxiomSet, ctor: bool) -> str:
    parts = []
    if ctor:
        parts.append("ctor")
    if ax.assoc:
        parts.append("assoc")
    if ax.comm:
        parts.append("comm")
    if ax.identity is not None:
        side = {"both": "", "left": "left ", "right": "right "}[ax.id_side]
        parts.append("%sid: %s" % (side, print_term(th, ax.identity)))
    return " [%s]" % " ".join(parts) if parts else ""
