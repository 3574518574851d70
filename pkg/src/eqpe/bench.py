"""Benchmark harness comparing a program against its specialization.

Both sides evaluate the same job: a call template with a single hole
`_` is filled with a generated input, the original call is translated
into the specialized symbols through the renaming map, and each side
is normalized --runs times. Reported times are wall-clock averages;
rewrite steps and match attempts are deterministic for a fixed seed.

Input generators by least sort of the hole's module:
  string  random word in (0)*(1)* of the requested length
  graph   multiset of size nodes cycling through the declared ids,
          each with a null right child
"""

from dataclasses import dataclass
import random
import time

from .engine import rename_term
from .errors import InputError
from .parse import parse_term
from .rewrite import compile_theory, normalize
from .terms import mk_app

HOLE_NAME = "_"

_METRICS = ("ms", "steps", "match_attempts")


@dataclass
class ProgramStats:
    ms: float = 0.0
    steps: float = 0.0
    match_attempts: float = 0.0

    def as_dict(self):
        return {m: getattr(self, m) for m in _METRICS}


@dataclass
class BenchReport:
    size: int
    seed: int
    runs: int
    original: ProgramStats
    specialized: ProgramStats

    def improvement(self, metric: str) -> float:
        """100 x (original - specialized) / original; 0 for a zero base."""
        o = getattr(self.original, metric)
        s = getattr(self.specialized, metric)
        if o == 0:
            return 0.0
        return 100.0 * (o - s) / o

    def as_dict(self):
        return {"size": self.size, "seed": self.seed, "runs": self.runs,
                "original": self.original.as_dict(),
                "specialized": self.specialized.as_dict(),
                "improvement": {m: self.improvement(m) for m in _METRICS}}


def detect_generator(th) -> str:
    if "{___}" in th.ops:
        return "graph"
    if "__" in th.ops:
        return "string"
    raise InputError("no input generator fits module %s; "
                     "expected string or graph constructors" % th.name)


def generate_input(th, kind: str, size: int, seed: int):
    if kind == "auto":
        kind = detect_generator(th)
    rng = random.Random(seed)
    if kind == "string":
        return _gen_string(th, size, rng)
    if kind == "graph":
        return _gen_graph(th, size)
    raise InputError("unknown generator %r" % kind)


def _gen_string(th, size, rng):
    for op in ("0", "1", "eps", "__"):
        th.decls(op)
    zeros = rng.randint(0, size)
    elems = ([mk_app("0", [])] * zeros
             + [mk_app("1", [])] * (size - zeros))
    if not elems:
        return mk_app("eps", [])
    if len(elems) == 1:
        return elems[0]
    return mk_app("__", elems, th.ax("__"))


def _gen_graph(th, size):
    for op in ("{___}", "_;_", "#", "mt"):
        th.decls(op)
    ids = [mk_app(d, []) for d in "01234" if d in th.ops]
    null = mk_app("#", [])
    k = len(ids)
    nodes = [mk_app("{___}", [ids[i % k], ids[(i + 1) % k], null])
             for i in range(size)]
    if not nodes:
        return mk_app("mt", [])
    if len(nodes) == 1:
        return nodes[0]
    return mk_app("_;_", nodes, th.ax("_;_"))


def measure(ct, term, runs: int) -> ProgramStats:
    out = ProgramStats()
    for _ in range(runs):
        t0 = time.perf_counter()
        normalize(term, ct)
        out.ms += (time.perf_counter() - t0) * 1000.0
        out.steps += ct.stats.steps
        out.match_attempts += ct.stats.match_attempts
    out.ms /= runs
    out.steps /= runs
    out.match_attempts /= runs
    return out


def run_bench(orig_th, spec_th, rmap, template: str, size: int,
              seed: int = 0, runs: int = 10, lets=None,
              kind: str = "auto") -> BenchReport:
    """Fill the template hole, translate, time both normalizations."""
    ct_o = compile_theory(orig_th)
    ct_s = compile_theory(spec_th)
    bound = dict(lets or {})
    bound[HOLE_NAME] = generate_input(orig_th, kind, size, seed)
    call_o = parse_term(orig_th, template, bound)
    call_s = rename_term(call_o, rmap, ct_o)
    return BenchReport(size, seed, runs,
                       original=measure(ct_o, call_o, runs),
                       specialized=measure(ct_s, call_s, runs))


def format_report(report: BenchReport) -> str:
    rows = [("", "original", "specialized", "improvement")]
    labels = {"ms": "wall ms", "steps": "rewrite steps",
              "match_attempts": "match attempts"}
    for m in _METRICS:
        rows.append((labels[m],
                     "%.2f" % getattr(report.original, m),
                     "%.2f" % getattr(report.specialized, m),
                     "%.2f%%" % report.improvement(m)))
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    lines = ["  ".join(cell.rjust(w) if i else cell.ljust(w)
                       for i, (cell, w) in enumerate(zip(r, widths)))
             for r in rows]
    lines.append("size=%d seed=%d runs=%d"
                 % (report.size, report.seed, report.runs))
    return "\n".join(lines)
