"""Interval propagation for cohomology dimensions.

Every sheaf symbol F carries integer unknowns h0(F), h1(F), h2(F) and
chi(F).  Rules turn into linear equalities between unknowns:

* chi(F) = h0 - h1 + h2 always holds;
* a short exact sequence 0 -> A -> B -> C -> 0 yields the nine-term long
  exact sequence, encoded through the ranks r_k of its maps:
  dim V_k = r_{k-1} + r_k with r_0 = r_9 = 0 and every r_k >= 0;
* Serre duality h^i(F) = h^{2-i}(G), direct sums, chi facts, point or
  interval axioms, and known map ranks.

Bounds are narrowed to a fixpoint.  Each bound remembers the set of rules
it was derived from, so a derived value or an emptied interval can be
explained by the rules that produced it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

MAX_PASSES = 10_000


class LedgerError(ValueError):
    """Malformed script or a rule that mentions an undeclared symbol."""


# -- data -------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: Optional[int]
    hi: Optional[int]

    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def contains(self, v: int) -> bool:
        return (self.lo is None or self.lo <= v) and (self.hi is None or v <= self.hi)

    def __str__(self):
        if self.is_point():
            return str(self.lo)
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"[{lo},{hi}]"


@dataclass(frozen=True)
class SheafSym:
    name: str
    chern: object = None


@dataclass(frozen=True)
class Axiom:
    symbol: str
    index: int
    lo: Optional[int]
    hi: Optional[int]
    provenance: str

    def label(self) -> str:
        return f"axiom h{self.index}({self.symbol}) = {Interval(self.lo, self.hi)}"


@dataclass(frozen=True)
class ChiFact:
    symbol: str
    value: int
    provenance: str

    def label(self) -> str:
        return f"chi({self.symbol}) = {self.value}"


@dataclass(frozen=True)
class SES:
    name: str
    a: str
    b: str
    c: str
    provenance: str = ""

    def label(self) -> str:
        return f"ses {self.name}: 0 -> {self.a} -> {self.b} -> {self.c} -> 0"

    def terms(self) -> List[Tuple[int, str]]:
        """The nine terms of the long exact sequence as (degree, symbol)."""
        return [(i, s) for i in range(3) for s in (self.a, self.b, self.c)]


@dataclass(frozen=True)
class SerreDual:
    f: str
    g: str
    provenance: str = ""

    def label(self) -> str:
        return f"serre h^i({self.f}) = h^(2-i)({self.g})"


@dataclass(frozen=True)
class DirectSum:
    total: str
    parts: Tuple[str, ...]
    provenance: str = ""

    def label(self) -> str:
        return f"sum {self.total} = " + " + ".join(self.parts)


@dataclass(frozen=True)
class MapRank:
    ses: str
    source_degree: int
    source: str
    rank: int
    provenance: str

    def label(self) -> str:
        return f"maprank in {self.ses}: map out of H{self.source_degree}({self.source}) has rank {self.rank}"


Rule = Axiom | ChiFact | SES | SerreDual | DirectSum | MapRank


@dataclass(frozen=True)
class Claim:
    symbol: str
    index: int
    value: int

    def label(self) -> str:
        return f"h{self.index}({self.symbol}) = {self.value}"


# -- constraint store ---------------------------------------------------------


Var = Tuple


@dataclass
class _Constraint:
    coeffs: Dict[Var, int]
    const: int
    rule: Optional[int]


class _Store:
    def __init__(self):
        self.lo: Dict[Var, Optional[int]] = {}
        self.hi: Dict[Var, Optional[int]] = {}
        self.lo_why: Dict[Var, FrozenSet[int]] = {}
        self.hi_why: Dict[Var, FrozenSet[int]] = {}
        self.conflict: Optional[Tuple[Var, FrozenSet[int]]] = None

    def declare(self, var: Var, lo: Optional[int] = None, hi: Optional[int] = None):
        if var not in self.lo:
            self.lo[var], self.hi[var] = lo, hi
            self.lo_why[var] = frozenset()
            self.hi_why[var] = frozenset()

    def raise_lo(self, var, value: int, why: FrozenSet[int]) -> bool:
        cur = self.lo[var]
        if cur is not None and value <= cur:
            return False
        self.lo[var], self.lo_why[var] = value, why
        self._check(var)
        return True

    def lower_hi(self, var, value: int, why: FrozenSet[int]) -> bool:
        cur = self.hi[var]
        if cur is not None and value >= cur:
            return False
        self.hi[var], self.hi_why[var] = value, why
        self._check(var)
        return True

    def _check(self, var):
        lo, hi = self.lo[var], self.hi[var]
        if lo is not None and hi is not None and lo > hi and self.conflict is None:
            self.conflict = (var, self.lo_why[var] | self.hi_why[var])


def _narrow(store: _Store, con: _Constraint) -> bool:
    """Bounds-consistency step for sum c_j x_j = const."""
    changed = False
    base = frozenset() if con.rule is None else frozenset([con.rule])
    items = list(con.coeffs.items())
    for t, ct in items:
        lo_sum, hi_sum = con.const, con.const
        lo_why, hi_why = base, base
        for v, c in items:
            if v == t:
                continue
            # contribution of -c*x_v to the right-hand side
            if c > 0:
                if store.hi[v] is None:
                    lo_sum = None
                elif lo_sum is not None:
                    lo_sum -= c * store.hi[v]
                    lo_why |= store.hi_why[v]
                if store.lo[v] is None:
                    hi_sum = None
                elif hi_sum is not None:
                    hi_sum -= c * store.lo[v]
                    hi_why |= store.lo_why[v]
            else:
                if store.lo[v] is None:
                    lo_sum = None
                elif lo_sum is not None:
                    lo_sum -= c * store.lo[v]
                    lo_why |= store.lo_why[v]
                if store.hi[v] is None:
                    hi_sum = None
                elif hi_sum is not None:
                    hi_sum -= c * store.hi[v]
                    hi_why |= store.hi_why[v]
        if ct < 0:
            lo_sum, hi_sum = (None if hi_sum is None else -hi_sum), (None if lo_sum is None else -lo_sum)
            lo_why, hi_why = hi_why, lo_why
        a = abs(ct)
        if lo_sum is not None:
            changed |= store.raise_lo(t, ceil(Fraction(lo_sum, a)), lo_why)
        if hi_sum is not None:
            changed |= store.lower_hi(t, floor(Fraction(hi_sum, a)), hi_why)
        if store.conflict:
            return changed
    return changed


# -- engine -----------------------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    symbol: str
    quantity: str
    value: int
    rules: Tuple[str, ...]


@dataclass
class LedgerReport:
    values: Dict[str, Dict[str, Interval]]
    derived: List[Derivation]
    open: List[Tuple[str, str, Interval]]
    contradiction: bool = False
    conflict: List[str] = field(default_factory=list)
    reason: str = ""

    def interval(self, symbol: str, quantity: str) -> Interval:
        return self.values[symbol][quantity]

    def h(self, symbol: str) -> Tuple[Interval, Interval, Interval]:
        v = self.values[symbol]
        return v["h0"], v["h1"], v["h2"]

    def point_h(self, symbol: str) -> Optional[Tuple[int, int, int]]:
        hs = self.h(symbol)
        if all(i.is_point() for i in hs):
            return tuple(i.lo for i in hs)
        return None

    def to_dict(self) -> dict:
        return {
            "contradiction": self.contradiction,
            "conflict": list(self.conflict),
            "reason": self.reason,
            "values": {
                s: {q: str(iv) for q, iv in sorted(qs.items())} for s, qs in sorted(self.values.items())
            },
            "derived": [
                {"symbol": d.symbol, "quantity": d.quantity, "value": d.value, "rules": list(d.rules)}
                for d in self.derived
            ],
            "open": [{"symbol": s, "quantity": q, "interval": str(iv)} for s, q, iv in self.open],
        }


def rule_text(rule: Rule) -> str:
    prov = getattr(rule, "provenance", "")
    return f"{rule.label()} [{prov}]" if prov else rule.label()


def _symbols_of(rule: Rule) -> List[str]:
    if isinstance(rule, (Axiom, ChiFact)):
        return [rule.symbol]
    if isinstance(rule, SES):
        return [rule.a, rule.b, rule.c]
    if isinstance(rule, SerreDual):
        return [rule.f, rule.g]
    if isinstance(rule, DirectSum):
        return [rule.total, *rule.parts]
    if isinstance(rule, MapRank):
        return [rule.source]
    raise LedgerError(f"unknown rule {rule!r}")


def _validate(symbols: Sequence[SheafSym], rules: Sequence[Rule]):
    names = {s.name for s in symbols}
    if len(names) != len(symbols):
        raise LedgerError("duplicate sheaf declaration")
    ses_names = {}
    for r in rules:
        for s in _symbols_of(r):
            if s not in names:
                raise LedgerError(f"undeclared symbol {s!r} in rule: {r.label()}")
        if isinstance(r, SES):
            if r.name in ses_names:
                raise LedgerError(f"duplicate sequence name {r.name!r}")
            ses_names[r.name] = r
        if isinstance(r, Axiom) and not r.provenance:
            raise LedgerError(f"axiom without provenance: {r.label()}")
        if isinstance(r, (ChiFact, MapRank)) and not r.provenance:
            raise LedgerError(f"fact without provenance: {r.label()}")
        if isinstance(r, Axiom) and r.index not in (0, 1, 2):
            raise LedgerError(f"cohomological degree must be 0, 1 or 2: {r.label()}")
    for r in rules:
        if isinstance(r, MapRank):
            seq = ses_names.get(r.ses)
            if seq is None:
                raise LedgerError(f"maprank refers to unknown sequence {r.ses!r}")
            if (r.source_degree, r.source) not in seq.terms():
                raise LedgerError(f"H{r.source_degree}({r.source}) is not a term of {r.ses}")


def _build(symbols: Sequence[SheafSym], rules: Sequence[Rule], active: Iterable[int]):
    store = _Store()
    cons: List[_Constraint] = []
    for s in symbols:
        for i in range(3):
            store.declare(("h", s.name, i), 0, None)
        store.declare(("chi", s.name))
        cons.append(_Constraint({("h", s.name, 0): 1, ("h", s.name, 1): -1, ("h", s.name, 2): 1,
                                 ("chi", s.name): -1}, 0, None))
    for k in sorted(active):
        r = rules[k]
        why = frozenset([k])
        if isinstance(r, Axiom):
            var = ("h", r.symbol, r.index)
            if r.lo is not None:
                store.raise_lo(var, r.lo, why)
            if r.hi is not None:
                store.lower_hi(var, r.hi, why)
        elif isinstance(r, ChiFact):
            var = ("chi", r.symbol)
            store.raise_lo(var, r.value, why)
            store.lower_hi(var, r.value, why)
        elif isinstance(r, SES):
            terms = r.terms()
            ranks = [("r", r.name, j) for j in range(1, len(terms))]
            for rv in ranks:
                store.declare(rv, 0, None)
            for j, (deg, sym) in enumerate(terms):
                coeffs = {("h", sym, deg): 1}
                if j > 0:
                    coeffs[ranks[j - 1]] = coeffs.get(ranks[j - 1], 0) - 1
                if j < len(ranks):
                    coeffs[ranks[j]] = coeffs.get(ranks[j], 0) - 1
                cons.append(_Constraint(coeffs, 0, k))
            chi: Dict[Var, int] = {}
            for sym, sign in ((r.a, 1), (r.b, -1), (r.c, 1)):
                chi[("chi", sym)] = chi.get(("chi", sym), 0) + sign
            cons.append(_Constraint({v: c for v, c in chi.items() if c}, 0, k))
        elif isinstance(r, SerreDual):
            for i in range(3):
                if (r.f, i) == (r.g, 2 - i):
                    continue
                cons.append(_Constraint({("h", r.f, i): 1, ("h", r.g, 2 - i): -1}, 0, k))
            if r.f != r.g:
                cons.append(_Constraint({("chi", r.f): 1, ("chi", r.g): -1}, 0, k))
        elif isinstance(r, DirectSum):
            for q in [("h", 0), ("h", 1), ("h", 2), ("chi",)]:
                coeffs: Dict[Var, int] = {}
                key = lambda s: (q[0], s, q[1]) if len(q) == 2 else (q[0], s)
                coeffs[key(r.total)] = coeffs.get(key(r.total), 0) + 1
                for p in r.parts:
                    coeffs[key(p)] = coeffs.get(key(p), 0) - 1
                coeffs = {v: c for v, c in coeffs.items() if c}
                cons.append(_Constraint(coeffs, 0, k))
    # map ranks need the sequence variables declared first
    for k in sorted(active):
        r = rules[k]
        if isinstance(r, MapRank):
            seq = next(x for x in rules if isinstance(x, SES) and x.name == r.ses)
            pos = seq.terms().index((r.source_degree, r.source))
            var = ("r", r.ses, pos + 1)
            why = frozenset([k])
            if pos + 1 >= len(seq.terms()):
                # the last map goes to zero
                if r.rank != 0:
                    store.conflict = store.conflict or (var, why)
                continue
            store.declare(var, 0, None)
            store.raise_lo(var, r.rank, why)
            store.lower_hi(var, r.rank, why)
    return store, [c for c in cons if c.coeffs]


def _solve(symbols, rules, active) -> Tuple[_Store, str]:
    store, cons = _build(symbols, rules, active)
    if store.conflict:
        return store, "conflicting bounds"
    for _ in range(MAX_PASSES):
        changed = False
        for con in cons:
            changed |= _narrow(store, con)
            if store.conflict:
                return store, "empty interval"
        if not changed:
            return store, ""
    # bounds keep moving: no integer solution can satisfy all of them
    store.conflict = (None, frozenset(active))
    return store, "bounds diverge"


def _minimal_conflict(symbols, rules, suspects: FrozenSet[int]) -> List[int]:
    """Deletion filter: drop every rule whose removal keeps the conflict."""
    keep = sorted(suspects)
    for k in list(keep):
        trial = [j for j in keep if j != k]
        store, _ = _solve(symbols, rules, trial)
        if store.conflict:
            keep = trial
    return keep


def propagate(symbols: Sequence[SheafSym], rules: Sequence[Rule]) -> LedgerReport:
    _validate(symbols, rules)
    active = list(range(len(rules)))
    store, reason = _solve(symbols, rules, active)
    if store.conflict:
        _, why = store.conflict
        core = _minimal_conflict(symbols, rules, why or frozenset(active))
        return LedgerReport(_values(store, symbols), [], [], True,
                            [rule_text(rules[k]) for k in core], reason)
    values = _values(store, symbols)
    derived, open_ = [], []
    for s in symbols:
        for q in ("h0", "h1", "h2", "chi"):
            var = ("h", s.name, int(q[1])) if q != "chi" else ("chi", s.name)
            iv = values[s.name][q]
            if iv.is_point():
                why = sorted(store.lo_why[var] | store.hi_why[var])
                derived.append(Derivation(s.name, q, iv.lo, tuple(rule_text(rules[k]) for k in why)))
            else:
                open_.append((s.name, q, iv))
    return LedgerReport(values, derived, open_)


def _values(store: _Store, symbols) -> Dict[str, Dict[str, Interval]]:
    out = {}
    for s in symbols:
        row = {}
        for i in range(3):
            var = ("h", s.name, i)
            row[f"h{i}"] = Interval(store.lo[var], store.hi[var])
        var = ("chi", s.name)
        row["chi"] = Interval(store.lo[var], store.hi[var])
        out[s.name] = row
    return out


@dataclass
class ConsistencyResult:
    passed: bool
    report: LedgerReport
    failed_claim: Optional[Claim] = None
    message: str = ""
    trace: List[str] = field(default_factory=list)


def check_consistency(symbols: Sequence[SheafSym], rules: Sequence[Rule],
                      claims: Sequence[Claim]) -> ConsistencyResult:
    """Propagate, then require every claim to be forced exactly."""
    report = propagate(symbols, rules)
    if report.contradiction:
        return ConsistencyResult(False, report, None, "the rules are contradictory", report.conflict)
    for claim in claims:
        if claim.symbol not in report.values:
            raise LedgerError(f"claim about undeclared symbol {claim.symbol!r}")
        iv = report.values[claim.symbol][f"h{claim.index}"]
        if iv.is_point() and iv.lo == claim.value:
            continue
        if iv.contains(claim.value):
            return ConsistencyResult(False, report, claim,
                                     f"claim {claim.label()} is not forced; interval is {iv}", [])
        # the claim contradicts the rules: explain with a minimal conflict set
        probe = Axiom(claim.symbol, claim.index, claim.value, claim.value, "claim")
        extended = list(rules) + [probe]
        store, _ = _solve(symbols, extended, range(len(extended)))
        why = store.conflict[1] if store.conflict else frozenset(range(len(extended)))
        core = _minimal_conflict(symbols, extended, why)
        return ConsistencyResult(False, report, claim,
                                 f"claim {claim.label()} contradicts the derived value {iv}",
                                 [rule_text(extended[k]) for k in core])
    return ConsistencyResult(True, report)


# -- script format ------------------------------------------------------------


@dataclass
class LedgerScript:
    symbols: List[SheafSym]
    rules: List[Rule]
    claims: List[Claim]

    def propagate(self) -> LedgerReport:
        return propagate(self.symbols, self.rules)

    def check(self) -> ConsistencyResult:
        return check_consistency(self.symbols, self.rules, self.claims)


_PROV = re.compile(r'"([^"]*)"\s*$')
_TERM = re.compile(r"^H([012])\((.+)\)$")


def _parse_value(text: str, lineno: int) -> Tuple[Optional[int], Optional[int]]:
    text = text.strip()
    if text == "?":
        return None, None
    if text.startswith("[") and text.endswith("]"):
        lo, _, hi = text[1:-1].partition(",")
        lo, hi = lo.strip(), hi.strip()
        try:
            return (None if lo in ("", "-inf") else int(lo)), (None if hi in ("", "inf") else int(hi))
        except ValueError:
            raise LedgerError(f"line {lineno}: bad interval {text!r}") from None
    try:
        v = int(text)
    except ValueError:
        raise LedgerError(f"line {lineno}: bad value {text!r}") from None
    return v, v


def _parse_h(tokens: Sequence[str], lineno: int) -> List[Tuple[int, Optional[int], Optional[int]]]:
    out = []
    text = " ".join(tokens)
    m = re.fullmatch(r"h\s*=\s*\((.*)\)", text)
    if m:
        parts = re.findall(r"\[[^\]]*\]|[^,\s]+", m.group(1))
        if len(parts) != 3:
            raise LedgerError(f"line {lineno}: h=(...) needs three entries")
        for i, p in enumerate(parts):
            lo, hi = _parse_value(p, lineno)
            if lo is not None or hi is not None:
                out.append((i, lo, hi))
        return out
    for tok in re.findall(r"h[012]\s*=\s*(?:\[[^\]]*\]|\S+)", text):
        key, _, val = tok.partition("=")
        lo, hi = _parse_value(val, lineno)
        out.append((int(key.strip()[1]), lo, hi))
    if not out:
        raise LedgerError(f"line {lineno}: expected h=(a,b,c) or hK=value")
    return out


def _strip_comment(raw: str) -> str:
    quoted = False
    for i, ch in enumerate(raw):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return raw[:i].strip()
    return raw.strip()


def parse_script(text: str) -> LedgerScript:
    symbols: List[SheafSym] = []
    rules: List[Rule] = []
    claims: List[Claim] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        prov = ""
        m = _PROV.search(line)
        if m:
            prov = m.group(1)
            line = line[: m.start()].strip()
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "sheaf":
                for name in rest.split():
                    symbols.append(SheafSym(name))
            elif head == "axiom":
                name, _, spec = rest.partition(" ")
                for i, lo, hi in _parse_h(spec.split(), lineno):
                    rules.append(Axiom(name, i, lo, hi, prov))
            elif head == "chi":
                name, value = rest.split()
                rules.append(ChiFact(name, int(value), prov))
            elif head == "ses":
                label, _, seq = rest.partition(":")
                parts = [p.strip() for p in seq.split("->")]
                parts = [p for p in parts if p and p != "0"]
                if len(parts) != 3 or not label.strip():
                    raise LedgerError(f"line {lineno}: expected 'ses NAME: A -> B -> C'")
                rules.append(SES(label.strip(), *parts, prov))
            elif head == "serre":
                f, g = rest.split()
                rules.append(SerreDual(f, g, prov))
            elif head == "sum":
                total, _, parts = rest.partition("=")
                names = tuple(p.strip() for p in parts.split("+") if p.strip())
                if not total.strip() or not names:
                    raise LedgerError(f"line {lineno}: expected 'sum F = A + B'")
                rules.append(DirectSum(total.strip(), names, prov))
            elif head == "maprank":
                seq, term, rank = rest.split()
                tm = _TERM.match(term)
                if not tm:
                    raise LedgerError(f"line {lineno}: map source must look like H1(A)")
                rules.append(MapRank(seq, int(tm.group(1)), tm.group(2), int(rank), prov))
            elif head == "claim":
                name, _, spec = rest.partition(" ")
                for i, lo, hi in _parse_h(spec.split(), lineno):
                    if lo != hi or lo is None:
                        raise LedgerError(f"line {lineno}: claims must be point values")
                    claims.append(Claim(name, i, lo))
            else:
                raise LedgerError(f"line {lineno}: unknown declaration {head!r}")
        except ValueError as exc:
            if isinstance(exc, LedgerError):
                raise
            raise LedgerError(f"line {lineno}: {exc}") from None
    return LedgerScript(symbols, rules, claims)
