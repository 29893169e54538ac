"""Line-oriented text formats for monoids, congruences, configurations,
automata and reports.  All formats are ASCII, LF-terminated, and start with
a ``<kind> v1`` magic line."""

from __future__ import annotations

import string
from pathlib import Path

from .analysis import SweepReport
from .ca import CellularAutomaton, all_patterns
from .congruence import Congruence
from .monoid import (Bicyclic, BicyclicElement, FiniteMonoid, FreeMonoid, MonoidError,
                     NatAdd, cyclic, flip_flop, map_monoid, trivial, u1)
from .shift import Configuration, WindowConfiguration


class FormatError(ValueError):
    pass


LETTERS = string.ascii_lowercase

BUILTIN_HELP = "bicyclic, nat-add, free:N, cyclic:N, map:N, flip-flop, u1, trivial"


def builtin_monoid(name: str):
    """Expand a built-in monoid name, or return ``None`` if it is not one."""
    if name == "bicyclic":
        return Bicyclic()
    if name == "nat-add":
        return NatAdd()
    if name == "flip-flop":
        return flip_flop()
    if name == "u1":
        return u1()
    if name == "trivial":
        return trivial()
    head, _, arg = name.partition(":")
    if head in ("free", "cyclic", "map") and arg:
        try:
            n = int(arg)
        except ValueError:
            raise FormatError(f"bad size in {name!r}") from None
        if n < 1:
            raise FormatError(f"size must be positive in {name!r}")
        return {"free": FreeMonoid, "cyclic": cyclic, "map": map_monoid}[head](n)
    return None


def monoid_label(M) -> str:
    if isinstance(M, (Bicyclic, NatAdd, FreeMonoid)):
        return M.name
    try:
        if M.name and builtin_monoid(M.name) == M:
            return M.name
    except FormatError:
        pass
    return f"table {M.size}"


def _lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]


def _expect(line: str, key: str) -> str:
    head, _, rest = line.partition(" ")
    if head != key:
        raise FormatError(f"expected {key!r}, got {line!r}")
    return rest.strip()


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"not an integer: {tok!r}") from None


def _ints(text: str) -> list[int]:
    return [_int(t) for t in text.split()]


# ---------------------------------------------------------------- monoids

def dump_monoid(M: FiniteMonoid) -> str:
    out = ["monoid v1", f"size {M.size}", f"identity {M.identity}", "table"]
    out += [" ".join(map(str, row)) for row in M.table]
    return "\n".join(out) + "\n"


def load_monoid(text: str) -> FiniteMonoid:
    lines = _lines(text)
    if not lines or lines[0] != "monoid v1":
        raise FormatError("missing 'monoid v1' header")
    if len(lines) < 4:
        raise FormatError("truncated monoid file")
    n = _int(_expect(lines[1], "size"))
    e = _int(_expect(lines[2], "identity"))
    if lines[3] != "table":
        raise FormatError("expected 'table'")
    rows = [_ints(ln) for ln in lines[4:]]
    if len(rows) != n:
        raise FormatError(f"expected {n} table rows, got {len(rows)}")
    try:
        return FiniteMonoid(n, e, rows)
    except MonoidError as exc:
        raise FormatError(str(exc)) from None


def resolve_monoid(spec: str):
    """A built-in name or the path of a monoid file."""
    M = builtin_monoid(spec)
    if M is not None:
        return M
    path = Path(spec)
    if not path.exists():
        raise FormatError(f"{spec!r} is neither a built-in monoid ({BUILTIN_HELP}) nor a file")
    return load_monoid(path.read_text())


# ---------------------------------------------------------------- elements

def format_element(M, m) -> str:
    if isinstance(M, Bicyclic):
        return f"{m[0]},{m[1]}"
    if isinstance(M, FreeMonoid):
        return "".join(LETTERS[g] for g in m) if m else "1"
    return str(m)


def parse_element(M, tok: str):
    try:
        if isinstance(M, Bicyclic):
            a, b = tok.split(",")
            return M.check(BicyclicElement(int(a), int(b)))
        if isinstance(M, FreeMonoid):
            if tok == "1":
                return ()
            return M.check(tuple(LETTERS.index(c) for c in tok))
        return M.check(int(tok))
    except (ValueError, MonoidError):
        raise FormatError(f"bad element {tok!r} for {M!r}") from None


# ---------------------------------------------------------------- congruences

def dump_congruence(g: Congruence) -> str:
    return "\n".join([
        "congruence v1",
        f"monoid-size {g.monoid.size}",
        f"classes {g.num_classes}",
        "class_of " + " ".join(map(str, g.class_of)),
    ]) + "\n"


def load_congruence(text: str, M: FiniteMonoid) -> Congruence:
    lines = _lines(text)
    if not lines or lines[0] != "congruence v1":
        raise FormatError("missing 'congruence v1' header")
    if len(lines) != 4:
        raise FormatError("congruence file needs exactly four lines")
    n = _int(_expect(lines[1], "monoid-size"))
    if n != M.size:
        raise FormatError(f"congruence is for size {n}, monoid has size {M.size}")
    K = _int(_expect(lines[2], "classes"))
    labels = _ints(_expect(lines[3], "class_of"))
    try:
        g = Congruence(M, labels)
    except MonoidError as exc:
        raise FormatError(str(exc)) from None
    if g.num_classes != K:
        raise FormatError(f"declared {K} classes, found {g.num_classes}")
    if tuple(labels) != g.class_of:
        raise FormatError("class_of is not in canonical form")
    return g


# ---------------------------------------------------------------- configurations

def dump_configuration(x) -> str:
    if isinstance(x, WindowConfiguration):
        M = x.monoid
        return "\n".join([
            "config v1",
            f"monoid {monoid_label(M)}",
            f"alphabet {x.alphabet_size}",
            "window " + " ".join(format_element(M, m) for m in x.window),
            " ".join(str(x[m]) for m in x.window),
        ]) + "\n"
    return "\n".join([
        "config v1",
        f"alphabet {x.alphabet_size}",
        " ".join(map(str, x.symbols)),
    ]) + "\n"


def load_configuration(text: str, M=None):
    lines = _lines(text)
    if not lines or lines[0] != "config v1":
        raise FormatError("missing 'config v1' header")
    rest = lines[1:]
    if rest and rest[0].startswith("monoid "):
        label = _expect(rest[0], "monoid")
        if M is None:
            M = builtin_monoid(label)
            if M is None:
                raise FormatError(f"unknown monoid {label!r}; pass it explicitly")
        rest = rest[1:]
    if M is None:
        raise FormatError("configuration needs a monoid")
    if not rest:
        raise FormatError("truncated configuration")
    k = _int(_expect(rest[0], "alphabet"))
    rest = rest[1:]
    try:
        if rest and rest[0].split(" ", 1)[0] == "window":
            toks = _expect(rest[0], "window").split() if rest[0] != "window" else []
            elems = [parse_element(M, t) for t in toks]
            syms = _ints(rest[1]) if len(rest) > 1 else []
            if len(rest) > 2 or len(syms) != len(elems):
                raise FormatError("window and symbol line lengths differ")
            if len(set(elems)) != len(elems):
                raise FormatError("duplicated window element")
            return WindowConfiguration(M, k, dict(zip(elems, syms)))
        if len(rest) != 1:
            raise FormatError("expected exactly one symbol line")
        if not isinstance(M, FiniteMonoid):
            raise FormatError("total configurations need a finite monoid")
        return Configuration(M, k, _ints(rest[0]))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------- automata

def dump_ca(tau: CellularAutomaton) -> str:
    M = tau.monoid
    memory = " ".join(["memory"] + [format_element(M, s) for s in tau.memory])
    out = ["ca v1", f"monoid {monoid_label(M)}", f"alphabet {tau.alphabet_size}", memory, "rule"]
    for p, v in zip(all_patterns(tau.alphabet_size, tau.radius), tau.rule):
        out.append(f"{' '.join(map(str, p))} -> {v}".lstrip())
    return "\n".join(out) + "\n"


def load_ca(text: str, M=None) -> CellularAutomaton:
    lines = _lines(text)
    if not lines or lines[0] != "ca v1":
        raise FormatError("missing 'ca v1' header")
    rest = lines[1:]
    if rest and rest[0].startswith("monoid"):
        label = _expect(rest[0], "monoid")
        declared = builtin_monoid(label)
        if M is None:
            if declared is None:
                raise FormatError(f"automaton is over {label!r}; pass the monoid explicitly")
            M = declared
        elif declared is not None and declared != M:
            raise FormatError(f"automaton declares monoid {label!r}")
        elif label.startswith("table") and _ints(label.split(" ", 1)[1]) != [M.size]:
            raise FormatError(f"automaton declares {label!r} but monoid has size {M.size}")
        rest = rest[1:]
    if M is None:
        raise FormatError("automaton needs a monoid")
    if len(rest) < 3:
        raise FormatError("truncated automaton")
    k = _int(_expect(rest[0], "alphabet"))
    mem_line = rest[1]
    if mem_line != "memory" and not mem_line.startswith("memory "):
        raise FormatError("expected 'memory'")
    memory = [parse_element(M, t) for t in mem_line[len("memory"):].split()]
    if rest[2] != "rule":
        raise FormatError("expected 'rule'")
    r = len(memory)
    if k < 1:
        raise FormatError("alphabet must be positive")
    table: dict[tuple, int] = {}
    for ln in rest[3:]:
        if "->" not in ln:
            raise FormatError(f"bad rule line {ln!r}")
        lhs, rhs = ln.split("->")
        pat = tuple(_ints(lhs))
        if len(pat) != r or any(not 0 <= v < k for v in pat):
            raise FormatError(f"bad pattern {lhs.strip()!r}")
        if pat in table:
            raise FormatError(f"duplicated pattern {lhs.strip()!r}")
        table[pat] = _int(rhs.strip())
    if len(table) != k ** r:
        raise FormatError(f"rule is incomplete: {len(table)} of {k ** r} patterns")
    rule = [table[p] for p in all_patterns(k, r)]
    try:
        return CellularAutomaton(M, k, memory, rule)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------- reports

def dump_report(kind: str, fields: list[tuple[str, object]],
                witnesses: list[tuple[str, str]] = ()) -> str:
    """``report v1``, ``kind``, ``key value`` lines, then ``witness`` blocks
    each closed by ``end``."""
    out = ["report v1", f"kind {kind}"]
    for key, value in fields:
        if isinstance(value, (list, tuple)):
            value = " ".join(map(str, value))
        elif value is None:
            value = "none"
        elif isinstance(value, bool):
            value = "true" if value else "false"
        out.append(f"{key} {value}".rstrip())
    for label, block in witnesses:
        out.append(f"witness {label}")
        out.extend(block.rstrip("\n").split("\n"))
        out.append("end")
    return "\n".join(out) + "\n"


def load_report(text: str) -> tuple[str, list[tuple[str, str]], list[tuple[str, str]]]:
    lines = text.split("\n")
    lines = [ln for ln in lines if ln.strip()]
    if not lines or lines[0] != "report v1":
        raise FormatError("missing 'report v1' header")
    kind = _expect(lines[1], "kind")
    fields: list[tuple[str, str]] = []
    witnesses: list[tuple[str, str]] = []
    i = 2
    while i < len(lines):
        ln = lines[i]
        if ln.startswith("witness "):
            label = ln[len("witness "):]
            j = i + 1
            while j < len(lines) and lines[j] != "end":
                j += 1
            if j == len(lines):
                raise FormatError("unterminated witness block")
            witnesses.append((label, "\n".join(lines[i + 1:j]) + "\n"))
            i = j + 1
            continue
        key, _, value = ln.partition(" ")
        fields.append((key, value))
        i += 1
    return kind, fields, witnesses


def dump_sweep_report(rep: SweepReport) -> str:
    fields = [
        ("monoid", rep.monoid),
        ("alphabet", rep.alphabet_size),
        ("memory", list(rep.memory)),
        ("total_rules", rep.total_rules),
        ("range", [rep.range_start, rep.range_stop]),
        ("sampled", rep.sampled),
        ("seed", rep.seed),
        ("checked", rep.checked),
        ("injective", rep.injective),
        ("surjective", rep.surjective),
        ("bijective", rep.bijective),
        ("violations", len(rep.violations)),
    ]
    fields += [("violation", v) for v in rep.violations]
    return dump_report("sweep", fields)


def load_sweep_report(text: str) -> SweepReport:
    kind, fields, _ = load_report(text)
    if kind != "sweep":
        raise FormatError(f"expected a sweep report, got {kind!r}")
    d = dict(fields)
    opt = lambda v: None if v == "none" else _int(v)
    try:
        start, stop = _ints(d["range"])
        rep = SweepReport(
            monoid=d["monoid"], alphabet_size=_int(d["alphabet"]),
            memory=tuple(_ints(d["memory"])),
            total_rules=_int(d["total_rules"]), range_start=start, range_stop=stop,
            injective=_int(d["injective"]), surjective=_int(d["surjective"]),
            bijective=_int(d["bijective"]),
            violations=[_int(v) for k, v in fields if k == "violation"],
            seed=opt(d["seed"]), sampled=opt(d["sampled"]))
    except KeyError as exc:
        raise FormatError(f"missing report field {exc}") from None
    if len(rep.violations) != _int(d["violations"]):
        raise FormatError("violation count does not match listed violations")
    return rep
