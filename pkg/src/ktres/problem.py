"""Line-oriented problem files: ``[section]`` headers and ``key = value`` lines.

Unknown sections or keys are rejected with line and column diagnostics.
Keys ending in ``*`` in the schema may repeat; ``R[k]`` and ``delta[k]``
are indexed families.
"""
import re
from dataclasses import dataclass, field

from .errors import ParseError

KINDS = ("koszul", "tate", "tate2", "sullivan", "gauge", "compat", "jetdemo")

_COMMON = {
    "problem": {"kind", "title"},
    "bounds": {"weight", "degree", "jet_order", "check_order"},
}
_RING = {"vars", "modulus"}
SCHEMA = {
    "koszul": {"ring": _RING, "data": {"E"}},
    "tate": {"ring": _RING, "data": {"I"}},
    "tate2": {"ring": _RING, "data": {"P", "J", "s"}},
    "sullivan": {"ring": _RING, "data": {"E", "gen*", "target_modulus", "map*"}},
    "gauge": {"data": {"n", "r", "lagrangian", "R[]"}},
    "compat": {"data": {"n", "r", "psi", "delta[]"}},
    "jetdemo": {"data": set()},
}

_SECTION = re.compile(r"\[([A-Za-z_]+)\]")
_KEY = re.compile(r"([A-Za-z_][A-Za-z0-9_]*(?:\[\d+\])?)\s*=\s*(.*)")
_INDEXED = re.compile(r"([A-Za-z_]+)\[(\d+)\]")


@dataclass
class Entry:
    key: str
    value: str
    line: int = 0
    column: int = 1


@dataclass
class ProblemFile:
    kind: str
    sections: dict = field(default_factory=dict)  # name -> list[Entry]

    def get(self, section, key, default=None):
        for e in self.sections.get(section, []):
            if e.key == key:
                return e
        return default

    def value(self, section, key, default=None):
        e = self.get(section, key)
        return default if e is None else e.value

    def all(self, section, key):
        return [e for e in self.sections.get(section, []) if e.key == key]

    def indexed(self, section, family):
        """Entries ``family[k]`` sorted by k; returns [(k, Entry)]."""
        out = []
        for e in self.sections.get(section, []):
            m = _INDEXED.fullmatch(e.key)
            if m and m.group(1) == family:
                out.append((int(m.group(2)), e))
        return sorted(out, key=lambda ke: ke[0])

    def bound(self, key, default):
        e = self.get("bounds", key)
        if e is None:
            return default
        try:
            return int(e.value)
        except ValueError:
            raise ParseError(f"bound {key} must be an integer", e.line, e.column) from None

    def to_text(self):
        lines = []
        order = ["problem"] + [s for s in self.sections if s != "problem"]
        for name in order:
            if name not in self.sections:
                continue
            if lines:
                lines.append("")
            lines.append(f"[{name}]")
            for e in self.sections[name]:
                lines.append(f"{e.key} = {e.value}")
        return "\n".join(lines) + "\n"

    def content(self):
        """Comparable content, ignoring source positions."""
        return self.kind, {s: [(e.key, e.value) for e in es] for s, es in self.sections.items()}

    def __eq__(self, other):
        return isinstance(other, ProblemFile) and self.content() == other.content()


def _allowed(kind, section, key):
    keys = _COMMON.get(section) or SCHEMA[kind].get(section)
    if keys is None:
        return None
    if key in keys or f"{key}*" in keys:
        return True
    m = _INDEXED.fullmatch(key)
    return bool(m and f"{m.group(1)}[]" in keys)


def _repeatable(kind, section, key):
    keys = _COMMON.get(section) or SCHEMA[kind].get(section, set())
    return f"{key}*" in keys or bool(_INDEXED.fullmatch(key))


def parse_problem(text):
    raw = []
    section = None
    for ln, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(line) - len(line.lstrip())
        m = _SECTION.fullmatch(stripped)
        if m:
            section = m.group(1)
            raw.append((section, None, ln, indent + 1))
            continue
        m = _KEY.fullmatch(stripped)
        if not m:
            raise ParseError(f"expected '[section]' or 'key = value', found {stripped!r}", ln, indent + 1)
        if section is None:
            raise ParseError("key outside of any section", ln, indent + 1)
        value_col = indent + 1 + stripped.index(m.group(2)) if m.group(2) else indent + len(stripped) + 1
        raw.append((section, Entry(m.group(1), m.group(2).strip(), ln, value_col), ln, indent + 1))
    kind_entry = next((e for s, e, _, _ in raw if s == "problem" and e and e.key == "kind"), None)
    if kind_entry is None:
        raise ParseError("missing 'kind' in [problem]", 1, 1)
    kind = kind_entry.value.lower()
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind_entry.value!r}; expected one of {', '.join(KINDS)}", kind_entry.line, kind_entry.column)
    pf = ProblemFile(kind)
    for sec, e, ln, col in raw:
        if e is None:
            if _allowed(kind, sec, "") is None:
                raise ParseError(f"unknown section [{sec}] for kind {kind}", ln, col)
            if sec in pf.sections:
                raise ParseError(f"duplicate section [{sec}]", ln, col)
            pf.sections[sec] = []
            continue
        if not _allowed(kind, sec, e.key):
            raise ParseError(f"unknown key {e.key!r} in [{sec}]", ln, col)
        if not _repeatable(kind, sec, e.key) and any(x.key == e.key for x in pf.sections[sec]):
            raise ParseError(f"duplicate key {e.key!r}", ln, col)
        pf.sections[sec].append(e)
    return pf


def load_problem(path):
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())
