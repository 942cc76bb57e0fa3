"""Sense-representation lexicon: word entries and integrity constraints.

Each significant word is described by a semantic feature group (FSe:
application field, semantic class, micro-semantic trait) and a syntactic
feature group (Fsy: gender, number, nature).  Words declared synonymous
share a synonym_set identifier and are allowed to share one FSe group;
everything else that would make two words semantically indistinguishable
is reported by the constraint engine.
"""

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional

GENDERS = frozenset({"masculine", "feminine", "unspecified"})
NUMBERS = frozenset({"singular", "dual", "plural", "unspecified"})

ALL_CONSTRAINTS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8")


@dataclass(frozen=True)
class FSeGroup:
    """Semantic feature group: (field, semantic_class, micro_trait)."""
    field: str
    semantic_class: str
    micro_trait: str


@dataclass(frozen=True)
class FsyGroup:
    """Syntactic feature group: (gender, number, nature)."""
    gender: str = "unspecified"
    number: str = "unspecified"
    nature: str = "name"


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    fse: FSeGroup
    fsy: FsyGroup
    synonym_set: Optional[str] = None


@dataclass(frozen=True)
class ConstraintViolation:
    constraint_id: str
    entries: tuple
    message: str


def check_entry(entry: LexiconEntry) -> None:
    """Reject malformed entries, naming the offending field."""
    if not entry.surface:
        raise ValueError("malformed entry: empty field 'surface'")
    for name in ("field", "semantic_class", "micro_trait"):
        if not getattr(entry.fse, name):
            raise ValueError(f"malformed entry {entry.surface!r}: empty field '{name}'")
    if not entry.fsy.nature:
        raise ValueError(f"malformed entry {entry.surface!r}: empty field 'nature'")
    if entry.fsy.gender not in GENDERS:
        raise ValueError(f"malformed entry {entry.surface!r}: bad field 'gender' "
                         f"({entry.fsy.gender!r})")
    if entry.fsy.number not in NUMBERS:
        raise ValueError(f"malformed entry {entry.surface!r}: bad field 'number' "
                         f"({entry.fsy.number!r})")


@dataclass
class ValidationContext:
    """Optional side inputs for the constraints that need them.

    Constraints whose context is absent are skipped, so a bare
    ``validate(lexicon)`` checks exactly C1, C3 and C5.  ``enabled``
    toggles individual constraints; restricting it to {"C1"} recovers
    the single stated mandatory constraint.
    """
    class_catalog: Optional[set] = None       # C2
    app_field: Optional[str] = None           # C4
    blank_words: Optional[set] = None         # C6
    nature_tags: Optional[set] = None         # C7
    reference_words: Optional[list] = None    # C8: iterable of token tuples
    type_markers: Optional[set] = None        # C8 exemptions (token tuples)
    enabled: frozenset = field(default_factory=lambda: frozenset(ALL_CONSTRAINTS))


class Lexicon:
    """Mapping of surface form to its single lexicon entry.

    Behaves as a value: reads are freely concurrent, mutations are the
    caller's responsibility to serialize (the annotation service does).
    """

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        self._entries: dict = {}
        for e in entries:
            self.add_entry(e)

    def __len__(self):
        return len(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def add_entry(self, entry: LexiconEntry) -> "Lexicon":
        """Store entry, replacing any prior entry with the same surface.

        No constraint checking here; validation is explicit.
        """
        check_entry(entry)
        self._entries[entry.surface] = entry
        return self

    def remove(self, surface: str) -> bool:
        return self._entries.pop(surface, None) is not None

    def lookup(self, surface: str) -> Optional[LexiconEntry]:
        return self._entries.get(surface)

    def entries(self) -> list:
        """Entries sorted by surface (deterministic regardless of insertion)."""
        return sorted(self._entries.values(), key=lambda e: e.surface)

    def copy(self) -> "Lexicon":
        out = Lexicon()
        out._entries = dict(self._entries)
        return out

    def validate(self, context: Optional[ValidationContext] = None) -> list:
        """Report all violations of the configured constraint set.

        Never raises; an empty list means the lexicon is a valid SRS.
        The result is independent of entry insertion order.
        """
        ctx = context or ValidationContext()
        on = ctx.enabled
        out = []
        entries = self.entries()

        if "C1" in on:
            by_fse: dict = {}
            for e in entries:
                by_fse.setdefault(e.fse, []).append(e)
            for fse, group in sorted(by_fse.items(), key=lambda kv: kv[1][0].surface):
                if len(group) < 2:
                    continue
                syns = {e.synonym_set for e in group}
                if len(syns) > 1 or None in syns:
                    out.append(ConstraintViolation(
                        "C1", tuple(e.surface for e in group),
                        "distinct words share FSe group "
                        f"({fse.field}, {fse.semantic_class}, {fse.micro_trait}) "
                        "without a common synonym set"))

        if "C2" in on and ctx.class_catalog is not None:
            for e in entries:
                if e.fse.semantic_class not in ctx.class_catalog:
                    out.append(ConstraintViolation(
                        "C2", (e.surface,),
                        f"semantic class {e.fse.semantic_class!r} not in the class catalog"))

        if "C3" in on:
            # Trait collisions inside one class that C1 does not already
            # cover (i.e. the full FSe groups differ).
            by_ct: dict = {}
            for e in entries:
                by_ct.setdefault((e.fse.semantic_class, e.fse.micro_trait), []).append(e)
            for (cls, trait), group in sorted(by_ct.items()):
                if len(group) < 2:
                    continue
                if len({e.fse for e in group}) == 1:
                    continue
                syns = {e.synonym_set for e in group}
                if len(syns) > 1 or None in syns:
                    out.append(ConstraintViolation(
                        "C3", tuple(e.surface for e in group),
                        f"micro trait {trait!r} reused within class {cls!r} "
                        "by non-synonymous words"))

        if "C4" in on and ctx.app_field is not None:
            for e in entries:
                if e.fse.field != ctx.app_field:
                    out.append(ConstraintViolation(
                        "C4", (e.surface,),
                        f"field {e.fse.field!r} differs from the application "
                        f"field {ctx.app_field!r}"))

        if "C5" in on:
            by_syn: dict = {}
            for e in entries:
                if e.synonym_set is not None:
                    by_syn.setdefault(e.synonym_set, []).append(e)
            for syn, group in sorted(by_syn.items()):
                if len({e.fse for e in group}) > 1:
                    out.append(ConstraintViolation(
                        "C5", tuple(e.surface for e in group),
                        f"synonym set {syn!r} members carry different FSe groups"))

        if "C6" in on and ctx.blank_words is not None:
            for e in entries:
                if e.surface in ctx.blank_words:
                    out.append(ConstraintViolation(
                        "C6", (e.surface,),
                        "surface appears in the blank-word list"))

        if "C7" in on and ctx.nature_tags is not None:
            for e in entries:
                if e.fsy.nature not in ctx.nature_tags:
                    out.append(ConstraintViolation(
                        "C7", (e.surface,),
                        f"nature tag {e.fsy.nature!r} outside the closed tag set"))

        if "C8" in on and ctx.reference_words is not None:
            markers = ctx.type_markers or set()
            for tokens in ctx.reference_words:
                tokens = tuple(tokens)
                if tokens in markers:
                    continue
                missing = tuple(t for t in tokens if t not in self._entries)
                if missing:
                    out.append(ConstraintViolation(
                        "C8", missing,
                        f"reference word {' '.join(tokens)!r} uses surfaces absent "
                        "from the lexicon and not declared type-markers"))

        return out


def parse_lexicon(lines: Iterable[str]) -> Lexicon:
    """Parse the tab-separated lexicon format.

    surface, field, class, micro_trait, gender, number, nature and an
    optional trailing synonym_set, one entry per line; '#' starts a
    comment.  Surfaces are NFC-normalized, nothing else is touched.
    """
    lex = Lexicon()
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (7, 8):
            raise ValueError(f"lexicon line {lineno}: expected 7 or 8 fields, "
                             f"got {len(parts)}")
        surface = unicodedata.normalize("NFC", parts[0])
        entry = LexiconEntry(
            surface=surface,
            fse=FSeGroup(parts[1], parts[2], parts[3]),
            fsy=FsyGroup(parts[4], parts[5], parts[6]),
            synonym_set=parts[7] if len(parts) == 8 and parts[7] else None,
        )
        lex.add_entry(entry)
    return lex


def serialize_lexicon(lex: Lexicon) -> str:
    lines = []
    for e in lex.entries():
        parts = [e.surface, e.fse.field, e.fse.semantic_class, e.fse.micro_trait,
                 e.fsy.gender, e.fsy.number, e.fsy.nature]
        if e.synonym_set is not None:
            parts.append(e.synonym_set)
        lines.append("\t".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        return parse_lexicon(f)


def save_lexicon(lex: Lexicon, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_lexicon(lex))
