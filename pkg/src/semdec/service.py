"""Annotation HTTP service: lexicon CRUD with live constraint validation,
extraction suggestions, and decode preview.

Edits are accepted even when they violate constraints; the violation list
travels back with the response so the annotator steers the repair.  The
lexicon file is the source of truth shared with the CLI: every accepted
mutation is persisted atomically (write-temp-then-rename), and readers
always see a consistent snapshot at some revision.
"""

import os
import tempfile
import threading
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from semdec import corpus as corpus_io
from semdec import extraction
from semdec import model as model_mod
from semdec.lexicon import (
    FSeGroup, FsyGroup, Lexicon, LexiconEntry, ValidationContext,
    load_lexicon, serialize_lexicon,
)


class EntryBody(BaseModel):
    field: str
    semantic_class: str
    micro_trait: str
    gender: str = "unspecified"
    number: str = "unspecified"
    nature: str = "name"
    synonym_set: Optional[str] = None


class DecodePreviewBody(BaseModel):
    tokens: list


def entry_to_dict(e: LexiconEntry) -> dict:
    return {
        "surface": e.surface,
        "field": e.fse.field,
        "semantic_class": e.fse.semantic_class,
        "micro_trait": e.fse.micro_trait,
        "gender": e.fsy.gender,
        "number": e.fsy.number,
        "nature": e.fsy.nature,
        "synonym_set": e.synonym_set,
    }


def violation_to_dict(v) -> dict:
    return {"constraint_id": v.constraint_id, "entries": list(v.entries),
            "message": v.message}


@dataclass
class _Snapshot:
    revision: int
    lexicon: Lexicon


class AnnotationSession:
    """One lexicon under edit: snapshot reads, single-writer mutations."""

    def __init__(self, lexicon_path, corpus_path=None, model_path=None,
                 validation_context: Optional[ValidationContext] = None):
        self.lexicon_path = lexicon_path
        self.corpus = corpus_io.load_typed_corpus(corpus_path) if corpus_path else None
        self.model = model_mod.load_model(model_path) if model_path else None
        self.context = validation_context or ValidationContext()
        lexicon = load_lexicon(lexicon_path) if os.path.exists(lexicon_path) else Lexicon()
        self._snapshot = _Snapshot(0, lexicon)
        self._write_lock = threading.Lock()

    def snapshot(self) -> _Snapshot:
        return self._snapshot  # atomic reference read

    def _persist(self, lexicon: Lexicon) -> None:
        directory = os.path.dirname(os.path.abspath(self.lexicon_path)) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(serialize_lexicon(lexicon))
            os.replace(tmp, self.lexicon_path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def upsert(self, entry: LexiconEntry) -> _Snapshot:
        with self._write_lock:
            new_lex = self._snapshot.lexicon.copy()
            new_lex.add_entry(entry)
            self._persist(new_lex)
            self._snapshot = _Snapshot(self._snapshot.revision + 1, new_lex)
            return self._snapshot

    def delete(self, surface: str) -> Optional[_Snapshot]:
        with self._write_lock:
            new_lex = self._snapshot.lexicon.copy()
            if not new_lex.remove(surface):
                return None
            self._persist(new_lex)
            self._snapshot = _Snapshot(self._snapshot.revision + 1, new_lex)
            return self._snapshot


def create_app(session: AnnotationSession, ui_dir=None) -> FastAPI:
    app = FastAPI(title="semdec annotation service")

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        fields = ", ".join(str(e["loc"][-1]) for e in exc.errors())
        return JSONResponse(status_code=400,
                            content={"detail": f"malformed body: {fields}"})

    @app.get("/health")
    def health():
        return {"status": "ok", "revision": session.snapshot().revision}

    @app.get("/lexicon")
    def get_lexicon():
        snap = session.snapshot()
        return {"revision": snap.revision,
                "entries": [entry_to_dict(e) for e in snap.lexicon.entries()]}

    @app.put("/lexicon/{surface}")
    def put_entry(surface: str, body: EntryBody):
        entry = LexiconEntry(
            surface=surface,
            fse=FSeGroup(body.field, body.semantic_class, body.micro_trait),
            fsy=FsyGroup(body.gender, body.number, body.nature),
            synonym_set=body.synonym_set,
        )
        try:
            snap = session.upsert(entry)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        violations = snap.lexicon.validate(session.context)
        return {"revision": snap.revision,
                "violations": [violation_to_dict(v) for v in violations]}

    @app.delete("/lexicon/{surface}")
    def delete_entry(surface: str):
        snap = session.delete(surface)
        if snap is None:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown surface {surface!r}"})
        return {"revision": snap.revision}

    @app.post("/validate")
    def validate():
        snap = session.snapshot()
        violations = snap.lexicon.validate(session.context)
        return {"revision": snap.revision,
                "violations": [violation_to_dict(v) for v in violations]}

    @app.get("/suggest/classes")
    def suggest_classes(k: int = 4, seed: int = 0):
        if session.corpus is None:
            return JSONResponse(status_code=409,
                                content={"detail": "no corpus loaded for suggestions"})
        try:
            catalog = extraction.kmeans_classes(session.corpus, k, seed=seed)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        return {"k": catalog.k,
                "classes": [{"class_id": cid, "members": list(members)}
                            for cid, members in catalog.classes]}

    @app.get("/suggest/refwords")
    def suggest_refwords(threshold: float = 0.0, max_ngram: int = 3,
                         max_gap: int = 3):
        if session.corpus is None:
            return JSONResponse(status_code=409,
                                content={"detail": "no corpus loaded for suggestions"})
        per_type = extraction.extract_reference_words(
            session.corpus, threshold, max_ngram, max_gap)
        return {t: [{"tokens": list(r.tokens), "weight": r.weight}
                    for r in refs] for t, refs in per_type.items()}

    @app.post("/decode-preview")
    def decode_preview(body: DecodePreviewBody):
        if session.model is None:
            return JSONResponse(
                status_code=409,
                content={"detail": "no trained model loaded; start the service "
                                   "with --model to enable decode preview"})
        snap = session.snapshot()
        decoded = model_mod.decode(session.model, snap.lexicon, body.tokens)
        return {
            "utterance_type": {"type_id": decoded.utterance_type[0],
                               "probability": decoded.utterance_type[1]},
            "labels": [{"token": w.token, "semantic_class": w.semantic_class,
                        "micro_trait": w.micro_trait,
                        "probability": w.probability} for w in decoded.labels],
            "skipped": list(decoded.skipped),
        }

    return app
