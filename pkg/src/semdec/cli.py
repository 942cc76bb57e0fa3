"""Command-line pipeline: preprocess, extract, cluster, train, decode,
evaluate, validate, gen-corpus, serve.

Every subcommand reads and writes the line formats documented in the
package modules, never mutates its inputs, and exits nonzero with a
single `error:` line on stderr when something is wrong.
"""

import argparse
import sys

import semdec.corpus as corpus_io
import semdec.evaluation as ev
from semdec import extraction, lexicon, model, preprocess


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semdec", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("preprocess", help="tokenize, merge and filter utterances")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", dest="outfile", required=True)
    sp.add_argument("--blank-words")
    sp.add_argument("--merge-rules")
    sp.add_argument("--no-normalize", action="store_true")

    sp = sub.add_parser("extract-refwords", help="extract reference words per type")
    sp.add_argument("--corpus", required=True, help="typed corpus file")
    sp.add_argument("--out", dest="outfile", required=True)
    sp.add_argument("--threshold", type=float, default=0.0)
    sp.add_argument("--max-ngram", type=int, default=3, choices=(1, 2, 3))
    sp.add_argument("--max-gap", type=int, default=3)

    sp = sub.add_parser("cluster", help="induce semantic classes by k-means")
    sp.add_argument("--corpus", required=True, help="typed corpus file")
    sp.add_argument("--out", dest="outfile", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-iters", type=int, default=100)
    sp.add_argument("--top-contexts", type=int, default=100)
    sp.add_argument("--vector-window", type=int, default=2)

    sp = sub.add_parser("train", help="estimate the model from a labeled corpus")
    sp.add_argument("--corpus", required=True, help="labeled corpus file")
    sp.add_argument("--refwords", help="reference-word file (extract-refwords output)")
    sp.add_argument("--out", dest="outfile", required=True)
    sp.add_argument("--context-mode", default=model.PERTINENT,
                    choices=model.CONTEXT_MODES)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--window", type=int, default=5)
    sp.add_argument("--max-gap", type=int, default=3)
    sp.add_argument("--field", default="app")
    sp.add_argument("--no-affinity-smoothing", action="store_true")

    sp = sub.add_parser("decode", help="label utterances with a trained model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--in", dest="infile", required=True,
                    help="one utterance per line (tokens, or raw text with --raw)")
    sp.add_argument("--out", dest="outfile", default="-")
    sp.add_argument("--lexicon")
    sp.add_argument("--raw", action="store_true",
                    help="treat input as raw text and preprocess it first")
    sp.add_argument("--blank-words")
    sp.add_argument("--merge-rules")

    sp = sub.add_parser("evaluate", help="score a model or compare strategies")
    sp.add_argument("--gold", required=True, help="labeled corpus file")
    sp.add_argument("--model", help="trained model file (single-model mode)")
    sp.add_argument("--compare", action="store_true",
                    help="train and score every strategy on the gold corpus")
    sp.add_argument("--strategies", default=",".join(ev.STRATEGIES))
    sp.add_argument("--refwords")
    sp.add_argument("--lexicon")
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--window", type=int, default=5)
    sp.add_argument("--max-gap", type=int, default=3)
    sp.add_argument("--field", default="app")
    sp.add_argument("--json-out")
    sp.add_argument("--csv-out")

    sp = sub.add_parser("validate", help="run the lexicon constraint engine")
    sp.add_argument("--lexicon", required=True)
    sp.add_argument("--constraints", help="comma list, e.g. C1,C3 (default: all)")
    sp.add_argument("--classes", help="file with one class id per line (C2)")
    sp.add_argument("--field", help="application field (C4)")
    sp.add_argument("--blank-words", help="blank-word file (C6)")
    sp.add_argument("--nature-tags", help="file with one nature tag per line (C7)")
    sp.add_argument("--refwords", help="reference-word file (C8)")

    sp = sub.add_parser("gen-corpus", help="generate a planted synthetic corpus")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", dest="outfile", required=True)
    sp.add_argument("--spec", help="planted-spec JSON (default: built-in)")
    sp.add_argument("--lexicon-out")
    sp.add_argument("--refwords-out")
    sp.add_argument("--spec-out", help="write the effective spec JSON here")

    sp = sub.add_parser("serve", help="run the annotation HTTP service")
    sp.add_argument("--lexicon", required=True)
    sp.add_argument("--corpus", help="typed corpus file for suggestions")
    sp.add_argument("--model", help="trained model for decode preview")
    sp.add_argument("--ui", help="directory with the built frontend, served at /ui")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)

    return p


def _read_lines(path):
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _load_id_set(path):
    return {line.strip() for line in _read_lines(path)
            if line.strip() and not line.lstrip().startswith("#")}


def cmd_preprocess(args) -> int:
    config = preprocess.parse_config(args.blank_words, args.merge_rules,
                                     normalize=not args.no_normalize)
    out_lines = []
    for line in _read_lines(args.infile):
        if not line.strip():
            continue
        if "\t" in line:
            type_id, raw = line.split("\t", 1)
            toks = preprocess.preprocess(raw, config)
            out_lines.append(f"{type_id}\t{' '.join(t.surface for t in toks)}")
        else:
            toks = preprocess.preprocess(line, config)
            out_lines.append(" ".join(t.surface for t in toks))
    _write(args.outfile, "\n".join(out_lines) + ("\n" if out_lines else ""))
    return 0


def cmd_extract_refwords(args) -> int:
    corpus = corpus_io.load_typed_corpus(args.corpus)
    per_type = extraction.extract_reference_words(
        corpus, args.threshold, args.max_ngram, args.max_gap)
    flat = [r for t in corpus.types for r in per_type[t]]
    _write(args.outfile, extraction.serialize_reference_words(flat))
    return 0


def cmd_cluster(args) -> int:
    corpus = corpus_io.load_typed_corpus(args.corpus)
    catalog = extraction.kmeans_classes(
        corpus, args.k, max_iters=args.max_iters, seed=args.seed,
        top_contexts=args.top_contexts, window=args.vector_window)
    lines = [f"{cid}\t{' '.join(members)}" for cid, members in catalog.classes]
    _write(args.outfile, "\n".join(lines) + "\n")
    return 0


def cmd_train(args) -> int:
    corpus = corpus_io.load_labeled_corpus(args.corpus)
    refwords = (extraction.load_reference_words(args.refwords, args.max_gap)
                if args.refwords else [])
    catalogs = model.Catalogs.from_corpus(corpus, refwords)
    config = model.TrainConfig(
        context_mode=args.context_mode, window=args.window, delta=args.delta,
        max_gap=args.max_gap, smooth_affinity=not args.no_affinity_smoothing,
        field=args.field)
    trained = model.train(corpus, None, catalogs, config)
    model.save_model(trained, args.outfile)
    return 0


def cmd_decode(args) -> int:
    trained = model.load_model(args.model)
    lex = lexicon.load_lexicon(args.lexicon) if args.lexicon else None
    out_lines = []
    pp_config = preprocess.parse_config(args.blank_words, args.merge_rules)
    for line in _read_lines(args.infile):
        if not line.strip():
            continue
        skipped = ()
        if args.raw:
            toks, skipped = preprocess.preprocess_with_skipped(line, pp_config)
            tokens = [t.surface for t in toks]
        else:
            tokens = line.split()
        decoded = model.decode(trained, lex, tokens, skipped)
        fields = " ".join(f"{w.token}/{w.semantic_class}/{w.micro_trait}"
                          for w in decoded.labels)
        out_lines.append(f"{decoded.utterance_type[0]}\t{fields}")
    _write(args.outfile, "\n".join(out_lines) + ("\n" if out_lines else ""))
    return 0


def cmd_evaluate(args) -> int:
    gold = corpus_io.load_labeled_corpus(args.gold)
    lex = lexicon.load_lexicon(args.lexicon) if args.lexicon else None
    if args.compare:
        refwords = (extraction.load_reference_words(args.refwords, args.max_gap)
                    if args.refwords else [])
        catalogs = model.Catalogs.from_corpus(gold, refwords)
        config = model.TrainConfig(delta=args.delta, window=args.window,
                                   max_gap=args.max_gap, field=args.field)
        names = [s.strip() for s in args.strategies.split(",") if s.strip()]
        reports = ev.compare_strategies(gold, catalogs, lex, config, names)
    elif args.model:
        trained = model.load_model(args.model)
        report = ev.evaluate(trained, gold, lex)
        reports = {report.strategy: report}
    else:
        raise ValueError("evaluate needs --model or --compare")
    sys.stdout.write(ev.reports_to_text(reports))
    if args.json_out:
        _write(args.json_out, ev.reports_to_json(reports))
    if args.csv_out:
        _write(args.csv_out, ev.reports_to_csv(reports))
    return 0


def cmd_validate(args) -> int:
    lex = lexicon.load_lexicon(args.lexicon)
    enabled = (frozenset(s.strip() for s in args.constraints.split(","))
               if args.constraints else frozenset(lexicon.ALL_CONSTRAINTS))
    refwords = None
    if args.refwords:
        refwords = [r.tokens for r in extraction.load_reference_words(args.refwords)]
    ctx = lexicon.ValidationContext(
        class_catalog=_load_id_set(args.classes) if args.classes else None,
        app_field=args.field,
        blank_words=preprocess.load_blank_words(args.blank_words)
        if args.blank_words else None,
        nature_tags=_load_id_set(args.nature_tags) if args.nature_tags else None,
        reference_words=refwords,
        enabled=enabled,
    )
    violations = lex.validate(ctx)
    for v in violations:
        print(f"{v.constraint_id}\t{','.join(v.entries)}\t{v.message}")
    if violations:
        print(f"{len(violations)} violation(s)", file=sys.stderr)
        return 1
    print("lexicon valid")
    return 0


def cmd_gen_corpus(args) -> int:
    if args.spec:
        with open(args.spec, encoding="utf-8") as f:
            spec = ev.planted_spec_from_json(f.read())
    else:
        spec = ev.default_planted_spec()
    corpus = ev.generate_synthetic_corpus(spec, args.size, args.seed)
    corpus_io.save_labeled_corpus(corpus, args.outfile)
    if args.lexicon_out:
        lexicon.save_lexicon(spec.build_lexicon(), args.lexicon_out)
    if args.refwords_out:
        extraction.save_reference_words(spec.reference_words(), args.refwords_out)
    if args.spec_out:
        _write(args.spec_out, ev.planted_spec_to_json(spec))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from semdec.service import AnnotationSession, create_app

    session = AnnotationSession(lexicon_path=args.lexicon,
                                corpus_path=args.corpus,
                                model_path=args.model)
    uvicorn.run(create_app(session, ui_dir=args.ui), host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "preprocess": cmd_preprocess,
    "extract-refwords": cmd_extract_refwords,
    "cluster": cmd_cluster,
    "train": cmd_train,
    "decode": cmd_decode,
    "evaluate": cmd_evaluate,
    "validate": cmd_validate,
    "gen-corpus": cmd_gen_corpus,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
