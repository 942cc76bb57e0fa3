import json

from semdec.cli import main
from semdec.corpus import load_labeled_corpus, serialize_labeled_corpus

LEX_LINES = (
    "كتاب\tapp\tobj\tthing\tmasculine\tsingular\tname\n"
    "قلم\tapp\tobj\tthing\tmasculine\tsingular\tname\n"
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_validate_flags_violation_and_exit_code(tmp_path, capsys):
    lexfile = write(tmp_path / "lex.tsv", LEX_LINES)
    assert main(["validate", "--lexicon", lexfile]) == 1
    out = capsys.readouterr().out
    assert "C1" in out
    fixed = LEX_LINES.replace("name\n", "name\tsyn1\n")
    lexfile2 = write(tmp_path / "lex2.tsv", fixed)
    assert main(["validate", "--lexicon", lexfile2]) == 0


def test_validate_constraint_selection(tmp_path):
    lexfile = write(tmp_path / "lex.tsv",
                    "w1\tf1\tc\tt\tmasculine\tsingular\tname\n"
                    "w2\tf2\tc\tt\tmasculine\tsingular\tname\n")
    assert main(["validate", "--lexicon", lexfile,
                 "--constraints", "C1"]) == 0  # C3 case, C1 alone passes
    assert main(["validate", "--lexicon", lexfile]) == 1


def test_missing_file_gives_error_line(tmp_path, capsys):
    assert main(["validate", "--lexicon", str(tmp_path / "nope.tsv")]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_preprocess_blank_and_merge(tmp_path):
    blanks = write(tmp_path / "blank.txt", "في\n# comment\nمن\n")
    rules = write(tmp_path / "rules.tsv", "أريد حجز\tأريد_حجز\n")
    raw = write(tmp_path / "in.txt", "أريد حجز مكان في تونس\n")
    out = tmp_path / "out.txt"
    assert main(["preprocess", "--in", raw, "--out", str(out),
                 "--blank-words", blanks, "--merge-rules", rules]) == 0
    assert out.read_text(encoding="utf-8") == "أريد_حجز مكان تونس\n"


def test_preprocess_preserves_type_column(tmp_path):
    raw = write(tmp_path / "in.txt", "booking\tأريد حجز\n")
    out = tmp_path / "out.txt"
    assert main(["preprocess", "--in", raw, "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == "booking\tأريد حجز\n"


def test_extract_refwords_and_cluster(tmp_path):
    corpus = write(tmp_path / "typed.tsv",
                   "booking\tأريد حجز مكان\n"
                   "booking\tأريد حجز تذكرة\n"
                   "timing\tأريد توقيت القطار\n"
                   "timing\tتوقيت الحافلة\n")
    refs = tmp_path / "refs.tsv"
    assert main(["extract-refwords", "--corpus", corpus, "--out", str(refs),
                 "--threshold", "0.05"]) == 0
    lines = refs.read_text(encoding="utf-8").splitlines()
    assert any(line.startswith("booking\tحجز") for line in lines)
    assert all(len(line.split("\t")) == 3 for line in lines)

    classes = tmp_path / "classes.tsv"
    assert main(["cluster", "--corpus", corpus, "--out", str(classes),
                 "--k", "3", "--seed", "0"]) == 0
    rows = classes.read_text(encoding="utf-8").splitlines()
    assert len(rows) == 3


def gen_pipeline_files(tmp_path, size=400, seed=1):
    corpus = tmp_path / "corpus.tsv"
    lex = tmp_path / "lex.tsv"
    refs = tmp_path / "refs.tsv"
    assert main(["gen-corpus", "--size", str(size), "--seed", str(seed),
                 "--out", str(corpus), "--lexicon-out", str(lex),
                 "--refwords-out", str(refs)]) == 0
    return corpus, lex, refs


def test_full_pipeline_memorizes(tmp_path, capsys):
    corpus, lex, refs = gen_pipeline_files(tmp_path)
    modelfile = tmp_path / "model.json"
    assert main(["train", "--corpus", str(corpus), "--refwords", str(refs),
                 "--out", str(modelfile), "--field", "traininfo"]) == 0

    tokens = tmp_path / "tokens.txt"
    gold = load_labeled_corpus(corpus)
    tokens.write_text("\n".join(" ".join(w.token for w in u.words)
                                for u in gold) + "\n", encoding="utf-8")
    decoded = tmp_path / "decoded.tsv"
    assert main(["decode", "--model", str(modelfile), "--lexicon", str(lex),
                 "--in", str(tokens), "--out", str(decoded)]) == 0
    # decode output is the labeled-corpus format and reproduces the corpus
    assert load_labeled_corpus(decoded).utterances == gold.utterances
    assert decoded.read_text(encoding="utf-8") == serialize_labeled_corpus(gold)

    assert main(["evaluate", "--gold", str(corpus), "--model", str(modelfile),
                 "--lexicon", str(lex)]) == 0
    out = capsys.readouterr().out
    assert "PERTINENT" in out
    assert "0.00" in out


def test_train_byte_identical(tmp_path):
    corpus, lex, refs = gen_pipeline_files(tmp_path, size=60)
    m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
    for m in (m1, m2):
        assert main(["train", "--corpus", str(corpus), "--refwords", str(refs),
                     "--out", str(m), "--field", "traininfo"]) == 0
    assert m1.read_bytes() == m2.read_bytes()


def test_inputs_never_mutated(tmp_path):
    corpus, lex, refs = gen_pipeline_files(tmp_path, size=30)
    before = corpus.read_bytes(), lex.read_bytes(), refs.read_bytes()
    modelfile = tmp_path / "model.json"
    main(["train", "--corpus", str(corpus), "--refwords", str(refs),
          "--out", str(modelfile), "--field", "traininfo"])
    main(["evaluate", "--gold", str(corpus), "--model", str(modelfile),
          "--lexicon", str(lex)])
    assert (corpus.read_bytes(), lex.read_bytes(), refs.read_bytes()) == before


def test_evaluate_compare_csv_and_json(tmp_path, capsys):
    corpus, lex, refs = gen_pipeline_files(tmp_path, size=300, seed=2)
    csv_out = tmp_path / "cmp.csv"
    json_out = tmp_path / "cmp.json"
    assert main(["evaluate", "--gold", str(corpus), "--compare",
                 "--refwords", str(refs), "--lexicon", str(lex),
                 "--field", "traininfo", "--csv-out", str(csv_out),
                 "--json-out", str(json_out)]) == 0
    rows = csv_out.read_text().splitlines()
    assert rows[0] == "strategy,error_rate"
    assert len(rows) == 6
    parsed = json.loads(json_out.read_text())
    assert set(parsed) == {"LEX", "LEX+TYPE", "FIXED-1", "FIXED-2", "PERTINENT"}


def test_decode_raw_input(tmp_path):
    corpus, lex, refs = gen_pipeline_files(tmp_path, size=60)
    modelfile = tmp_path / "model.json"
    main(["train", "--corpus", str(corpus), "--refwords", str(refs),
          "--out", str(modelfile), "--field", "traininfo"])
    blanks = tmp_path / "blank.txt"
    blanks.write_text("um\n", encoding="utf-8")
    raw = tmp_path / "raw.txt"
    raw.write_text("ref_book um trg_veh_0 fil_1 amb_a_0\n", encoding="utf-8")
    out = tmp_path / "out.tsv"
    assert main(["decode", "--model", str(modelfile), "--lexicon", str(lex),
                 "--in", str(raw), "--out", str(out), "--raw",
                 "--blank-words", str(blanks)]) == 0
    line = out.read_text(encoding="utf-8").strip()
    assert line.startswith("book\t")
    assert "um" not in line


def test_gen_corpus_spec_roundtrip(tmp_path):
    spec_out = tmp_path / "spec.json"
    corpus1 = tmp_path / "c1.tsv"
    assert main(["gen-corpus", "--size", "25", "--seed", "4",
                 "--out", str(corpus1), "--spec-out", str(spec_out)]) == 0
    corpus2 = tmp_path / "c2.tsv"
    assert main(["gen-corpus", "--size", "25", "--seed", "4",
                 "--out", str(corpus2), "--spec", str(spec_out)]) == 0
    assert corpus1.read_bytes() == corpus2.read_bytes()
