"""Command-line client: corpus tooling, enrollment, evaluation, dialog, serving.

All state lives under the data directory (--data-dir or KIDVOICE_DATA_DIR);
the commands are thin wrappers over the library.
"""

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from . import dialog as dlg
from .api.server import load_configs
from .corpus import CorpusStore, WordCountWarning, load_freq_dict, select_vocabulary
from .evaluation import enroll_split, run_evaluation, write_report
from .generation import generate_response, load_g2p_rules, load_templates, phonemize
from .lm import load_model, save_model, train_unigram
from .pipeline import FrontEnd
from .recognizer import DecoderConfig, Hypothesis, NBestList, TemplateStore
from .synth import generate_corpus, install_default_assets


def data_dir_from(args) -> Path:
    return Path(args.data_dir or os.environ.get("KIDVOICE_DATA_DIR", "kidvoice-data"))


def cmd_corpus_import(args):
    root = data_dir_from(args)
    store = CorpusStore.open(root)
    rows = Path(args.manifest).read_text(encoding="utf-8").splitlines()
    header = rows[0].split("\t")
    imported = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", WordCountWarning)
        for line in rows[1:]:
            if not line.strip():
                continue
            row = dict(zip(header, line.split("\t")))
            store.import_recording(
                row["speaker_id"],
                int(row["age_years"]),
                row["word"],
                row["wav_path"],
                row.get("utterance_id"),
            )
            imported += 1
    store.save()
    print(f"imported {imported} recordings into {root}")
    for w in {str(c.message) for c in caught}:
        print(f"warning: {w}")


def cmd_corpus_split(args):
    ratios = tuple(float(x) for x in args.ratios.split(","))
    store = CorpusStore.open(data_dir_from(args))
    summary = store.assign_splits(ratios, args.seed)
    for split, n in summary.sizes.items():
        print(f"{split}: {n}")


def cmd_corpus_vocab(args):
    root = data_dir_from(args)
    store = CorpusStore.open(root)
    freq = load_freq_dict(root / "freq_dict.tsv")
    lexicon = select_vocabulary(freq, args.top)
    store.set_lexicon(lexicon)
    store.save()
    print(f"lexicon: {', '.join(lexicon.words)}")


def cmd_corpus_synth(args):
    root = data_dir_from(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", WordCountWarning)
        store = generate_corpus(
            root,
            n_words=args.words,
            n_speakers=args.speakers,
            utterances_per_word=args.utterances,
            snr_db=args.snr,
            seed=args.seed,
        )
    print(
        f"synthesized {len(store.recordings)} recordings "
        f"({args.words} words x {args.speakers} speakers) into {root}"
    )
    for w in {str(c.message) for c in caught}:
        print(f"warning: {w}")


def cmd_enroll(args):
    root = data_dir_from(args)
    store = CorpusStore.open(root)
    pre, feat, _ = load_configs(root)
    if args.denoise:
        pre = type(pre)(**{**vars(pre), "denoise_enabled": True})
    frontend = FrontEnd(pre, feat)
    templates = enroll_split(store, args.split, frontend)
    templates.save(root / "templates")
    print(f"enrolled {len(templates)} templates from split {args.split!r}")


def _decoder_from_args(args, base: DecoderConfig) -> DecoderConfig:
    kwargs = vars(base).copy()
    if args.tau is not None:
        kwargs["tau"] = args.tau
    if args.lm_weight is not None:
        kwargs["lm_weight"] = args.lm_weight
    kwargs["vtln_search"] = bool(args.vtln)
    return DecoderConfig(**kwargs)


def cmd_evaluate(args):
    root = data_dir_from(args)
    store = CorpusStore.open(root)
    pre, feat, decoder = load_configs(root)
    if args.denoise:
        pre = type(pre)(**{**vars(pre), "denoise_enabled": True})
    decoder = _decoder_from_args(args, decoder)
    frontend = FrontEnd(pre, feat)
    templates = TemplateStore.load(root / "templates", store.lexicon)
    lm_path = root / "lm.json"
    lm = (
        load_model(lm_path)
        if lm_path.exists()
        else train_unigram(load_freq_dict(root / "freq_dict.tsv"), store.lexicon)
    )
    report = run_evaluation(store, args.split, templates, lm, decoder, frontend)
    out = Path(args.out) if args.out else root / "reports" / f"eval_{args.split}.json"
    write_report(report, out)
    print(report.render_table())
    print(f"report written to {out}")


def cmd_lm_load(args):
    root = data_dir_from(args)
    model = load_model(args.model)  # validates the file
    save_model(model, root / "lm.json")
    print(f"language model installed ({len(model.vocab)} words)")


def cmd_lm_train(args):
    root = data_dir_from(args)
    store = CorpusStore.open(root)
    model = train_unigram(load_freq_dict(root / "freq_dict.tsv"), store.lexicon)
    save_model(model, root / "lm.json")
    print(f"language model trained ({len(model.vocab)} words)")


def _print_turn(response_text, phonemes):
    print(f"system: {response_text}")
    print(f"        /{' '.join(phonemes)}/")


def cmd_dialog(args):
    if args.server:
        _dialog_against_server(args)
        return
    root = data_dir_from(args)
    install_default_assets(root)
    store = CorpusStore.open(root)
    concept_map = store.lexicon.concept_map() if store.lexicon else {}
    templates = load_templates(root / "responses.json")
    g2p = load_g2p_rules(root / "g2p_rules.json")

    def render(intent):
        return generate_response(intent, {}, templates)

    agenda = dlg.load_agenda_spec(args.agenda or root / "agendas" / "default.json")
    state = dlg.init_session(agenda)
    text = render(state.current_intent())
    _print_turn(text, list(phonemize(text, g2p)))

    source = Path(args.script).read_text(encoding="utf-8").splitlines() if args.script else None
    clock = iter(range(10**9)).__next__ if args.script else None

    def turns():
        if source is not None:
            yield from (line.strip() for line in source if line.strip())
        else:
            while True:
                try:
                    line = input("you: ").strip()
                except EOFError:
                    return
                if not line:
                    continue
                yield line

    for line in turns():
        user_input = line
        if line.startswith("REJECT:"):
            word = line.split(":", 1)[1]
            user_input = NBestList(
                hypotheses=[Hypothesis(word, 9.0, -1.0, 10.0)], rejected=True
            )
        if args.script:
            print(f"you: {line}")
        kwargs = {"clock": clock} if clock else {}
        intent, state = dlg.dialog_turn(
            state, user_input, concept_map, renderer=render, **kwargs
        )
        text = render(intent)
        _print_turn(text, list(phonemize(text, g2p)))
        if state.finished:
            break
    if args.transcript:
        rows = dlg.transcript_to_jsonable(state)
        Path(args.transcript).write_text(
            json.dumps(rows, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        print(f"transcript written to {args.transcript}")


def _dialog_against_server(args):
    import httpx

    base = args.server.rstrip("/")
    agenda_id = Path(args.agenda).stem if args.agenda else "default"
    with httpx.Client(base_url=base, timeout=30.0) as client:
        created = client.post("/api/v1/sessions", json={"agenda": agenda_id})
        created.raise_for_status()
        doc = created.json()
        session_id = doc["session_id"]
        _print_turn(doc["response_text"], doc["phonemes"])
        while True:
            try:
                line = input("you: ").strip()
            except EOFError:
                return
            if not line:
                continue
            resp = client.post(
                f"/api/v1/sessions/{session_id}/turn", json={"word": line}
            )
            if resp.status_code != 200:
                print(f"error: {resp.json()}")
                continue
            doc = resp.json()
            _print_turn(doc["response_text"], doc["phonemes"])
            if doc["finished"]:
                return


def cmd_serve(args):
    import uvicorn

    from .api import create_app

    app = create_app(data_dir_from(args), static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kidvoice")
    parser.add_argument("--data-dir", help="store directory (default: KIDVOICE_DATA_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="speech database tooling")
    corpus_sub = corpus.add_subparsers(dest="subcommand", required=True)

    p = corpus_sub.add_parser("import", help="import recordings from a TSV manifest")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_corpus_import)

    p = corpus_sub.add_parser("split", help="assign train/dev/eval splits")
    p.add_argument("--ratios", default="0.8,0.1,0.1")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_corpus_split)

    p = corpus_sub.add_parser("vocab", help="select the lexicon from the frequency dictionary")
    p.add_argument("--top", type=int, required=True)
    p.set_defaults(func=cmd_corpus_vocab)

    p = corpus_sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--words", type=int, default=10)
    p.add_argument("--speakers", type=int, default=5)
    p.add_argument("--utterances", type=int, default=8)
    p.add_argument("--snr", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_corpus_synth)

    p = sub.add_parser("enroll", help="extract features and enroll templates")
    p.add_argument("--split", default="train")
    p.add_argument("--denoise", action="store_true")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("evaluate", help="decode a split and report accuracy")
    p.add_argument("--split", default="eval", choices=["dev", "eval"])
    p.add_argument("--vtln", action="store_true")
    p.add_argument("--denoise", action="store_true")
    p.add_argument("--tau", type=float)
    p.add_argument("--lm-weight", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    lm = sub.add_parser("lm", help="language model management")
    lm_sub = lm.add_subparsers(dest="subcommand", required=True)
    p = lm_sub.add_parser("load", help="install a model file without touching templates")
    p.add_argument("model")
    p.set_defaults(func=cmd_lm_load)
    p = lm_sub.add_parser("train", help="train from the frequency dictionary")
    p.set_defaults(func=cmd_lm_train)

    p = sub.add_parser("dialog", help="text-mode dialog REPL")
    p.add_argument("--agenda", help="agenda spec file (default: agendas/default.json)")
    p.add_argument("--script", help="read turns from a file instead of stdin")
    p.add_argument("--transcript", help="write the session transcript as JSON")
    p.add_argument("--server", help="talk to a running service instead of running locally")
    p.set_defaults(func=cmd_dialog)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", help="directory of web console files to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
