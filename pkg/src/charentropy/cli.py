"""Command-line surface: reproducible pipelines over the library.

Design rules, enforced uniformly across subcommands:

* data goes to files (or standard output); diagnostics go to standard
  error;
* exit code 0 on success, 1 on usage errors, 2 on data errors;
* every run writes a :class:`RunManifest` JSON next to its output — the
  subcommand, tool version, seed, flattened configuration, and a SHA-256
  digest of every input file — so an artifact can always be traced to the
  exact inputs that produced it. Manifests carry no timestamps: rerunning
  a command with identical inputs yields byte-identical artifacts,
  manifest included;
* all floats print with 12 significant digits; JSON layouts carry a
  ``schema_version``.

The long-table TSV (see the ingest module) is the interchange format:
``ingest`` produces it, ``translit`` and ``cleanse`` transform it, and the
measurement commands (``stats``, ``bigrams``, ``sample``, ``sukhotin``,
``batch``) consume it or, for ``batch``, the raw interlinear file.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .cleanse import (CleanseConfig, charset_report, cleanse, parse_config,
                      parse_script_range)
from .errors import CharentropyError, ConfigError
from .formats import (SCHEMA_VERSION, fmt_float, json_dumps, sha256_bytes,
                      sha256_file)
from .ingest import (CANONICAL_SELECTIONS, FolioMetadataMap, LongTable,
                     canonical_selection, parse_interlinear, parse_plaintext,
                     read_tsv, write_tsv)
from .metrics import (bigram_matrix, coverage_report, entropy_report,
                      heatmap_export, to_stream)
from .sampling import (SamplingConfig, distributions_to_csv,
                       distributions_to_dict, sample_h2)
from .sukhotin import detect_on_document
from .translit import builtin_rules, load_rules_file, simplify_document, \
    transliterate_document

BATCH_SYSTEMS = ("maximal", "simplified", "minimal", "none")


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written alongside every artifact."""

    command: str
    input_digests: tuple[tuple[str, str], ...]
    config: dict
    tool_version: str
    seed: int | None = None

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "tool_version": self.tool_version,
            "seed": self.seed,
            "input_digests": [
                {"path": p, "sha256": h} for p, h in self.input_digests],
            "config": {k: self.config[k] for k in sorted(self.config)},
        }


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit 1 (2 is reserved for data errors)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _digest_inputs(paths) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((str(p), sha256_file(p)) for p in paths))


def _builtin_digest(name: str) -> tuple[str, str]:
    from importlib import resources
    data = (resources.files("charentropy.data") / name).read_bytes()
    return (f"builtin:{name}", sha256_bytes(data))


def _write_manifest(args, command: str, digests, config: dict,
                    seed: int | None = None,
                    default_base: str | None = None) -> None:
    if args.manifest:
        path = args.manifest
    elif default_base:
        path = f"{default_base}.manifest.json"
    else:
        path = "run_manifest.json"
    manifest = RunManifest(
        command=command,
        input_digests=tuple(sorted(digests)),
        config=config,
        tool_version=__version__,
        seed=seed,
    )
    Path(path).write_text(json_dumps(manifest.as_dict()), encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_table(path: str) -> LongTable:
    return read_tsv(Path(path).read_text(encoding="utf-8"))


def _load_meta(args) -> tuple[FolioMetadataMap, tuple[str, str]]:
    if args.meta:
        meta = FolioMetadataMap.from_file(args.meta)
        digest = (str(args.meta), sha256_file(args.meta))
    else:
        from importlib import resources
        text = (resources.files("charentropy.data") / "folio_metadata.tsv"
                ).read_text(encoding="utf-8")
        meta = FolioMetadataMap.from_tsv(text)
        digest = _builtin_digest("folio_metadata.tsv")
    if args.allow_missing_meta:
        meta = meta.permissive()
    return meta, digest


def _sniff_kind(raw: bytes) -> str:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        return "plaintext"  # the plaintext parser reports the bad byte
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        return "interlinear" if stripped.startswith("<") else "plaintext"
    return "plaintext"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    raw = Path(args.input).read_bytes()
    kind = args.kind
    if kind == "auto":
        kind = _sniff_kind(raw)
    source_id = args.source_id or Path(args.input).name
    digests = [(str(args.input), sha256_file(args.input))]
    if kind == "interlinear":
        meta, meta_digest = _load_meta(args)
        digests.append(meta_digest)
        table = parse_interlinear(
            raw, meta, args.transcriber,
            comma_breaks=args.comma_breaks, source_id=source_id)
    else:
        table = parse_plaintext(raw, source_id)
    if args.select:
        table = canonical_selection(table, args.select)
    _emit(write_tsv(table), args.out)
    _write_manifest(
        args, "ingest", digests,
        {"kind": kind, "transcriber": args.transcriber,
         "comma_breaks": args.comma_breaks, "source_id": source_id,
         "allow_missing_meta": args.allow_missing_meta,
         "select": args.select},
        default_base=args.out)
    return 0


def cmd_translit(args) -> int:
    table = _read_table(args.input)
    digests = [(str(args.input), sha256_file(args.input))]
    if args.simplify:
        out_table = simplify_document(table, threshold=args.rare_min)
        rules_label = f"simplify(<{args.rare_min})"
    elif args.rules:
        ruleset = load_rules_file(args.rules)
        digests.append((str(args.rules), sha256_file(args.rules)))
        out_table = transliterate_document(table, ruleset)
        rules_label = ruleset.name
    else:
        ruleset = builtin_rules(args.system)
        digests.append(_builtin_digest(f"{args.system}.rules"))
        out_table = transliterate_document(table, ruleset)
        rules_label = args.system
    _emit(write_tsv(out_table), args.out)
    _write_manifest(
        args, "translit", digests,
        {"rules": rules_label, "rare_min": args.rare_min,
         "simplify": args.simplify},
        default_base=args.out)
    return 0


def _cleanse_config(args) -> CleanseConfig:
    if args.config:
        base = parse_config(Path(args.config).read_text(encoding="utf-8"))
    else:
        base = CleanseConfig()
    ranges = base.script_ranges
    if args.script_range:
        ranges = tuple(parse_script_range(s) for s in args.script_range)
    return CleanseConfig(
        lowercase=base.lowercase and not args.no_lowercase,
        strip_punctuation=(base.strip_punctuation
                           and not args.no_strip_punctuation),
        rare_char_threshold=(args.threshold if args.threshold is not None
                             else base.rare_char_threshold),
        script_ranges=ranges,
        preserve_chars=base.preserve_chars | frozenset(args.keep or ""),
    )


def cmd_cleanse(args) -> int:
    table = _read_table(args.input)
    digests = [(str(args.input), sha256_file(args.input))]
    if args.config:
        digests.append((str(args.config), sha256_file(args.config)))
    cfg = _cleanse_config(args)
    _emit(write_tsv(cleanse(table, cfg)), args.out)
    _write_manifest(
        args, "cleanse", digests,
        {"lowercase": cfg.lowercase,
         "strip_punctuation": cfg.strip_punctuation,
         "rare_char_threshold": cfg.rare_char_threshold,
         "script_ranges": [f"U+{lo:04X}..U+{hi:04X}"
                           for lo, hi in (cfg.script_ranges or ())],
         "preserve_chars": "".join(sorted(cfg.preserve_chars))},
        default_base=args.out)
    return 0


def cmd_stats(args) -> int:
    table = _read_table(args.input)
    report = entropy_report(to_stream(table))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "source_id": table.source_id,
        "entropy": report.as_dict(),
        "charset": [{"char": c, "count": n, "proportion": p}
                    for c, n, p in charset_report(table)],
    }
    _emit(json_dumps(doc), args.out)
    _write_manifest(
        args, "stats", [(str(args.input), sha256_file(args.input))], {},
        default_base=args.out)
    return 0


def cmd_bigrams(args) -> int:
    table = _read_table(args.input)
    matrix = bigram_matrix(to_stream(table))
    prefix = args.out_prefix
    for mode, suffix in (("conditional", "conditional"),
                         ("weighted", "weighted"),
                         ("entropy_contribution", "entropy")):
        Path(f"{prefix}_{suffix}.csv").write_text(
            heatmap_export(matrix, mode), encoding="utf-8")
    coverage = coverage_report(matrix, args.threshold)
    doc = {"schema_version": SCHEMA_VERSION,
           "source_id": table.source_id}
    doc.update(coverage.as_dict())
    Path(f"{prefix}_coverage.json").write_text(
        json_dumps(doc), encoding="utf-8")
    _write_manifest(
        args, "bigrams", [(str(args.input), sha256_file(args.input))],
        {"threshold": args.threshold, "out_prefix": prefix},
        default_base=prefix)
    return 0


def cmd_sample(args) -> int:
    table = _read_table(args.input)
    cfg = SamplingConfig(
        window_sizes=tuple(args.windows),
        samples_per_size=args.n,
        seed=args.seed,
    )
    distributions = sample_h2(table, cfg)
    if args.format == "csv":
        text = distributions_to_csv(distributions)
    else:
        text = json_dumps({
            "schema_version": SCHEMA_VERSION,
            "source_id": table.source_id,
            "seed": args.seed,
            "samples_per_size": args.n,
            "distributions": distributions_to_dict(
                distributions, include_values=args.values),
        })
    _emit(text, args.out)
    _write_manifest(
        args, "sample", [(str(args.input), sha256_file(args.input))],
        {"windows": list(args.windows), "n": args.n, "format": args.format,
         "values": args.values},
        seed=args.seed, default_base=args.out)
    return 0


def cmd_sukhotin(args) -> int:
    table = _read_table(args.input)
    result = detect_on_document(table, include_space=args.include_space)
    doc = {"schema_version": SCHEMA_VERSION,
           "source_id": table.source_id}
    doc.update(result.as_dict(diagnostics=args.diagnostics))
    _emit(json_dumps(doc), args.out)
    _write_manifest(
        args, "sukhotin", [(str(args.input), sha256_file(args.input))],
        {"include_space": args.include_space,
         "diagnostics": args.diagnostics},
        default_base=args.out)
    return 0


def _batch_jobs(args) -> list[tuple[str, str, str]]:
    """(doc label, selection name, system) rows, in output order."""
    if args.jobs:
        jobs = []
        for n, line in enumerate(
                Path(args.jobs).read_text(encoding="utf-8").splitlines(),
                start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ConfigError(
                    f"{args.jobs}: line {n}: expected "
                    f"doc<TAB>selection<TAB>system")
            doc, selection, system = (f.strip() for f in fields)
            if selection not in CANONICAL_SELECTIONS:
                raise ConfigError(
                    f"{args.jobs}: line {n}: unknown selection "
                    f"{selection!r}")
            if system not in BATCH_SYSTEMS:
                raise ConfigError(
                    f"{args.jobs}: line {n}: unknown system {system!r}; "
                    f"expected one of {', '.join(BATCH_SYSTEMS)}")
            jobs.append((doc, selection, system))
        if not jobs:
            raise ConfigError(f"{args.jobs}: no jobs")
        return jobs
    selections = ["full", "full_text", "a", "a_text", "b", "b_text"]
    for h in "12345":
        selections += [f"hand{h}", f"hand{h}_text"]
    return [(sel, sel, system)
            for sel in selections
            for system in ("maximal", "simplified", "minimal")]


def _batch_pipeline(table: LongTable, system: str,
                    rare_min: int) -> LongTable:
    if system == "none":
        return table
    decomposed = transliterate_document(table, builtin_rules("maximal"))
    if system == "maximal":
        return decomposed
    if system == "simplified":
        return simplify_document(decomposed, threshold=rare_min)
    return transliterate_document(decomposed, builtin_rules("minimal"))


def cmd_batch(args) -> int:
    raw = Path(args.input).read_bytes()
    meta, meta_digest = _load_meta(args)
    digests = [(str(args.input), sha256_file(args.input)), meta_digest,
               _builtin_digest("maximal.rules"),
               _builtin_digest("minimal.rules")]
    if args.jobs:
        digests.append((str(args.jobs), sha256_file(args.jobs)))
    table = parse_interlinear(
        raw, meta, args.transcriber,
        comma_breaks=args.comma_breaks,
        source_id=args.source_id or Path(args.input).name)

    header = "doc\ttranscription\tcharset\th2\twords\tword_types\n"
    rows = []
    for doc, selection, system in _batch_jobs(args):
        selected = canonical_selection(table, selection)
        if not selected.records:
            print(f"charentropy: batch: skipping {doc}/{system}: "
                  f"selection {selection!r} is empty", file=sys.stderr)
            continue
        report = entropy_report(to_stream(
            _batch_pipeline(selected, system, args.rare_min)))
        rows.append("\t".join([
            doc, system, str(report.charset_size), fmt_float(report.h2),
            str(report.word_token_count), str(report.word_type_count)]))
    _emit(header + "".join(r + "\n" for r in rows), args.out)
    _write_manifest(
        args, "batch", digests,
        {"transcriber": args.transcriber, "comma_breaks": args.comma_breaks,
         "rare_min": args.rare_min,
         "allow_missing_meta": args.allow_missing_meta,
         "jobs": str(args.jobs) if args.jobs else "default"},
        default_base=args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def _windows_arg(text: str) -> list[int]:
    try:
        windows = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"windows must be comma-separated integers, got {text!r}")
    if not windows:
        raise argparse.ArgumentTypeError("windows list is empty")
    return windows


def _add_meta_flags(p) -> None:
    p.add_argument("--meta", metavar="TSV",
                   help="folio metadata map (default: built-in starter map)")
    p.add_argument("--allow-missing-meta", action="store_true",
                   help="classify folios absent from the map as unclassified "
                        "instead of failing")
    p.add_argument("--transcriber", metavar="ID",
                   help="keep only this transcriber's lines")
    p.add_argument("--comma-breaks", action="store_true",
                   help="treat uncertain word breaks (commas) as real breaks "
                        "instead of deleting them")
    p.add_argument("--source-id", metavar="ID",
                   help="document identifier (default: input file name)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="charentropy",
        description="Character-level statistics for manuscript "
                    "transcriptions and plain-text corpora.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--manifest", metavar="PATH",
                       help="where to write the run manifest "
                            "(default: next to the output)")
        return p

    p = add("ingest", cmd_ingest,
            "Parse an interlinear or plain-text file into a long-table TSV.")
    p.add_argument("input", help="input file")
    p.add_argument("--kind", choices=("auto", "interlinear", "plaintext"),
                   default="auto", help="input format (default: sniff)")
    _add_meta_flags(p)
    p.add_argument("--select", choices=sorted(CANONICAL_SELECTIONS),
                   metavar="NAME",
                   help="keep only one canonical document selection "
                        f"({', '.join(sorted(CANONICAL_SELECTIONS))})")
    p.add_argument("--out", metavar="PATH", help="output TSV (default: stdout)")

    p = add("translit", cmd_translit,
            "Rewrite every word of a long table with a transliteration "
            "rule set.")
    p.add_argument("input", help="long-table TSV")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rules", metavar="FILE",
                       help="rule file (pattern<TAB>replacement per line)")
    group.add_argument("--system", choices=("maximal", "simplify", "minimal"),
                       help="use a built-in rule table")
    group.add_argument("--simplify", action="store_true",
                       help="corpus-driven simplification: lower ligature "
                            "capitals, mask characters rarer than --rare-min")
    p.add_argument("--rare-min", type=int, default=50, metavar="N",
                   help="occurrence count below which --simplify masks a "
                        "character (default: 50)")
    p.add_argument("--out", metavar="PATH", help="output TSV (default: stdout)")

    p = add("cleanse", cmd_cleanse,
            "Normalize a long table: strip punctuation and case, drop rare "
            "characters, filter by script range.")
    p.add_argument("input", help="long-table TSV")
    p.add_argument("--config", metavar="FILE", help="key=value config file")
    p.add_argument("--threshold", type=float, metavar="FRAC",
                   help="rare-character proportion threshold "
                        "(default: 0.0001)")
    p.add_argument("--script-range", action="append", metavar="U+A..U+B",
                   help="keep only characters in this codepoint range "
                        "(repeatable)")
    p.add_argument("--keep", metavar="CHARS",
                   help="characters exempt from every removal stage")
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--no-strip-punctuation", action="store_true")
    p.add_argument("--out", metavar="PATH", help="output TSV (default: stdout)")

    p = add("stats", cmd_stats,
            "Entropy ladder (h0/h1/h2) and ranked character census as JSON.")
    p.add_argument("input", help="long-table TSV")
    p.add_argument("--out", metavar="PATH", help="output JSON (default: stdout)")

    p = add("bigrams", cmd_bigrams,
            "Bigram matrices as CSV heatmap grids plus the forced-successor "
            "coverage report.")
    p.add_argument("input", help="long-table TSV")
    p.add_argument("--threshold", type=float, default=0.5, metavar="FRAC",
                   help="conditional-probability cutoff for the coverage "
                        "report (default: 0.5)")
    p.add_argument("--out-prefix", default="bigrams", metavar="PREFIX",
                   help="writes PREFIX_conditional.csv, PREFIX_weighted.csv, "
                        "PREFIX_entropy.csv, PREFIX_coverage.json "
                        "(default: bigrams)")

    p = add("sample", cmd_sample,
            "Bootstrap h2 over random word windows; report spread per "
            "window size.")
    p.add_argument("input", help="long-table TSV")
    p.add_argument("--windows", type=_windows_arg, required=True,
                   metavar="W1,W2,...", help="window sizes in words")
    p.add_argument("--n", type=int, default=1000, metavar="N",
                   help="samples per window size (default: 1000)")
    p.add_argument("--seed", type=int, default=0, metavar="SEED",
                   help="master seed (default: 0)")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="json summary or long-form csv (default: json)")
    p.add_argument("--values", action="store_true",
                   help="include raw sample values in the JSON report")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    p = add("sukhotin", cmd_sukhotin,
            "Vowel detection from character adjacency.")
    p.add_argument("input", help="long-table TSV")
    p.add_argument("--include-space", action="store_true",
                   help="let the word boundary participate as a symbol")
    p.add_argument("--diagnostics", action="store_true",
                   help="include iteration count and final working sums")
    p.add_argument("--out", metavar="PATH", help="output JSON (default: stdout)")

    p = add("batch", cmd_batch,
            "Ingest an interlinear file and tabulate stats for document "
            "selections under each transcription system.")
    p.add_argument("input", help="interlinear transcription file")
    _add_meta_flags(p)
    p.add_argument("--jobs", metavar="TSV",
                   help="job list: doc<TAB>selection<TAB>system per line "
                        "(default: all 16 canonical selections under "
                        "maximal, simplified and minimal)")
    p.add_argument("--rare-min", type=int, default=50, metavar="N",
                   help="rarity cutoff for the simplified system "
                        "(default: 50)")
    p.add_argument("--out", metavar="PATH", help="output TSV (default: stdout)")

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CharentropyError as exc:
        print(f"charentropy: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"charentropy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
