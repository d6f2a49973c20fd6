"""Command-line entry point.

Subcommands: validate, analyze, fit, report, simulate.  Exit codes:
0 success, 2 missing/unreadable input, 3 malformed corpus, 4 analysis
error.  Failures emit a single "code: message" line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from citescope import glm, report
from citescope.corpus.filters import filter_min_citations
from citescope.corpus.generator import default_generator_spec, generate_synthetic_corpus
from citescope.corpus.io import load_corpus, save_corpus
from citescope.corpus.model import Corpus
from citescope.errors import (
    AnalysisError,
    CitescopeError,
    CorpusFormatError,
    CorpusIntegrityError,
    GeneratorError,
)
from citescope.metrics import QUANTILE_METHODS, build_analysis_records


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citescope",
        description="Self-citation analytics over citation corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, corpus_required=True):
        if corpus_required:
            p.add_argument("--corpus", required=True, help="corpus JSON file")
        p.add_argument("--min-citations", type=int, default=20,
                       help="inclusive citation threshold (default 20)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--quantile-method", default="linear", choices=QUANTILE_METHODS)
        p.add_argument("--robust", default="hc1", choices=("hc0", "hc1"))
        p.add_argument("--model", default="both", choices=("1", "2", "both"))
        p.add_argument("--ame", default="derivative", choices=("derivative", "discrete"))

    p_validate = sub.add_parser("validate", help="parse and validate a corpus")
    p_validate.add_argument("--corpus", required=True)

    p_analyze = sub.add_parser("analyze", help="descriptive table and figures")
    add_common(p_analyze)
    p_analyze.add_argument("--dump-edges", action="store_true",
                           help="write per-edge self-citation classification CSV")

    p_fit = sub.add_parser("fit", help="fit the regression models")
    add_common(p_fit)

    p_report = sub.add_parser("report", help="full pipeline: analyze + fit")
    add_common(p_report)
    p_report.add_argument("--dump-edges", action="store_true")

    p_sim = sub.add_parser("simulate", help="generate a synthetic corpus and run the pipeline")
    add_common(p_sim, corpus_required=False)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--n-researchers", type=int, default=545)

    return parser


def _fail(code: int, kind: str, message: str) -> int:
    print(f"{kind}: {message}", file=sys.stderr)
    return code


def _load(path_text: str) -> Corpus:
    return load_corpus(Path(path_text))


def _analyze_outputs(corpus: Corpus, args, out: Path) -> list:
    filtered, excluded = filter_min_citations(corpus, args.min_citations)
    records = build_analysis_records(filtered)
    rows = report.table1_rows(records, quantile_method=args.quantile_method)
    out.mkdir(parents=True, exist_ok=True)
    (out / "table1.md").write_text(
        report.render_table1_markdown(rows), encoding="utf-8", newline="\n")
    (out / "table1.csv").write_text(
        report.render_table1_csv(rows), encoding="utf-8", newline="\n")
    (out / "records.csv").write_text(
        report.records_csv(records), encoding="utf-8", newline="\n")
    report.emit_figures(records, out, quantile_method=args.quantile_method)
    if getattr(args, "dump_edges", False):
        (out / "edges_selfcite.csv").write_text(
            report.edge_classification_csv(corpus), encoding="utf-8", newline="\n")
    print(f"retained {len(records)} researchers ({excluded} excluded "
          f"below {args.min_citations} citations)")
    return records


def _fit_outputs(corpus: Corpus, args, out: Path):
    filtered, excluded = filter_min_citations(corpus, args.min_citations)
    records = build_analysis_records(filtered)
    out.mkdir(parents=True, exist_ok=True)
    fits: dict[int, glm.FitResult] = {}
    ames: dict[int, np.ndarray] = {}
    wanted = (1, 2) if args.model == "both" else (int(args.model),)
    for number in wanted:
        variant = glm.ModelVariant.MODEL1 if number == 1 else glm.ModelVariant.MODEL2
        data = glm.build_design_matrix(records, glm.ModelSpec(variant))
        fit = glm.fit_fractional_logit(data, hc=args.robust)
        ame = glm.average_marginal_effects(fit, data, method=args.ame)
        fits[number], ames[number] = fit, ame
        name = f"fit_model{number}"
        (out / f"{name}.json").write_text(
            report.fit_result_json(fit, ame, f"Model{number}"),
            encoding="utf-8", newline="\n")
        (out / f"{name}.csv").write_text(
            report.fit_result_csv(fit, ame), encoding="utf-8", newline="\n")
        status = "converged" if fit.converged else "DID NOT CONVERGE"
        print(f"model {number}: {status} in {fit.iterations} iterations, "
              f"deviance {fit.deviance:.6f}")
    md = report.render_table2_markdown(fits.get(1), fits.get(2), ames.get(1), ames.get(2))
    csv_text = report.render_table2_csv(fits.get(1), fits.get(2), ames.get(1), ames.get(2))
    (out / "table2.md").write_text(md, encoding="utf-8", newline="\n")
    (out / "table2.csv").write_text(csv_text, encoding="utf-8", newline="\n")
    return fits, ames


def cmd_validate(args) -> int:
    corpus = _load(args.corpus)
    n_res, n_pub, n_edge = corpus.counts()
    print(f"corpus OK: {n_res} researchers, {n_pub} publications, {n_edge} citations")
    for warning in corpus.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    _analyze_outputs(_load(args.corpus), args, Path(args.out))
    return 0


def cmd_fit(args) -> int:
    _fit_outputs(_load(args.corpus), args, Path(args.out))
    return 0


def cmd_report(args) -> int:
    corpus = _load(args.corpus)
    out = Path(args.out)
    _analyze_outputs(corpus, args, out)
    _fit_outputs(corpus, args, out)
    return 0


def cmd_simulate(args) -> int:
    spec = default_generator_spec(seed=args.seed, n_researchers=args.n_researchers)
    corpus = generate_synthetic_corpus(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out / "corpus.json")
    print(f"generated corpus with seed {args.seed}: "
          f"{len(corpus.researchers)} researchers, {len(corpus.edges)} citations")
    _analyze_outputs(corpus, args, out)
    fits, _ = _fit_outputs(corpus, args, out)
    _write_recovery_summary(spec, fits, out)
    return 0


def _write_recovery_summary(spec, fits: dict[int, glm.FitResult], out: Path) -> None:
    import json

    fit = fits.get(1)
    if fit is None:
        return
    true_beta = list(spec.self_cite_logit_coefficients)
    ses = fit.se()
    rows = []
    for name, truth, estimate, se in zip(fit.column_names, true_beta, fit.beta, ses):
        z_dist = abs(float(estimate) - truth) / float(se) if se > 0 else None
        rows.append({
            "term": name,
            "true": truth,
            "estimate": float(f"{float(estimate):.12g}"),
            "robust_se": float(f"{float(se):.12g}"),
            "z_distance": None if z_dist is None else float(f"{z_dist:.12g}"),
            "covered_997": None if z_dist is None else z_dist <= 3.0,
        })
    doc = {"model": "Model1", "n_fitted": int(fit.fitted.size), "coefficients": rows}
    (out / "recovery.json").write_text(json.dumps(doc, indent=1) + "\n",
                                       encoding="utf-8", newline="\n")
    covered = sum(1 for r in rows if r["covered_997"])
    print(f"recovery: {covered}/{len(rows)} true coefficients inside 3 robust SEs")


_COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "fit": cmd_fit,
    "report": cmd_report,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        return _fail(2, "input-error", str(exc))
    except (CorpusFormatError, CorpusIntegrityError) as exc:
        return _fail(3, "corpus-error", str(exc))
    except (AnalysisError, GeneratorError) as exc:
        return _fail(4, "analysis-error", str(exc))
    except (CitescopeError, ValueError) as exc:
        return _fail(4, "analysis-error", str(exc))


if __name__ == "__main__":
    sys.exit(main())
