"""Command-line entry point for every batch workflow.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
A key-value config file (INI, ``[tetunsearch]`` section) can pin lexicon
paths, BM25 parameters, and depths; command-line flags override it.
"""

from __future__ import annotations

import configparser
import json
import sys
from pathlib import Path

import click

from . import __version__
from .analysis import PRESET_NAMES, preset
from .collection import (
    adjudicate,
    candidates_from_json,
    candidates_to_json,
    export_qrels,
    journal_read,
    pool_from_json,
    pool_to_json,
    pool_runs,
    select_judging_candidates,
)
from .corpus import characterize, load_corpus, load_topics, render_stats, save_corpus, stats_to_json
from .errors import DataError
from .evaluation import (
    evaluate,
    matrix_to_json,
    render_matrix,
    render_report,
    report_from_json,
    report_to_json,
)
from .index import FIELD_SCHEMES, build_index, load_index, save_index
from .lexicons import bundled_topics_path, load_lexicons
from .retrieval import B_DEFAULT, DEFAULT_DEPTH, K1_DEFAULT, StrategyGrid, run_grid, search, write_grid_runs
from .synthetic import DEFAULT_DOC_COUNT, DEFAULT_SEED, generate_corpus
from .trec import read_qrels, read_run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_CONFIG_KEYS = ("lexicons", "k1", "b", "depth", "per_query", "host", "port")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except (configparser.Error, OSError) as e:
        raise DataError(f"config file {path}: {e}") from None
    if not parser.has_section("tetunsearch"):
        raise DataError(f"config file {path}: missing [tetunsearch] section")
    section = parser["tetunsearch"]
    unknown = set(section) - set(_CONFIG_KEYS)
    if unknown:
        raise DataError(f"config file {path}: unknown keys {sorted(unknown)}")
    return dict(section)


def _cfg(ctx: click.Context, key: str, given, default, convert=lambda v: v):
    """Resolve an option: explicit flag > config file > default."""
    if given is not None:
        return given
    value = ctx.obj.get(key)
    if value is not None:
        try:
            return convert(value)
        except ValueError:
            raise DataError(f"config key {key!r}: bad value {value!r}") from None
    return default


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True))


def _write_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n", "utf-8")


existing_file = click.Path(exists=True, dir_okay=False)
existing_dir = click.Path(exists=True, file_okay=False)


@click.group()
@click.version_option(version=__version__)
@click.option("--config", "config_path", type=existing_file, default=None,
              help="INI config file with a [tetunsearch] section.")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None):
    """Tetun retrieval engine and TREC-style evaluation toolkit."""
    ctx.obj = _load_config(config_path)


lexicons_opt = click.option("--lexicons", "lexicon_dir", type=existing_dir, default=None,
                            help="Directory of lexicon files (bundled set if omitted).")
preset_opt = click.option("--preset", "preset_name", type=click.Choice(PRESET_NAMES),
                          default="default", show_default=True)
json_opt = click.option("--json", "as_json", is_flag=True, help="Machine-readable JSON output.")
k1_opt = click.option("--k1", type=float, default=None, help=f"BM25 k1 [default: {K1_DEFAULT}].")
b_opt = click.option("--b", type=float, default=None, help=f"BM25 b [default: {B_DEFAULT}].")


@cli.command("gen-corpus")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--docs", type=int, default=DEFAULT_DOC_COUNT, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--topics-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the bundled 5-topic set here.")
def gen_corpus(out_path: str, docs: int, seed: int, topics_out: str | None):
    """Write a deterministic synthetic news corpus (JSONL)."""
    corpus = generate_corpus(n_docs=docs, seed=seed)
    save_corpus(corpus, out_path)
    click.echo(f"wrote {len(corpus)} documents to {out_path}")
    if topics_out:
        Path(topics_out).write_bytes(bundled_topics_path().read_bytes())
        click.echo(f"wrote bundled topics to {topics_out}")


@cli.command("ingest-check")
@click.option("--corpus", "corpus_path", type=existing_file, required=True)
@click.option("--topics", "topics_path", type=existing_file, default=None)
@preset_opt
@lexicons_opt
@click.option("--top-n", type=int, default=20, show_default=True)
@json_opt
@click.pass_context
def ingest_check(ctx, corpus_path, topics_path, preset_name, lexicon_dir, top_n, as_json):
    """Validate a corpus (and optional topics) and print its statistics."""
    lexicon_dir = _cfg(ctx, "lexicons", lexicon_dir, None)
    corpus = load_corpus(corpus_path)
    lexicons = load_lexicons(lexicon_dir)
    stats = characterize(corpus, preset(preset_name), lexicons, top_n=top_n)
    payload = stats_to_json(stats)
    if topics_path:
        topics = load_topics(topics_path)
        payload["topic_count"] = len(topics)
    if as_json:
        _echo_json(payload)
    else:
        click.echo(render_stats(stats), nl=False)
        if topics_path:
            click.echo(f"topics             {payload['topic_count']}")


@cli.command("index")
@click.option("--corpus", "corpus_path", type=existing_file, required=True)
@click.option("--scheme", type=click.Choice(FIELD_SCHEMES), default="T+L+C", show_default=True)
@preset_opt
@lexicons_opt
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def index_cmd(ctx, corpus_path, scheme, preset_name, lexicon_dir, out_path):
    """Build an inverted index for one field scheme and analyzer preset."""
    lexicon_dir = _cfg(ctx, "lexicons", lexicon_dir, None)
    corpus = load_corpus(corpus_path)
    lexicons = load_lexicons(lexicon_dir)
    idx = build_index(corpus, scheme, preset(preset_name), lexicons)
    save_index(idx, out_path)
    click.echo(
        f"indexed {idx.doc_count} documents ({len(idx.postings)} terms, "
        f"scheme {scheme}, preset {preset_name}) -> {out_path}"
    )


@cli.command("search")
@click.option("--index", "index_path", type=existing_file, required=True)
@click.option("--query", "query_text", required=True)
@click.option("--k", type=int, default=None, help="Result depth [default: 10].")
@lexicons_opt
@k1_opt
@b_opt
@json_opt
@click.pass_context
def search_cmd(ctx, index_path, query_text, k, lexicon_dir, k1, b, as_json):
    """Rank documents for one query against a saved index."""
    from .corpus import Query

    lexicon_dir = _cfg(ctx, "lexicons", lexicon_dir, None)
    k = _cfg(ctx, "depth", k, 10, int)
    k1 = _cfg(ctx, "k1", k1, K1_DEFAULT, float)
    b = _cfg(ctx, "b", b, B_DEFAULT, float)
    idx = load_index(index_path)
    lexicons = load_lexicons(lexicon_dir)
    result = search(idx, Query(qid="q0", text=query_text), idx.config, lexicons, k=k, k1=k1, b=b)
    if as_json:
        _echo_json(
            {
                "empty_query": result.empty_query,
                "hits": [{"docid": e.docid, "rank": e.rank, "score": e.score} for e in result.entries],
            }
        )
        return
    if result.empty_query:
        click.echo("empty query: no terms left after analysis")
        return
    if not result.entries:
        click.echo("no matching documents")
        return
    for e in result.entries:
        click.echo(f"{e.rank:>3}  {e.docid}  {e.score:.6f}")


@cli.command("run-grid")
@click.option("--corpus", "corpus_path", type=existing_file, required=True)
@click.option("--topics", "topics_path", type=existing_file, required=True)
@click.option("--depth", type=int, default=None, help=f"Per-topic depth [default: {DEFAULT_DEPTH}].")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--presets", "preset_names", default=",".join(PRESET_NAMES), show_default=True,
              help="Comma-separated analyzer presets.")
@click.option("--schemes", default=",".join(FIELD_SCHEMES), show_default=True,
              help="Comma-separated field schemes.")
@lexicons_opt
@k1_opt
@b_opt
@click.pass_context
def run_grid_cmd(ctx, corpus_path, topics_path, depth, out_dir, preset_names, schemes, lexicon_dir, k1, b):
    """Execute the preset-by-scheme strategy grid; one TREC run file each."""
    lexicon_dir = _cfg(ctx, "lexicons", lexicon_dir, None)
    depth = _cfg(ctx, "depth", depth, DEFAULT_DEPTH, int)
    k1 = _cfg(ctx, "k1", k1, K1_DEFAULT, float)
    b = _cfg(ctx, "b", b, B_DEFAULT, float)
    corpus = load_corpus(corpus_path)
    topics = load_topics(topics_path)
    lexicons = load_lexicons(lexicon_dir)
    grid = StrategyGrid(
        presets=tuple(p.strip() for p in preset_names.split(",") if p.strip()),
        schemes=tuple(s.strip() for s in schemes.split(",") if s.strip()),
        depth=depth,
    )
    runs = run_grid(corpus, topics, grid, lexicons, k1=k1, b=b)
    paths = write_grid_runs(runs, out_dir)
    for run, path in zip(runs, paths):
        note = f" (empty queries: {', '.join(run.empty_query_qids)})" if run.empty_query_qids else ""
        click.echo(f"{path}  {len(run.entries)} entries{note}")
    click.echo(f"{len(paths)} run files -> {out_dir}")


@cli.command("pool")
@click.argument("run_files", type=existing_file, nargs=-1)
@click.option("--runs-dir", type=existing_dir, default=None, help="Pool every *.run file in a directory.")
@click.option("--depth", type=int, default=None, help=f"Pooling depth [default: {DEFAULT_DEPTH}].")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@json_opt
@click.pass_context
def pool_cmd(ctx, run_files, runs_dir, depth, out_path, as_json):
    """Merge the top-depth documents of several runs per topic."""
    depth = _cfg(ctx, "depth", depth, DEFAULT_DEPTH, int)
    paths = [Path(p) for p in run_files]
    if runs_dir:
        paths.extend(sorted(Path(runs_dir).glob("*.run")))
    if not paths:
        raise click.UsageError("no run files given (pass files or --runs-dir)")
    runs = [read_run(p) for p in paths]
    pool = pool_runs(runs, depth=depth)
    _write_json(pool_to_json(pool), out_path)
    summary = {
        "runs": len(paths),
        "depth": depth,
        "pre_dedup_total": pool.pre_dedup_total,
        "post_dedup_total": pool.post_dedup_total,
        "pre_dedup_per_topic": pool.pre_dedup_per_topic,
        "warnings": pool.warnings,
    }
    if as_json:
        _echo_json(summary)
    else:
        click.echo(
            f"pooled {len(paths)} runs at depth {depth}: "
            f"{pool.pre_dedup_total} entries, {pool.post_dedup_total} unique -> {out_path}"
        )
        for w in pool.warnings:
            click.echo(f"warning: {w}", err=True)


@cli.command("select-candidates")
@click.option("--pool", "pool_path", type=existing_file, required=True)
@click.option("--per-query", type=int, default=None, help="Candidates per topic [default: 10].")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@json_opt
@click.pass_context
def select_candidates_cmd(ctx, pool_path, per_query, out_path, as_json):
    """Pick the top pooled documents per topic for human judging."""
    per_query = _cfg(ctx, "per_query", per_query, 10, int)
    pool = pool_from_json(json.loads(Path(pool_path).read_text("utf-8")))
    candidates = select_judging_candidates(pool, per_query=per_query)
    _write_json(candidates_to_json(candidates), out_path)
    payload = {
        "pairs": len(candidates.pairs()),
        "per_query": per_query,
        "flagged": list(candidates.flagged),
    }
    if as_json:
        _echo_json(payload)
    else:
        click.echo(f"selected {payload['pairs']} (topic, document) pairs -> {out_path}")
        if candidates.flagged:
            click.echo(f"flagged (pool smaller than {per_query}): {', '.join(candidates.flagged)}", err=True)


@cli.command("vote")
@click.option("--judgments", "journal_path", type=existing_file, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--grades-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the adjudicated grades as JSON.")
@json_opt
def vote_cmd(journal_path, out_path, grades_out, as_json):
    """Majority-vote a judgment journal into a TREC qrels file."""
    judgments = journal_read(journal_path)
    adjudicated = adjudicate(judgments)
    entries = export_qrels(adjudicated, out_path)
    if grades_out:
        _write_json(
            {"grades": [{"qid": q, "docid": d, "grade": g} for (q, d), g in sorted(adjudicated.items())]},
            grades_out,
        )
    if as_json:
        _echo_json({"judgments": len(judgments), "pairs": len(entries), "qrels": str(out_path)})
    else:
        click.echo(f"adjudicated {len(entries)} pairs from {len(judgments)} judgments -> {out_path}")


@cli.command("export-qrels")
@click.option("--grades", "grades_path", type=existing_file, required=True,
              help='JSON: {"grades": [{"qid", "docid", "grade"}, ...]}.')
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def export_qrels_cmd(grades_path, out_path):
    """Write already-adjudicated grades as a TREC qrels file."""
    try:
        obj = json.loads(Path(grades_path).read_text("utf-8"))
        adjudicated = {(g["qid"], g["docid"]): int(g["grade"]) for g in obj["grades"]}
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataError(f"{grades_path}: malformed grades JSON ({e})") from None
    entries = export_qrels(adjudicated, out_path)
    click.echo(f"wrote {len(entries)} qrels lines -> {out_path}")


@cli.command("eval")
@click.option("--run", "run_path", type=existing_file, required=True)
@click.option("--qrels", "qrels_path", type=existing_file, required=True)
@click.option("--ndcg-depth", type=int, default=None, help="nDCG cutoff (full depth if omitted).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the report as JSON here.")
@json_opt
def eval_cmd(run_path, qrels_path, ndcg_depth, out_path, as_json):
    """Score one run against qrels (AP, P@5, P@10, nDCG per topic + means)."""
    run = read_run(run_path)
    qrels = read_qrels(qrels_path)
    report = evaluate(run, qrels, ndcg_depth=ndcg_depth)
    if out_path:
        _write_json(report_to_json(report), out_path)
    if as_json:
        _echo_json(report_to_json(report))
    else:
        click.echo(render_report(report), nl=False)


@cli.command("report")
@click.argument("report_files", type=existing_file, nargs=-1)
@click.option("--reports-dir", type=existing_dir, default=None,
              help="Read every *.json eval report in a directory.")
@click.option("--runs-dir", type=existing_dir, default=None,
              help="Evaluate every *.run file in a directory (requires --qrels).")
@click.option("--qrels", "qrels_path", type=existing_file, default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@json_opt
def report_cmd(report_files, reports_dir, runs_dir, qrels_path, out_path, as_json):
    """Render the preset-by-scheme matrix of mean MAP/P@5/P@10/nDCG."""
    reports = []
    for path in report_files:
        reports.append(report_from_json(json.loads(Path(path).read_text("utf-8"))))
    if reports_dir:
        for path in sorted(Path(reports_dir).glob("*.json")):
            reports.append(report_from_json(json.loads(path.read_text("utf-8"))))
    if runs_dir:
        if not qrels_path:
            raise click.UsageError("--runs-dir requires --qrels")
        qrels = read_qrels(qrels_path)
        for path in sorted(Path(runs_dir).glob("*.run")):
            reports.append(evaluate(read_run(path), qrels))
    if not reports:
        raise click.UsageError("no eval reports given (pass files, --reports-dir, or --runs-dir)")
    tags = {r.run_tag for r in reports}
    canonical = [f"{p}_{s}" for p in PRESET_NAMES for s in FIELD_SCHEMES]
    if tags == set(canonical):
        text = render_matrix(reports, presets=PRESET_NAMES, schemes=FIELD_SCHEMES)
    else:
        text = render_matrix(reports)
    if out_path:
        if as_json:
            _write_json(matrix_to_json(reports), out_path)
        else:
            Path(out_path).write_text(text, "utf-8")
    if as_json:
        _echo_json(matrix_to_json(reports))
    else:
        click.echo(text, nl=False)


@cli.command("serve")
@click.option("--corpus", "corpus_path", type=existing_file, required=True)
@click.option("--scheme", type=click.Choice(FIELD_SCHEMES), default="T+L+C", show_default=True)
@click.option("--default-preset", type=click.Choice(PRESET_NAMES), default="default", show_default=True)
@lexicons_opt
@click.option("--topics", "topics_path", type=existing_file, default=None,
              help="Topics file for the judging campaign.")
@click.option("--candidates", "candidates_path", type=existing_file, default=None,
              help="Candidates JSON from select-candidates.")
@click.option("--evaluators", default=None, help="Comma-separated evaluator ids.")
@click.option("--journal", "journal_path", type=click.Path(dir_okay=False), default=None,
              help="Judgment journal (created if missing, replayed if present).")
@click.option("--host", default=None, help="Bind address [default: 127.0.0.1].")
@click.option("--port", type=int, default=None, help="Port [default: 8080].")
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed CORS origin (repeatable) [default: *].")
@k1_opt
@b_opt
@click.pass_context
def serve_cmd(ctx, corpus_path, scheme, default_preset, lexicon_dir, topics_path,
              candidates_path, evaluators, journal_path, host, port, cors_origins, k1, b):
    """Serve search and the judging workflow over HTTP."""
    import uvicorn

    from .service import Campaign, build_state, create_app

    lexicon_dir = _cfg(ctx, "lexicons", lexicon_dir, None)
    host = _cfg(ctx, "host", host, "127.0.0.1")
    port = _cfg(ctx, "port", port, 8080, int)
    k1 = _cfg(ctx, "k1", k1, K1_DEFAULT, float)
    b = _cfg(ctx, "b", b, B_DEFAULT, float)
    corpus = load_corpus(corpus_path)
    lexicons = load_lexicons(lexicon_dir)
    campaign = None
    judging_bits = [topics_path, candidates_path, evaluators, journal_path]
    if any(judging_bits):
        if not all(judging_bits):
            raise click.UsageError("judging mode needs --topics, --candidates, --evaluators and --journal")
        topics = load_topics(topics_path)
        candidates = candidates_from_json(json.loads(Path(candidates_path).read_text("utf-8")))
        roster = [e.strip() for e in evaluators.split(",") if e.strip()]
        if not roster:
            raise click.UsageError("--evaluators must name at least one evaluator")
        campaign = Campaign(topics=topics, candidates=candidates.topics, evaluators=roster)
    state = build_state(
        corpus,
        lexicons,
        scheme=scheme,
        default_preset=default_preset,
        campaign=campaign,
        journal_path=journal_path,
        k1=k1,
        b=b,
        cors_origins=tuple(cors_origins) or ("*",),
    )
    app = create_app(state)
    click.echo(f"serving on http://{host}:{port} (scheme {scheme}, presets {', '.join(state.indexes)})")
    uvicorn.run(app, host=host, port=port, log_level="info")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as e:
        return int(e.exit_code)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_DATA
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except DataError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_DATA
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_DATA
    except Exception as e:  # pragma: no cover - defensive
        click.echo(f"internal error: {type(e).__name__}: {e}", err=True)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
