"""Command-line driver for the batch pipeline and the HTTP service.

Exit codes: 0 success, 1 usage error, 2 data/config error.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import pipeline, search as search_mod
from .config import PipelineConfig, load_config
from .errors import QuakescopeError
from .ingest import load_ensemble, normalize_channels
from .synth import EnsembleTemplate, four_phase_demo, generate_ensemble

_CONFIG_KEYS = ("window_s", "hop_s", "window_fn", "f_max_hz", "m", "weighting",
                "K", "alpha", "eta", "max_iter", "tol", "seed", "ridge")


def config_options(fn):
    fn = click.option("--config", "-c", "config_path", type=click.Path(exists=True),
                      default=None, help="TOML or JSON config file.")(fn)
    for key in reversed(_CONFIG_KEYS):
        flag = "--" + key.replace("_", "-")
        fn = click.option(flag, key, default=None, type=float if key not in
                          ("window_fn", "weighting") else str,
                          help=f"Override config key {key}.")(fn)
    return fn


def build_config(config_path, **overrides) -> PipelineConfig:
    cfg = load_config(config_path) if config_path else PipelineConfig()
    cleaned = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ("m", "K", "max_iter", "seed"):
            value = int(value)
        cleaned[key] = value
    return cfg.replace(**cleaned) if cleaned else cfg


@click.group()
def cli():
    """Analytics pipeline for ensembles of building seismic response records."""


@cli.command()
@config_options
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.option("--count", default=50, show_default=True, help="Records to generate.")
@click.option("--four-phase", is_flag=True,
              help="Emit the single 4-phase reference record instead of an ensemble.")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]),
              show_default=True)
@click.option("--template", "template_path", type=click.Path(exists=True), default=None,
              help="JSON file with ensemble generator settings.")
def synth(config_path, out, count, four_phase, fmt, template_path, **overrides):
    """Generate a synthetic ensemble (or the 4-phase demo record)."""
    cfg = build_config(config_path, **overrides)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if four_phase:
        records = [four_phase_demo()]
    else:
        template = (EnsembleTemplate.from_json(Path(template_path).read_text())
                    if template_path else EnsembleTemplate())
        records = generate_ensemble(count=count, seed=cfg.seed, template=template)
    from .ingest import save_simulation
    for record in records:
        save_simulation(record, out_dir / f"{record.id}.{fmt}")
    click.echo(f"wrote {len(records)} record(s) to {out_dir}")


@cli.command()
@click.option("--records", "records_dir", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--normalize/--no-normalize", default=True, show_default=True)
def ingest(records_dir, out, normalize):
    """Validate raw record files and write canonical normalized JSON."""
    records = pipeline.ingest_records(records_dir, out, normalize=normalize)
    click.echo(f"ingested {len(records)} record(s) into {out}")


def _load_normalized(records_dir):
    records = []
    for record in load_ensemble(records_dir):
        if not record.normalized:
            record = normalize_channels(record)
        records.append(record)
    return records


@cli.command()
@config_options
@click.option("--records", "records_dir", required=True, type=click.Path(exists=True))
@click.option("--artifacts", required=True, type=click.Path())
def fit(config_path, records_dir, artifacts, **overrides):
    """Run STFT + topic fitting over an ensemble and persist the model."""
    cfg = build_config(config_path, **overrides)
    records = _load_normalized(records_dir)
    session = pipeline.run_pipeline(records, cfg)
    pipeline.save_model_artifacts(session, Path(artifacts))
    click.echo(
        f"fit K={session.model.K} topics over {len(records)} record(s) in "
        f"{session.model.n_iters_run} iterations (bound {session.model.final_bound:.6g})"
    )


@cli.command()
@click.option("--artifacts", required=True, type=click.Path(exists=True))
def topics(artifacts):
    """Write per-record topic time series under the artifacts directory."""
    session = pipeline.load_session(artifacts)
    pipeline.save_topic_series(session, Path(artifacts))
    click.echo(f"wrote topic series for {len(session.record_order)} record(s)")


@cli.command()
@click.option("--artifacts", required=True, type=click.Path(exists=True))
def matrix(artifacts):
    """Compute and persist the similarity matrix with its display order."""
    session = pipeline.load_session(artifacts)
    pipeline.save_matrix(session, Path(artifacts))
    click.echo(f"wrote {len(session.record_order)}^2 similarity matrix")


@cli.command()
@click.option("--artifacts", required=True, type=click.Path(exists=True))
@click.option("--record", "record_id", required=True)
@click.option("--start", type=int, required=True, help="Query start window index.")
@click.option("--length", type=int, required=True, help="Query length in windows.")
@click.option("--topics", "topic_mask", default=None,
              help="Comma-separated topic indices; all topics when omitted.")
@click.option("--top-n", default=10, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Write JSON here.")
def search(artifacts, record_id, start, length, topic_mask, top_n, out):
    """Find the most similar equal-length segments across the collection."""
    session = pipeline.load_session(artifacts)
    mask = None
    if topic_mask:
        mask = tuple(int(t) for t in topic_mask.split(","))
    query = search_mod.QuerySelection(record_id, start, length, mask)
    collection = [session.series[rid] for rid in session.record_order]
    hits = search_mod.search_collection(query, collection, top_n=top_n)
    hop = session.config.hop_s
    payload = {
        "query": {"record_id": record_id, "start_index": start, "length": length,
                  "topic_mask": None if mask is None else list(mask),
                  "start_s": start * hop, "end_s": (start + length) * hop},
        "hits": [
            {"record_id": h.record_id, "offset": h.offset, "length": h.length,
             "distance": h.distance, "start_s": h.offset * hop,
             "end_s": (h.offset + h.length) * hop}
            for h in hits
        ],
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text)


@cli.command("bench-search")
@click.option("-n", "n_values", multiple=True, type=int,
              help="Target lengths; repeatable. Default 1024..16384 doublings.")
@click.option("--m", default=5, show_default=True, help="Topic rows.")
@click.option("--repeats", default=3, show_default=True)
@click.option("--collection", "collection_size", default=0, show_default=True,
              help="Also time a sweep over this many targets per n.")
@click.option("--out", type=click.Path(), default=None, help="CSV path (default stdout).")
def bench_search(n_values, m, repeats, collection_size, out):
    """Time the naive vs FFT sliding-distance paths; emits CSV rows."""
    ns = list(n_values) or [1024 * (2 ** i) for i in range(5)]
    rows = search_mod.benchmark_rows(ns, m=m, repeats=repeats,
                                     collection_size=collection_size)
    target = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(target, fieldnames=["mode", "n", "naive_ms", "fft_ms"])
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if out:
            target.close()


@cli.command()
@click.option("--artifacts", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--static", "static_dir", type=click.Path(), default=None,
              help="Directory with the built UI bundle to serve at /.")
def serve(artifacts, host, port, static_dir):
    """Serve the read-only JSON API (and optionally the UI) over HTTP."""
    import uvicorn

    from .service import create_app

    session = pipeline.load_session(artifacts)
    app = create_app(session, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


@cli.command()
@click.option("--artifacts", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--width", default=1024, show_default=True,
              help="Downsampling width for line/heatmap payloads.")
def export(artifacts, out, width):
    """Write every API payload as static JSON for offline UI use."""
    from fastapi.testclient import TestClient

    from .service import create_app

    session = pipeline.load_session(artifacts)
    client = TestClient(create_app(session))
    out_dir = Path(out)
    (out_dir / "topic_series").mkdir(parents=True, exist_ok=True)
    (out_dir / "spectra").mkdir(exist_ok=True)
    (out_dir / "details").mkdir(exist_ok=True)

    def dump(path: Path, url: str):
        resp = client.get(url)
        resp.raise_for_status()
        path.write_text(json.dumps(resp.json(), sort_keys=True, separators=(",", ":")))

    dump(out_dir / "records.json", "/api/records")
    dump(out_dir / "config.json", "/api/config")
    if session.matrix is not None:
        dump(out_dir / "matrix.json", "/api/matrix")
    for k in range(session.model.K):
        dump(out_dir / "spectra" / f"topic_{k}.json", f"/api/topics/{k}/spectrum")
    attributes = sorted({ch.attribute.value
                         for rec in session.records.values()
                         for ch in rec.channels})
    for rid in session.record_order:
        dump(out_dir / "topic_series" / f"{rid}.json",
             f"/api/records/{rid}/topic-series")
        dump(out_dir / "details" / f"{rid}_ground_accel.json",
             f"/api/records/{rid}/ground-accel?width={width}")
        for attr in attributes:
            dump(out_dir / "details" / f"{rid}_heatmap_{attr}.json",
                 f"/api/records/{rid}/heatmap?attribute={attr}&width={width}")
    click.echo(f"exported offline payloads to {out_dir}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return 0 if exc.exit_code == 0 else 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except QuakescopeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except FileNotFoundError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
