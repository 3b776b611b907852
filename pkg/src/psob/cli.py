"""Command-line entry points.

Machine-readable output goes to stdout, progress and logs to stderr.
Exit codes: 0 success, 1 domain error (bad data, failed validation),
2 usage error (unknown command, bad flags).
"""

from __future__ import annotations

import dataclasses
import functools
import json
import sys
from pathlib import Path
from typing import Sequence

import click
import numpy as np

from . import augment as aug
from . import dataset as ds
from . import evaluate as ev
from . import netprep
from . import service
from . import simulate as sim
from .attention import rasterize
from .errors import PsobError


def _domain_errors(fn):
    """Map domain and I/O failures onto exit code 1 with a clean message."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PsobError as exc:
            raise click.ClickException(str(exc)) from None
        except OSError as exc:
            raise click.ClickException(str(exc)) from None

    return wrapper


@click.group()
def main():
    """Polygon sketch-on-boundary toolkit."""


@main.command()
@click.argument("splits", nargs=-1, required=True, type=click.Path(exists=True))
@_domain_errors
def validate(splits: tuple[str, ...]):
    """Check split files for structural and referential integrity."""
    for path in splits:
        split = ds.load_split(path)
        click.echo(
            f"ok {path} split={split.name} images={len(split.images)} "
            f"annotations={len(split.annotations)} categories={len(split.categories)}"
        )


@main.command()
@click.argument("split_path", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="Emit the statistics as JSON.")
@_domain_errors
def stats(split_path: str, as_json: bool):
    """Summarize a split's sketch bookkeeping fields."""
    split = ds.load_split(split_path)
    st = ds.corpus_stats(split)
    if as_json:
        click.echo(ds.canonical_json(st.to_dict()), nl=False)
        return

    def fmt(value, unit=""):
        return "n/a" if value is None else f"{value:.1f}{unit}"

    rows = [
        ("annotations", str(st.annotation_count)),
        ("mean interaction time", fmt(st.mean_interaction_time, " s")),
        ("mean sketch time", fmt(st.mean_sketch_time, " s")),
        ("mean curvature points", fmt(st.mean_curvature_count)),
        ("mean perimeter", fmt(st.mean_perimeter, " px")),
        ("mean sketch/perimeter", fmt(st.mean_coverage_percent, " %")),
        ("mean strokes per object", fmt(st.mean_stroke_count)),
    ]
    width = max(len(label) for label, _ in rows)
    for label, value in rows:
        click.echo(f"{label:<{width}}  {value}")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--coverage", default=0.2, show_default=True, help="Target sketch/perimeter ratio.")
@click.option("--jitter", default=0.0, show_default=True, help="Perpendicular jitter sigma (px).")
@click.option("--speed", default=sim.DEFAULT_SKETCH_SPEED, show_default=True, help="Drawing speed (px/s).")
@click.option("--latency", default=sim.DEFAULT_LATENCY, show_default=True, help="Idle time per object (s).")
@click.option("--seed", default=0, show_default=True)
@_domain_errors
def simulate(in_path, out_path, coverage, jitter, speed, latency, seed):
    """Replace each annotation's strokes with simulated boundary sketches."""
    split = ds.load_split(in_path)
    fallbacks = 0
    annotations = []
    for ann in split.annotations:
        strokes = []
        for ring_index, ring in enumerate(ann.rings):
            child = np.random.SeedSequence(entropy=seed, spawn_key=(ann.id, ring_index))
            config = sim.SimConfig(
                target_coverage=coverage,
                jitter_sigma=jitter,
                seed=int(child.generate_state(1)[0]),
            )
            result = sim.simulate_sketch(ring, config)
            fallbacks += result.used_fallback
            strokes.extend(result.strokes)
        timed = sim.simulate_timing(strokes, speed=speed, latency=latency)
        annotations.append(
            dataclasses.replace(
                ann,
                strokes=timed.strokes,
                sketch_time=timed.sketch_time,
                interaction_time=timed.interaction_time,
            )
        )
    out_split = dataclasses.replace(split, annotations=tuple(annotations))
    ds.save_split(out_split, out_path)
    if fallbacks:
        click.echo(f"single-arc fallback used for {fallbacks} ring(s)", err=True)
    click.echo(f"wrote {out_path}", err=True)


def _load_aug_config(config_path: str | None, seed: int | None) -> aug.AugConfig:
    fields = {}
    if config_path is not None:
        with open(config_path, encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {"flip_prob", "jitter_range", "target_size", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise click.ClickException(f"unknown augmentation config keys: {sorted(unknown)}")
        fields.update(raw)
    if seed is not None:
        fields["seed"] = seed
    if "jitter_range" in fields:
        fields["jitter_range"] = tuple(fields["jitter_range"])
    if "target_size" in fields:
        fields["target_size"] = tuple(fields["target_size"])
    return aug.AugConfig(**fields)


@main.command("augment")
@click.option("--config", "config_path", type=click.Path(exists=True), help="AugConfig JSON file.")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--image-dir", type=click.Path(exists=True), help="Directory with the image files.")
@click.option("--seed", type=int, default=None, help="Overrides the config seed.")
@_domain_errors
def augment_cmd(config_path, in_path, out_path, image_dir, seed):
    """Run flip -> scale jitter -> fixed-size crop over a split."""
    from PIL import Image

    split = ds.load_split(in_path)
    config = _load_aug_config(config_path, seed)
    tw, th = config.target_size

    images = []
    annotations = []
    for info in split.images:
        anns = [a for a in split.annotations if a.image_id == info.id]
        if image_dir is not None and (Path(image_dir) / info.file_name).exists():
            with Image.open(Path(image_dir) / info.file_name) as im:
                raster = np.asarray(im.convert("RGB"), dtype=np.uint8)
            if raster.shape[:2] != (info.height, info.width):
                raise click.ClickException(
                    f"{info.file_name}: file is {raster.shape[1]}x{raster.shape[0]} "
                    f"but the split says {info.width}x{info.height}"
                )
        else:
            raster = np.zeros((info.height, info.width, 3), dtype=np.uint8)
        all_strokes = [s for a in anns for s in a.strokes]
        sample = aug.Sample(
            image=raster,
            attention=rasterize(all_strokes, info.width, info.height),
            objects=tuple(
                aug.SampleObject(
                    id=a.id, category_id=a.category_id, rings=a.rings, strokes=a.strokes
                )
                for a in anns
            ),
        )
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=config.seed, spawn_key=(info.id,))
        )
        out = aug.augment_pipeline(sample, config, rng)
        images.append(dataclasses.replace(info, width=tw, height=th))
        by_id = {a.id: a for a in anns}
        for obj in out.objects:
            src = by_id[obj.id]
            annotations.append(
                dataclasses.replace(
                    src,
                    bbox=ds.bbox_of_rings(obj.rings),
                    rings=obj.rings,
                    strokes=obj.strokes,
                )
            )
    out_split = dataclasses.replace(
        split, images=tuple(images), annotations=tuple(annotations)
    )
    ds.save_split(out_split, out_path)
    click.echo(f"wrote {out_path}", err=True)


@main.command("rasterize")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--thickness", default=1, show_default=True)
@_domain_errors
def rasterize_cmd(in_path, out_dir, thickness):
    """Write one attention-map PNG per image in a split."""
    split = ds.load_split(in_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for info in split.images:
        strokes = [s for a in split.annotations if a.image_id == info.id for s in a.strokes]
        amap = rasterize(strokes, info.width, info.height, thickness=thickness)
        path = out / f"{info.id}_attn.png"
        amap.save_png(path)
        click.echo(str(path))


@main.command("adapt-weights")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True)
@_domain_errors
def adapt_weights(in_path, out_path, seed):
    """Extend 3-channel first-conv weights to 4 channels."""
    weights3 = netprep.read_weights(in_path)
    weights4 = netprep.adapt_first_conv(weights3, seed)
    netprep.write_weights(out_path, weights4)
    click.echo(f"wrote {out_path} dims={weights4.shape}", err=True)


@main.command("evaluate")
@click.option("--gt", "gt_path", required=True, type=click.Path(exists=True))
@click.option("--dt", "dt_path", required=True, type=click.Path(exists=True))
@click.option("--table", is_flag=True, help="Print an aligned text table instead of JSON.")
@_domain_errors
def evaluate_cmd(gt_path, dt_path, table):
    """Score detections against a ground-truth split."""
    split = ds.load_split(gt_path)
    detections = ev.load_detections(dt_path)
    report = ev.coco_ap(split, detections)
    if table:
        click.echo(report.format_table())
    else:
        click.echo(ds.canonical_json(report.to_dict()), nl=False)


@main.command()
@click.option("--bind", default="127.0.0.1:8431", show_default=True, help="host:port to listen on.")
@click.option(
    "--data-root",
    envvar="PSOB_DATA_ROOT",
    type=click.Path(),
    default=None,
    help="Directory for session snapshots (env: PSOB_DATA_ROOT).",
)
@click.option("--ui-dir", type=click.Path(), default=None, help="Static UI bundle to serve at /ui.")
@_domain_errors
def serve(bind, data_root, ui_dir):
    """Run the local annotation service until interrupted."""
    service.serve(bind_address=bind, data_root=data_root, ui_dir=ui_dir)


def cli_dispatch(argv: Sequence[str]) -> int:
    """Run the CLI programmatically and return its exit code."""
    try:
        main.main(args=list(argv), prog_name="psob", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(exc.format_message(), err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_help(), err=True)
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(cli_dispatch(sys.argv[1:]))
