"""Command-line entry point: ``geomfs select|label|evaluate|synth``.

Exit status is 0 on success, 2 on invalid input, 1 on internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dataio import DatasetError, SparseDataset, parse_dataset, write_boundaries, write_vectors
from .enumeration import enumerate_partitions
from .geometry import F6Mode
from .harness.metrics import ConfusionCounts, metrics
from .harness.svm import SVMParams
from .harness.synth import SynthSpec, augment_random_columns, generate_synthetic
from .harness.wrapper import compare, read_labels, wrapper_label, write_labels
from .linalg import RankTolerance
from .selector import PartitionResult, default_coefficients, read_coefficients, select

log = logging.getLogger("geomfs")

F6_CHOICES = {"class": F6Mode.CLASS_VS_CLASS, "table1": F6Mode.TABLE1_LITERAL}
CLASSIFIER_HEADER = (
    ["subset"]
    + [f"f{i}" for i in range(1, 7)]
    + [f"z{i}" for i in range(1, 7)]
    + ["lin_pred", "log_pred", "verdict"]
)


class UsageError(Exception):
    """Invalid configuration or input; maps to exit status 2."""


def _num(v: float) -> str:
    return f"{v:.10g}"


def _existing(path: str | None, what: str) -> Path:
    if path is None:
        raise UsageError(f"--{what} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {p}")
    return p


def load_dataset(args) -> SparseDataset:
    vectors = _existing(args.vectors, "vectors")
    boundaries = _existing(args.boundaries, "boundaries")
    with open(vectors, encoding="utf-8") as v, open(boundaries, encoding="utf-8") as b:
        return parse_dataset(v, b)


def _tolerance(args) -> RankTolerance:
    if args.tolerance is None:
        return RankTolerance(args.tolerance_policy)
    return RankTolerance(args.tolerance_policy, args.tolerance)


def _out_dir(args) -> Path:
    if args.out_dir is None:
        raise UsageError("--out-dir is required")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_partition(out: Path, pr: PartitionResult, layout_names) -> None:
    name = pr.partition.canonical_name

    def key(subset):
        return ",".join(n for n in layout_names if n in subset.selected)

    with open(out / f"classifier_{name}.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(CLASSIFIER_HEADER) + "\n")
        for r in pr.results:
            v = r.verdict
            cells = [key(r.subset), *map(_num, r.profile.f), *map(_num, r.profile.z),
                     _num(v.lin_pred), _num(v.log_pred), "optimal" if v.optimal else "suboptimal"]
            fh.write("\t".join(cells) + "\n")
    with open(out / f"selected_{name}.txt", "w", encoding="utf-8", newline="\n") as fh:
        for s in pr.selected:
            fh.write(key(s) + "\n")


def cmd_select(args) -> int:
    ds = load_dataset(args)
    coeffs = default_coefficients()
    if args.coefficients:
        with open(_existing(args.coefficients, "coefficients"), encoding="utf-8") as fh:
            coeffs = read_coefficients(fh)
    out = _out_dir(args)
    report = select(ds, coeffs, _tolerance(args), F6_CHOICES[args.f6_mode], args.threads)
    for pr in report.partitions:
        _write_partition(out, pr, report.layout_names)
    with open(out / "manifest.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("partition\tsubsets\tselected\n")
        for pr in report.partitions:
            fh.write(f"{pr.partition.canonical_name}\t{len(pr.results)}\t{len(pr.selected)}\n")
    if args.timing:
        # wall-clock values; kept out of the deterministic outputs above
        with open(out / "timing.tsv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("partition\tsubset\tcolumns\tseconds\n")
            for pr in report.partitions:
                for r in pr.results:
                    cols = sum(e - s for n, s, e in ds.layout.blocks if n in r.subset.selected)
                    fh.write(f"{pr.partition.canonical_name}\t{r.subset.key(ds.layout)}\t{cols}\t{_num(r.seconds)}\n")
                fh.write(f"{pr.partition.canonical_name}\t*\t{ds.n_columns}\t{_num(pr.seconds)}\n")
    total = sum(len(pr.selected) for pr in report.partitions)
    print(f"{len(report.partitions)} classifiers, {total} subsets selected -> {out}")
    return 0


def cmd_label(args) -> int:
    ds = load_dataset(args)
    out = _out_dir(args)
    params = SVMParams(C=args.svm_c, seed=args.seed)
    labels = []
    for part in enumerate_partitions(ds.labels):
        part_labels = wrapper_label(ds, part, params, args.split_seed)
        for lab in part_labels:
            log.info("%s\t%s\taccuracy=%.4f", lab.partition, lab.subset, lab.test_accuracy)
        labels.extend(part_labels)
    with open(out / "labels.tsv", "w", encoding="utf-8", newline="\n") as fh:
        write_labels(labels, fh)
    print(f"{len(labels)} labels -> {out / 'labels.tsv'}")
    return 0


def read_selection_dir(path: Path) -> dict[tuple[str, str], bool]:
    files = sorted(path.glob("classifier_*.tsv"))
    if not files:
        raise UsageError(f"no classifier_*.tsv files in {path}")
    verdicts = {}
    for f in files:
        name = f.stem[len("classifier_"):]
        with open(f, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if header != CLASSIFIER_HEADER:
                raise UsageError(f"{f}: unexpected header")
            for line in fh:
                cells = line.rstrip("\n").split("\t")
                verdicts[(name, cells[0])] = cells[-1] == "optimal"
    return verdicts


def cmd_evaluate(args) -> int:
    if args.selection_dir is None or not Path(args.selection_dir).is_dir():
        raise UsageError(f"selection directory not found: {args.selection_dir}")
    predicted = read_selection_dir(Path(args.selection_dir))
    with open(_existing(args.labels, "labels"), encoding="utf-8") as fh:
        truth = read_labels(fh)
    overall = compare(predicted, truth)
    rows = []
    for name in sorted({k[0] for k in predicted}):
        sub_pred = {k: v for k, v in predicted.items() if k[0] == name}
        rows.append((name, compare(sub_pred, [t for t in truth if t.partition == name])))
    rows.append(("overall", overall))
    out = _out_dir(args)
    lines = ["partition\ttp\tfp\ttn\tfn\taccuracy\tprecision\trecall"]
    for name, c in rows:
        s = metrics(c)
        lines.append(f"{name}\t{c.tp}\t{c.fp}\t{c.tn}\t{c.fn}\t{_num(s.accuracy)}\t{_num(s.precision)}\t{_num(s.recall)}")
    text = "\n".join(lines) + "\n"
    (out / "evaluation.tsv").write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def cmd_synth(args) -> int:
    out = _out_dir(args)
    if args.augment is not None:
        ds = augment_random_columns(load_dataset(args), args.augment, args.density, args.seed)
    else:
        try:
            blocks = tuple(int(x) for x in args.blocks.split(","))
        except ValueError:
            raise UsageError(f"--blocks must be comma-separated integers, got {args.blocks!r}") from None
        try:
            noise = tuple(float(x) for x in args.noise.split(","))
        except ValueError:
            raise UsageError(f"--noise must be a rate or comma-separated rates, got {args.noise!r}") from None
        ds = generate_synthetic(
            SynthSpec(
                n_classes=args.classes,
                block_columns=blocks,
                rows_per_class=args.rows_per_class,
                rank=args.rank,
                group_size=args.group_size,
                core_size=args.core_size,
                noise=noise[0] if len(noise) == 1 else noise,
                seed=args.seed,
            )
        )
    with open(out / "vectors.tsv", "w", encoding="utf-8", newline="\n") as fh:
        write_vectors(ds, fh)
    with open(out / "boundaries.tsv", "w", encoding="utf-8", newline="\n") as fh:
        write_boundaries(ds.layout, fh)
    print(f"{ds.n_rows} rows x {ds.n_columns} columns -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--vectors", help="sparse vector file")
    shared.add_argument("--boundaries", help="feature-type boundaries file")
    shared.add_argument("--out-dir", help="output directory (created if missing)")
    shared.add_argument("--tolerance", type=float, default=None,
                        help="rank tolerance epsilon (default: float64 machine epsilon)")
    shared.add_argument("--tolerance-policy", choices=["relative", "absolute"], default="relative")
    shared.add_argument("--f6-mode", choices=sorted(F6_CHOICES), default="class")
    shared.add_argument("--coefficients", help="coefficient override file")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--split-seed", type=int, default=0)
    shared.add_argument("--svm-c", type=float, default=1.0)
    shared.add_argument("--threads", type=int, default=1)
    shared.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="geomfs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", parents=[shared], help="score and select feature subsets")
    p.add_argument("--timing", action="store_true", help="also write timing.tsv (not deterministic)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("label", parents=[shared], help="wrapper-label every subset with a linear SVM")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("evaluate", parents=[shared], help="score selections against labels")
    p.add_argument("--selection-dir", help="output directory of a select run")
    p.add_argument("--labels", help="labels file from a label run")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", parents=[shared], help="generate or augment a dataset")
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--blocks", default="20,20", help="columns per feature type, comma-separated")
    p.add_argument("--rows-per-class", type=int, default=20)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--group-size", type=int, default=2)
    p.add_argument("--core-size", type=int, default=1)
    p.add_argument("--noise", default="0", help="bit-flip rate, or one rate per block")
    p.add_argument("--augment", type=float, default=None, metavar="FRACTION",
                   help="append random columns to --vectors/--boundaries instead of generating")
    p.add_argument("--density", type=float, default=0.5)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, DatasetError, ValueError, OSError) as exc:
        print(f"geomfs {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"geomfs {args.command}: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
