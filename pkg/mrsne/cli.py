"""Command-line interface: embed, evaluate, cdmca, plot and generate.

Exit codes: 0 on success, 1 on usage errors, 2 on data or numeric errors.
Diagnostics go to stderr; results go to files or key=value lines on stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from .affinity.relation import adaptive_betas
from .cdmca import cdmca_embed
from .const import (
    CCA_REGULARIZATION,
    DEFAULT_DIM,
    DEFAULT_ITERATIONS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_LR_DECAY_EVERY,
    DEFAULT_METRIC_KS,
    DEFAULT_MOMENTUM,
    DEFAULT_PERPLEXITY,
    DEFAULT_SEED,
    DEGENERATE_DOMAIN_HINT,
)
from .errors import ConfigError, MrsneError, PerplexityUnreachableError
from .evaluation import MetricKind, MetricScope, export_roc, metric_sweep, reconstruction_roc, variance_ratio
from .models import BetaWeights, EmbedConfig, Embedding, NormMode
from .pipeline import reduce_to_2d, run_mrsne
from .plot import ItemLabels, emit_scatter_svg
from .storage import (
    DatasetManifest,
    load_cross_graph,
    load_dataset,
    load_embedding,
    load_manifest,
    load_manifest_labels,
    save_cross_graph,
    save_embedding,
    save_labels,
    save_manifest,
    save_matrix,
)
from .synthetic import DEFAULT_NOISE, make_latent_clusters

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

_SCOPE_ALIASES = {"across": MetricScope.ACROSS, "within": MetricScope.WITHIN_IMAGE}


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ─── Argument converters ─────────────────────────────────────────────


def _betas(text: str) -> BetaWeights:
    try:
        return BetaWeights.parse(text)
    except ConfigError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from err
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"k values must be positive, got {text!r}")
    return values


def _kinds(text: str) -> list[MetricKind]:
    try:
        return [MetricKind(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"metrics must be I and/or II, got {text!r}") from err


def _scopes(text: str) -> list[MetricScope]:
    scopes = []
    for part in (p.strip() for p in text.split(",") if p.strip()):
        scope = _SCOPE_ALIASES.get(part)
        if scope is None:
            try:
                scope = MetricScope(part)
            except ValueError as err:
                raise argparse.ArgumentTypeError(f"scope must be across and/or within, got {part!r}") from err
        scopes.append(scope)
    return scopes


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from err
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


# ─── Parser ──────────────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    """Parser for every subcommand."""
    parser = _ArgumentParser(prog="mrsne", description="Multimodal relational stochastic neighbor embedding.")
    parser.add_argument(
        "--threads", type=_non_negative_int, default=0, help="worker cap for row-parallel stages (0 = auto)"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0, help="more log output (repeatable)")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    embed = commands.add_parser("embed", help="embed both domains into a shared space")
    embed.add_argument("--data", required=True, type=Path, help="dataset manifest (JSON)")
    embed.add_argument("--out", required=True, type=Path, help="embedding output file")
    embed.add_argument(
        "--perplexity",
        type=float,
        default=DEFAULT_PERPLEXITY,
        help=f"target perplexity per domain (default {DEFAULT_PERPLEXITY:g}, a common t-SNE convention)",
    )
    weights = embed.add_mutually_exclusive_group()
    weights.add_argument("--betas", type=_betas, help="block weights beta1,beta2,beta12 (default 1,1,1)")
    weights.add_argument(
        "--adaptive-betas", action="store_true", help="weights proportional to n1^2, n2^2 and n1*n2"
    )
    embed.add_argument(
        "--drop-domain2", action="store_true", help="with --adaptive-betas, set beta2 to 0 (degenerate domain 2)"
    )
    embed.add_argument("--norm-mode", choices=[str(m) for m in NormMode], default=str(NormMode.UNNORM))
    embed.add_argument("--iters", type=_non_negative_int, default=DEFAULT_ITERATIONS)
    embed.add_argument("--lr", type=float, default=DEFAULT_LEARNING_RATE)
    embed.add_argument("--momentum", type=float, default=DEFAULT_MOMENTUM)
    embed.add_argument("--lr-decay-every", type=int, default=DEFAULT_LR_DECAY_EVERY)
    embed.add_argument("--dim", type=int, default=DEFAULT_DIM)
    embed.add_argument("--seed", type=_non_negative_int, default=DEFAULT_SEED)
    embed.add_argument("--kl-trace", type=Path, help="write 'iteration kl' lines here")
    embed.set_defaults(handler=_cmd_embed)

    evaluate = commands.add_parser("evaluate", help="score an embedding against the cross graph")
    evaluate.add_argument("--data", required=True, type=Path, help="dataset manifest (JSON)")
    evaluate.add_argument("--embedding", required=True, type=Path)
    evaluate.add_argument("--roc-out", type=Path, help="write the ROC curve as 'k fpr tpr' lines")
    evaluate.add_argument("--metrics", type=_kinds, help="neighborhood metrics to report: I,II")
    evaluate.add_argument(
        "--scope", type=_scopes, default=[MetricScope.ACROSS, MetricScope.WITHIN_IMAGE], help="across,within"
    )
    evaluate.add_argument("--k", type=_int_list, default=list(DEFAULT_METRIC_KS), help="neighborhood sizes")
    _add_reduce_arguments(evaluate)
    evaluate.set_defaults(handler=_cmd_evaluate)

    cdmca = commands.add_parser("cdmca", help="linear CDMCA baseline embedding")
    cdmca.add_argument("--data", required=True, type=Path, help="dataset manifest (JSON)")
    cdmca.add_argument("--out", required=True, type=Path, help="embedding output file")
    cdmca.add_argument("--dim", type=int, default=DEFAULT_DIM)
    cdmca.add_argument("--lambda", dest="lam", type=float, default=CCA_REGULARIZATION)
    cdmca.set_defaults(handler=_cmd_cdmca)

    plot = commands.add_parser("plot", help="SVG scatter plot of a 2-D embedding")
    plot.add_argument("--embedding", required=True, type=Path)
    plot.add_argument("--out", required=True, type=Path, help="SVG output file")
    plot.add_argument("--labels", type=Path, help="dataset manifest providing labels and the cross graph")
    plot.add_argument("--max-domain1", type=_non_negative_int, help="show a random subset of domain-1 items")
    plot.add_argument("--max-domain2", type=_non_negative_int, help="show only the most linked domain-2 items")
    _add_reduce_arguments(plot)
    plot.set_defaults(handler=_cmd_plot)

    generate = commands.add_parser("generate", help="write a synthetic latent-cluster dataset")
    generate.add_argument("--out-dir", required=True, type=Path)
    generate.add_argument("--n1", type=int, default=90)
    generate.add_argument("--n2", type=int, default=30)
    generate.add_argument("--d1", type=int, default=10)
    generate.add_argument("--d2", type=int, default=5)
    generate.add_argument("--clusters", type=int, default=3)
    generate.add_argument("--link-prob", type=float, default=0.3)
    generate.add_argument("--noise", type=float, default=DEFAULT_NOISE)
    generate.add_argument("--one-hot-domain2", action="store_true", help="identity features for domain 2")
    generate.add_argument("--seed", type=_non_negative_int, default=DEFAULT_SEED)
    generate.set_defaults(handler=_cmd_generate)

    return parser


def _add_reduce_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--reduce-2d", action="store_true", help="map K>2 embeddings to 2-D with t-SNE first")
    parser.add_argument("--perplexity", type=float, default=DEFAULT_PERPLEXITY, help="perplexity for --reduce-2d")
    parser.add_argument("--seed", type=_non_negative_int, default=DEFAULT_SEED)


def _maybe_reduce(embedding: Embedding, args: argparse.Namespace) -> Embedding:
    if args.reduce_2d:
        return reduce_to_2d(embedding, perplexity=args.perplexity, seed=args.seed, threads=args.threads)
    return embedding


# ─── Commands ────────────────────────────────────────────────────────


def _cmd_embed(args: argparse.Namespace) -> int:
    dataset = load_dataset(load_manifest(args.data))
    if args.adaptive_betas:
        betas = adaptive_betas(dataset.n1, dataset.n2, drop_domain2=args.drop_domain2)
    elif args.betas is not None:
        betas = args.betas
    elif dataset.has_domain2:
        betas = BetaWeights(1.0, 1.0, 1.0)
    else:
        betas = BetaWeights(1.0, 0.0, 0.0)

    config = EmbedConfig(
        perplexity=args.perplexity,
        dim=args.dim,
        betas=betas,
        norm_mode=NormMode(args.norm_mode),
        iterations=args.iters,
        learning_rate=args.lr,
        momentum=args.momentum,
        lr_decay_every=args.lr_decay_every,
        seed=args.seed,
        threads=args.threads,
    )
    result = run_mrsne(dataset, config)
    save_embedding(result.embedding, args.out)
    if args.kl_trace is not None:
        lines = [f"{t} {kl!r}" for t, kl in enumerate(result.kl_history.tolist(), start=1)]
        args.kl_trace.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    if result.final_kl is not None:
        print(f"final_kl={result.final_kl!r}")
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    dataset = load_dataset(load_manifest(args.data))
    embedding = _maybe_reduce(load_embedding(args.embedding), args)

    # Every value is computed before anything is printed or written
    curve = reconstruction_roc(embedding, dataset, threads=args.threads)
    ratio = variance_ratio(embedding)
    sweep: dict[tuple[MetricKind, MetricScope], dict[int, float]] = {}
    if args.metrics:
        sweep = metric_sweep(embedding, dataset, ks=args.k, kinds=args.metrics, scopes=args.scope, threads=args.threads)

    print(f"auc={curve.auc!r}")
    print(f"variance_ratio={ratio!r}")
    for (kind, scope), values in sweep.items():
        for k, value in values.items():
            print(f"metric_{kind}_{scope}_k{k}={value!r}")
    if args.roc_out is not None:
        export_roc(curve, args.roc_out)
    return EXIT_OK


def _cmd_cdmca(args: argparse.Namespace) -> int:
    dataset = load_dataset(load_manifest(args.data))
    embedding = cdmca_embed(dataset, args.dim, args.lam)
    save_embedding(embedding, args.out)
    return EXIT_OK


def _cmd_plot(args: argparse.Namespace) -> int:
    embedding = _maybe_reduce(load_embedding(args.embedding), args)
    labels = None
    graph = None
    if args.labels is not None:
        manifest = load_manifest(args.labels)
        labels = ItemLabels(*load_manifest_labels(manifest, embedding.n1, embedding.n2))
        if manifest.cross_graph is not None:
            graph = load_cross_graph(manifest.cross_graph, embedding.n1, embedding.n2)
    emit_scatter_svg(
        embedding,
        labels,
        args.out,
        max_domain1=args.max_domain1,
        max_domain2=args.max_domain2,
        cross_graph=graph,
        seed=args.seed,
    )
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    dataset, (ids1, ids2) = make_latent_clusters(
        n1=args.n1,
        n2=args.n2,
        d1=args.d1,
        d2=args.d2,
        clusters=args.clusters,
        link_prob=args.link_prob,
        noise=args.noise,
        seed=args.seed,
        one_hot_domain2=args.one_hot_domain2,
    )
    assert dataset.domain2 is not None and dataset.cross_graph is not None
    out_dir: Path = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = DatasetManifest(
        domain1=out_dir / "domain1.txt",
        domain2=out_dir / "domain2.txt",
        cross_graph=out_dir / "cross_graph.txt",
        labels1=out_dir / "labels1.txt",
        labels2=out_dir / "labels2.txt",
    )
    save_matrix(dataset.domain1, manifest.domain1)
    save_matrix(dataset.domain2, manifest.domain2)
    save_cross_graph(dataset.cross_graph, manifest.cross_graph)
    save_labels([f"item{i}-c{c}" for i, c in enumerate(ids1)], manifest.labels1)
    save_labels([f"tag{j}-c{c}" for j, c in enumerate(ids2)], manifest.labels2)
    manifest_path = out_dir / "manifest.json"
    save_manifest(manifest, manifest_path)
    print(f"manifest={manifest_path}")
    return EXIT_OK


# ─── Entry point ─────────────────────────────────────────────────────


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    if args.command == "embed" and args.drop_domain2 and not args.adaptive_betas:
        parser.print_usage(sys.stderr)
        print("mrsne: error: --drop-domain2 requires --adaptive-betas", file=sys.stderr)
        return EXIT_USAGE

    _configure_logging(args.verbose, args.quiet)
    try:
        return int(args.handler(args))
    except PerplexityUnreachableError as err:
        print(f"mrsne: error: {err}", file=sys.stderr)
        print(f"mrsne: hint: {DEGENERATE_DOMAIN_HINT}", file=sys.stderr)
    except (MrsneError, OSError) as err:
        print(f"mrsne: error: {err}", file=sys.stderr)
    except Exception:
        _LOGGER.exception("Unexpected failure in %s", args.command)
    return EXIT_FAILURE
