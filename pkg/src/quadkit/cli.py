"""Command-line entry point: one subcommand per pipeline stage, text-first
reports (``key=value`` lines), OBJ for every mesh. Exit codes: 0 success,
1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys

from . import assembly, goldberg, linkloss, metrics, tokenizer, tri2quad
from .errors import QuadkitError
from .matching import dump_graph
from .mesh import load_obj, normalize_unit_cube, save_obj
from .verify import VerifyConfig

USAGE_ERROR = 1
DATA_ERROR = 2


def _add_verify_flags(p: argparse.ArgumentParser):
    p.add_argument("--theta-min", type=float, default=30.0)
    p.add_argument("--theta-max", type=float, default=140.0)
    p.add_argument("--dihedral-max", type=float, default=45.0)
    p.add_argument("--tau-quad", type=float, default=2e-3)
    p.add_argument("--tau-tri", type=float, default=5e-3)
    p.add_argument("--no-convexity", action="store_true")
    p.add_argument("--no-dihedral", action="store_true")
    p.add_argument("--no-centroid", action="store_true")
    p.add_argument("--no-prefilter", action="store_true",
                   help="disable the whole geometric gate (ablation mode)")


def _verify_from_args(args, enable_centroid=True) -> VerifyConfig:
    if getattr(args, "no_prefilter", False):
        return VerifyConfig.permissive()
    return VerifyConfig(
        theta_min=args.theta_min,
        theta_max=args.theta_max,
        dihedral_max=args.dihedral_max,
        tau_quad=args.tau_quad,
        tau_tri=args.tau_tri,
        enable_convexity=not args.no_convexity,
        enable_dihedral=not args.no_dihedral,
        enable_centroid=enable_centroid and not args.no_centroid,
    )


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadkit",
        description="quad-dominant mesh processing toolkit")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=0,
                    help="0 = auto; outputs are identical for any value")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("--config", type=str, default=None,
                    help="key/value defaults file (flags override)")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("tri2quad", help="merge triangles into a quad-dominant mesh")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--mode", choices=("global", "greedy"), default="global")
    p.add_argument("--alpha1", type=float, default=0.8)
    p.add_argument("--alpha2", type=float, default=0.2)
    p.add_argument("--dump-graph", type=str, default=None)
    _add_verify_flags(p)

    p = sub.add_parser("anchors", help="extract vertices + face centroids from an OBJ")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--normalize", action="store_true",
                   help="normalize the mesh to [-1,1]^3 first")

    p = sub.add_parser("assemble", help="assemble faces from anchors")
    p.add_argument("--anchors", required=True)
    p.add_argument("--output", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--euclidean", action="store_true")
    src.add_argument("--features", type=str)
    src.add_argument("--oracle", type=str, metavar="GT_OBJ")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--pool-max", type=int, default=20)
    _add_verify_flags(p)

    p = sub.add_parser("tokenize", help="anchors -> token sequence")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--mode", choices=tokenizer.MODES, default="single_separate")
    p.add_argument("--per-axis", action="store_true")
    p.add_argument("--resolution", type=int, default=1024)

    p = sub.add_parser("detokenize", help="token sequence -> anchors")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--mode", choices=tokenizer.MODES, default="single_separate")
    p.add_argument("--per-axis", action="store_true")
    p.add_argument("--resolution", type=int, default=1024)

    p = sub.add_parser("metrics", help="evaluate predicted vs ground truth")
    p.add_argument("--gt", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report", type=str, default=None)
    for flag in ("cd", "hd", "iou", "qr", "oep", "efc", "efr"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--iou-resolution", type=int, default=48)
    p.add_argument("--tau", type=float, default=0.02)

    p = sub.add_parser("goldberg", help="generate a Goldberg polyhedron")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", type=str, default=None)
    p.add_argument("--validate", action="store_true")

    p = sub.add_parser("linkloss", help="triplet-loss numerics")
    lsub = p.add_subparsers(dest="linkloss_command")
    pe = lsub.add_parser("eval", help="evaluate the loss on a batch file")
    pe.add_argument("--batch", required=True,
                    help="feature file: anchor, positive, then negatives per anchor")
    pe.add_argument("--k", type=int, default=20)
    pe.add_argument("--margin", type=float, default=0.3)
    return ap


def _load_batch(path) -> linkloss.EmbeddingBatch:
    """Single-anchor batch in the assembly feature-file format: row 0 is the
    anchor embedding, row 1 the positive, every following row a negative."""
    vectors = assembly.load_features(path)
    if len(vectors) < 3:
        raise ValueError(
            f"{path}: batch needs anchor, positive and at least one negative")
    return linkloss.EmbeddingBatch(
        anchors=vectors[0:1],
        positives=vectors[1:2],
        negatives=[vectors[2:]])


def _cmd_tri2quad(args) -> int:
    mesh = load_obj(args.input)
    cfg = tri2quad.OperatorConfig(
        alpha1=args.alpha1, alpha2=args.alpha2,
        verify=_verify_from_args(args, enable_centroid=False),
        mode=args.mode)
    result = tri2quad.merge_detail(mesh, cfg)
    save_obj(result.mesh, args.output)
    if args.dump_graph:
        with open(args.dump_graph, "w", encoding="utf-8") as fh:
            fh.write(dump_graph(result.graph, result.matching))
    print(f"merged={result.merged_count} triangles_left={result.triangles_left} "
          f"weight={result.total_weight:.6f}")
    return 0


def _cmd_anchors(args) -> int:
    mesh = load_obj(args.input)
    if args.normalize:
        mesh = normalize_unit_cube(mesh)
    anchors = assembly.anchors_from_mesh(mesh)
    tokenizer.save_anchors(anchors, args.output)
    print(f"vertices={len(anchors.vertices)} centroids={len(anchors.centroids)}")
    return 0


def _cmd_assemble(args) -> int:
    anchors = tokenizer.load_anchors(args.anchors)
    if args.euclidean:
        fs = assembly.EuclideanFeatureSpace(anchors)
    elif args.features:
        fs = assembly.FileFeatureSpace(anchors,
                                       assembly.load_features(args.features))
    else:
        fs = assembly.IncidenceOracle(anchors, load_obj(args.oracle))
    cfg = assembly.AssemblyConfig(top_k=args.top_k, pool_max=args.pool_max,
                                  verify=_verify_from_args(args))
    result = assembly.assemble_mesh(anchors, fs, cfg)
    save_obj(result.to_polymesh(anchors), args.output)
    print(f"recon_rate={result.recon_rate:.4f} faces={len(result.faces)} "
          f"unresolved={len(result.unresolved)} recon_sec={result.seconds:.3f}")
    return 0


def _cmd_tokenize(args) -> int:
    cfg = tokenizer.TokenizerConfig(mode=args.mode, per_axis_vocab=args.per_axis,
                                    resolution=args.resolution)
    anchors = tokenizer.load_anchors(args.input)
    seq = tokenizer.encode(anchors, cfg)
    tokenizer.save_token_sequences([seq], args.output)
    print(f"tokens={len(seq)} vocab={tokenizer.vocab_size(cfg)}")
    return 0


def _cmd_detokenize(args) -> int:
    cfg = tokenizer.TokenizerConfig(mode=args.mode, per_axis_vocab=args.per_axis,
                                    resolution=args.resolution)
    seqs = tokenizer.load_token_sequences(args.input, cfg)
    if len(seqs) != 1:
        raise ValueError(f"expected exactly one sequence in {args.input}")
    anchors = tokenizer.decode(seqs[0], cfg)
    tokenizer.save_anchors(anchors, args.output)
    print(f"vertices={len(anchors.vertices)} centroids={len(anchors.centroids)}")
    return 0


def _cmd_metrics(args) -> int:
    gt = load_obj(args.gt)
    pred = load_obj(args.pred)
    wanted = [f for f in ("cd", "hd", "iou", "qr", "oep", "efc", "efr")
              if getattr(args, f)]
    if not wanted:
        wanted = ["cd", "hd", "qr"]
    lines = []
    if "cd" in wanted or "hd" in wanted:
        sa = metrics.sample_surface(gt, args.samples, seed=args.seed)
        sb = metrics.sample_surface(pred, args.samples, seed=args.seed + 1)
        if "cd" in wanted:
            lines.append(f"cd {metrics.chamfer(sa, sb)!r}")
        if "hd" in wanted:
            lines.append(f"hd {metrics.hausdorff(sa, sb)!r}")
    if "iou" in wanted:
        lines.append(f"iou {metrics.voxel_iou(gt, pred, args.iou_resolution)!r}")
    if "qr" in wanted:
        lines.append(f"qr {metrics.quad_ratio(pred)!r}")
    if "oep" in wanted:
        lines.append(f"oep {metrics.oep(pred)!r}")
    if "efc" in wanted:
        lines.append(f"efc {metrics.efc(pred)!r}")
    if "efr" in wanted:
        cfg = metrics.EfrConfig(tau=args.tau)
        lines.append(f"efr {metrics.efr(gt, pred, cfg)!r}")
    report = "\n".join(lines) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report)
    sys.stdout.write(report)
    return 0


def _cmd_goldberg(args) -> int:
    params = goldberg.GoldbergParams(args.m, args.n)
    mesh = goldberg.goldberg(params)
    if args.output:
        save_obj(mesh, args.output)
    if args.validate:
        rep = goldberg.validate_counts(mesh, params)
        v, e, f = rep.vertices[0], rep.edges[0], rep.faces[0]
        print(f"counts: V={v} E={e} F={f} {'OK' if rep.passed else 'FAIL'}")
        if not rep.passed:
            for line in rep.lines():
                print(line)
            return DATA_ERROR
    else:
        print(f"T={params.t} faces={mesh.num_faces}")
    return 0


def _cmd_linkloss(args) -> int:
    if args.linkloss_command != "eval":
        raise UsageError("linkloss requires the 'eval' subcommand")
    batch = _load_batch(args.batch)
    loss = linkloss.triplet_loss(batch, k=args.k, margin=args.margin)
    print(f"loss={loss!r}")
    return 0


class UsageError(Exception):
    pass


_COMMANDS = {
    "tri2quad": _cmd_tri2quad,
    "anchors": _cmd_anchors,
    "assemble": _cmd_assemble,
    "tokenize": _cmd_tokenize,
    "detokenize": _cmd_detokenize,
    "metrics": _cmd_metrics,
    "goldberg": _cmd_goldberg,
    "linkloss": _cmd_linkloss,
}


def _apply_config_defaults(ap: argparse.ArgumentParser, argv):
    """Load ``key value`` defaults from --config before parsing."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        return argv
    extra = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.replace("=", " ").partition(" ")
            flag = "--" + key.strip().replace("_", "-")
            value = value.strip()
            if value.lower() in ("true", "yes", "on"):
                extra.append(flag)
            elif value.lower() in ("false", "no", "off"):
                continue
            else:
                extra.extend([flag, value])
    # insert config-derived flags right after the subcommand so explicit
    # flags (later in argv) win
    return argv[:idx] + argv[idx + 2:] + extra


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = _build_parser()
    try:
        argv = _apply_config_defaults(ap, argv)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return DATA_ERROR
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage problems
        return 0 if exc.code == 0 else USAGE_ERROR
    if args.command is None:
        ap.print_usage(sys.stderr)
        return USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (QuadkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


def main():  # console_scripts hook
    raise SystemExit(run())


if __name__ == "__main__":
    main()
