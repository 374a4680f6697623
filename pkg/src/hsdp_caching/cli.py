"""Command-line front end: construct, verify, optimize, simulate, compare.

Exit codes: 0 success, 1 verification or decoding failure, 2 infeasible or
degenerate parameters, 3 I/O errors. Output files go to ``--out`` or, when
that is absent, to ``$HSDP_CACHING_OUT_DIR`` (default: current directory).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .baselines import compare_sweep, write_csv
from .delivery import DEFAULT_SEED, ChannelMatrix, simulate
from .errors import DecodeFailure, ParameterError, RankDeficiency
from .hsdp import ConstructionParams, Hsdp, construct_hsdp, verify_hsdp
from .mapda import Mapda, build_mapda, scheme_params, verify_mapda
from .params import DesignPoint, closed_form_gap, matching_closed_form, search_best, suboptimal_point

log = logging.getLogger("hsdp_caching")

OUT_ENV = "HSDP_CACHING_OUT_DIR"
EXIT_OK, EXIT_VERIFY, EXIT_PARAMS, EXIT_IO = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _out_dir(args) -> Path:
    d = Path(args.out or os.environ.get(OUT_ENV) or ".")
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _IOFailure(f"cannot create output directory {d}: {exc}")
    return d


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}")
    print(f"wrote {path}")


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _IOFailure(f"cannot read {path}: {exc}")


def cmd_construct(args) -> int:
    L, r = args.L, args.r
    if L == 1 and args.bump_tail:
        if r not in (None, 1):
            raise ParameterError("--bump-tail only applies when r would be 1")
        r = 2
        log.warning("--bump-tail: using r=2 for L=1; the half-sum bound is not guaranteed")
    params = ConstructionParams(L, args.m, r, args.v)
    h = construct_hsdp(params)
    hrep = verify_hsdp(h)
    m = build_mapda(h)
    mrep = verify_mapda(m)
    out = _out_dir(args)
    stem = args.name or f"hsdp_L{L}_v{params.modulus}_m{'-'.join(map(str, params.block_dims))}"
    _write(out / f"{stem}_hsdp.json", h.to_json(indent=1))
    _write(out / f"{stem}_mapda.json", m.to_json())
    print(hrep.summary())
    print(mrep.summary())
    if args.pretty:
        print(m.render())
    return EXIT_OK if hrep.passed and mrep.passed else EXIT_VERIFY


def cmd_verify(args) -> int:
    ok = True
    if args.hsdp:
        data = _read_json(args.hsdp)
        if args.L is not None:
            data["L"] = args.L
        rep = verify_hsdp(Hsdp.from_dict(data))
        print(rep.summary())
        for v in rep.violations[:10]:
            print("  " + v.describe())
        ok &= rep.passed
    if args.mapda:
        m = Mapda.from_dict(_read_json(args.mapda), antennas=args.L)
        rep = verify_mapda(m)
        print(rep.summary())
        if rep.passed:
            print("(" + ",".join(map(str, scheme_params(m).as_tuple())) + ")")
        if args.pretty:
            print(m.render())
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_optimize(args) -> int:
    if args.q is not None:
        if args.v is not None:
            raise ParameterError("--q and --v are mutually exclusive")
        point = suboptimal_point(args.L, args.q, args.n)
    else:
        if args.v is None:
            raise ParameterError("one of --q or --v is required")
        point = search_best(args.v, args.L, args.n, args.r)
    out = _out_dir(args)
    stem = args.name or f"design_L{point.antennas}_v{point.modulus}_n{point.n}"
    _write(out / f"{stem}.json", json.dumps(point.to_dict(), indent=1))
    print(point.summary())
    if point.source == "search":
        gap = closed_form_gap(point)
        if gap is not None:
            print(f"gap versus closed form: prod(m) +{gap}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    m = Mapda.from_dict(_read_json(args.mapda), antennas=args.L)
    rep = verify_mapda(m)
    if not rep.passed:
        print(rep.summary())
        return EXIT_VERIFY
    if args.channel_file:
        try:
            H = ChannelMatrix.load_csv(args.channel_file, m.antennas)
        except OSError as exc:
            raise _IOFailure(f"cannot read {args.channel_file}: {exc}")
    else:
        H = ChannelMatrix.random(m.K, m.antennas, args.seed)
    try:
        report = simulate(m, H, demands=args.demands, seed=args.seed)
    except (RankDeficiency, DecodeFailure) as exc:
        print(f"FAIL {exc}")
        return EXIT_VERIFY
    out = _out_dir(args)
    _write(out / f"{args.name or Path(args.mapda).stem + '_sim'}.json", report.to_json())
    print(report.summary())
    return EXIT_OK if report.success else EXIT_VERIFY


def _load_points(path) -> list:
    data = _read_json(path)
    items = data if isinstance(data, list) else data.get("points", [data])
    return [DesignPoint.from_dict(d) for d in items]


def cmd_compare(args) -> int:
    K, L = args.k, args.l
    if args.ours_from:
        points = _load_points(args.ours_from)
    else:
        points = default_points(K, L)
    if args.t:
        points = list(points) + list(args.t)
    if not points:
        raise ParameterError(f"no design points for K={K}, L={L}; pass --ours-from or --t")
    rows = compare_sweep(K, L, points)
    out = _out_dir(args)
    _write(out / f"{args.name or f'compare_K{K}_L{L}'}.csv", write_csv(rows))
    for r in rows:
        if r.scheme == "ours":
            print(f"ours t={r.t} M/N={r.memory_ratio} F={r.F} g={r.g}")
    return EXIT_OK


def default_points(K: int, L: int) -> list:
    """Search optimum per n (while feasible) plus any closed-form point with v = K."""
    pts = []
    n = 1
    while True:
        try:
            pts.append(search_best(K, L, n))
        except ParameterError:
            break
        cf = matching_closed_form(K, L, n)
        if cf is not None and cf.block_dims != pts[-1].block_dims:
            pts.append(cf)
        n += 1
    return pts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hsdp-caching", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
        sp.add_argument("--name", help="output file stem")

    c = sub.add_parser("construct", help="build an HSDP and its MAPDA")
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--r", type=int)
    c.add_argument("--m", type=_int_list, required=True, help="block dimensions, e.g. 2,2")
    c.add_argument("--v", type=int, help="modulus (default 2*phi+1)")
    c.add_argument("--bump-tail", action="store_true", help="use r=2 when L=1")
    c.add_argument("--pretty", action="store_true")
    common(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="verify an HSDP and/or MAPDA file")
    v.add_argument("--hsdp")
    v.add_argument("--mapda")
    v.add_argument("--L", type=int, help="override the antenna count")
    v.add_argument("--pretty", action="store_true")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("optimize", help="choose block dimensions")
    o.add_argument("--L", type=int, required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--q", type=int, help="closed-form design with m_i = q")
    o.add_argument("--v", type=int, help="exhaustive search at this modulus")
    o.add_argument("--r", type=int)
    common(o)
    o.set_defaults(func=cmd_optimize)

    s = sub.add_parser("simulate", help="zero-forcing delivery over a MAPDA")
    s.add_argument("mapda")
    s.add_argument("--L", type=int)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--channel-file")
    s.add_argument("--demands", type=_int_list)
    common(s)
    s.set_defaults(func=cmd_simulate)

    k = sub.add_parser("compare", help="baseline comparison table as CSV")
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--l", type=int, required=True)
    k.add_argument("--ours-from", help="DesignPoint JSON (object or list)")
    k.add_argument("--t", type=_int_list, help="extra baseline-only memory points")
    common(k)
    k.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "verify" and not (args.hsdp or args.mapda):
        parser.error("verify needs --hsdp and/or --mapda")
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
