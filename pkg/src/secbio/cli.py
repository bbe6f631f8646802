"""Command-line front end.

Subcommands: enroll, auth, metrics, attack, smc-serve, smc-auth,
paper-check.  Exit codes: 0 accept/success, 1 reject or failed checks,
2 bad configuration, 3 I/O failure.  All decision and metric logic lives in
the library modules; this file only wires arguments to them.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cancelable, commit as commit_mod, metrics, multisys, paillier
from . import papercheck, presets, sketch, smc
from .gf2 import LinearCode, bit_str, bits

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_CONFIG = 2
EXIT_IO = 3


class ConfigError(Exception):
    pass


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise OSError(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad config JSON: {exc}")
    return cfg


def _get(args, cfg, name, default=None):
    val = getattr(args, name.replace("-", "_"), None)
    if val is not None:
        return val
    return cfg.get(name, default)


def _load_code(args, cfg) -> LinearCode:
    if _get(args, cfg, "preset") == "sidebar-b":
        return LinearCode.from_h(presets.H1)
    code_path = _get(args, cfg, "code")
    if code_path:
        text = Path(code_path).read_text()
        if code_path.endswith(".json"):
            return LinearCode.from_json(text)
        return LinearCode.from_text(text)
    inline = cfg.get("h")
    if inline is not None:
        return LinearCode.from_h(np.asarray(inline, dtype=np.uint8))
    raise ConfigError("no code given: use --preset, --code, or config 'h'")


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_enroll(args) -> int:
    cfg = _load_config(args)
    arch = _get(args, cfg, "arch", "sketch")
    tau = float(_get(args, cfg, "tau", 0.0))
    seed = int(_get(args, cfg, "seed", 0))
    feature = bits(_get(args, cfg, "feature"))
    if arch == "sketch":
        code = _load_code(args, cfg)
        system = sketch.SketchSystem(code=code, tau=tau,
                                     two_factor=bool(args.two_factor))
        key = None
        if args.two_factor:
            key = cancelable.random_key(cancelable.PERMUTE_SALT, code.n, seed)
            if not args.key_out:
                raise ConfigError("--key-out required for two-factor enroll")
            _write(args.key_out, key.to_json())
        template = sketch.enroll(system, feature, key)
        _write(args.out, template.to_json())
    elif arch == "commit":
        code = _load_code(args, cfg)
        z = commit_mod.sample_message(code, seed)
        template = commit_mod.commit(code, feature, z)
        _write(args.out, template.to_json())
        print(f"bound message: {bit_str(z)}", file=sys.stderr)
    elif arch == "cancelable":
        kind = _get(args, cfg, "kind", cancelable.PERMUTE_SALT)
        key = cancelable.random_key(kind, len(feature), seed)
        if not args.key_out:
            raise ConfigError("--key-out required for cancelable enroll")
        _write(args.key_out, key.to_json())
        template = cancelable.enroll(key, feature, tau)
        _write(args.out, template.to_json())
    elif arch == "smc":
        keypair = paillier.keypair_from_json(Path(args.key).read_text()) \
            if args.key else paillier.keygen(int(_get(args, cfg, "prime-bits", 512)), seed)
        if args.key_out:
            _write(args.key_out, paillier.keypair_to_json(keypair))
        host, port = args.addr.rsplit(":", 1)
        ok = smc.enroll_remote((host, int(port)), args.id, feature, keypair,
                               theta=_get(args, cfg, "theta"))
        print(json.dumps({"enrolled": ok}))
        return EXIT_ACCEPT if ok else EXIT_REJECT
    else:
        raise ConfigError(f"unknown architecture {arch!r}")
    return EXIT_ACCEPT


def cmd_auth(args) -> int:
    cfg = _load_config(args)
    probe = bits(_get(args, cfg, "probe"))
    text = Path(args.template).read_text()
    arch = json.loads(text).get("arch")
    if arch == "sketch":
        code = _load_code(args, cfg)
        tau = float(_get(args, cfg, "tau", 0.0))
        key = None
        two_factor = bool(args.key)
        if args.key:
            key = cancelable.TransformKey.from_json(Path(args.key).read_text())
        system = sketch.SketchSystem(code=code, tau=tau, two_factor=two_factor)
        result = sketch.authenticate(system, sketch.SketchTemplate.from_json(text),
                                     probe, key)
        print(json.dumps({"accepted": result.accepted,
                          "distance": result.distance,
                          "decoded": bit_str(result.decoded)}))
        return EXIT_ACCEPT if result.accepted else EXIT_REJECT
    if arch == "commit":
        code = _load_code(args, cfg)
        tau = float(_get(args, cfg, "tau", 0.0))
        result = commit_mod.open_commitment(
            code, commit_mod.CommitTemplate.from_json(text), probe, tau)
        print(json.dumps({
            "accepted": result.accepted,
            "distance": result.distance,
            "tied": result.tied,
            "message": bit_str(result.message) if result.message is not None else None,
        }))
        return EXIT_ACCEPT if result.accepted else EXIT_REJECT
    if arch == "cancelable":
        if not args.key:
            raise ConfigError("cancelable auth requires --key")
        key = cancelable.TransformKey.from_json(Path(args.key).read_text())
        template = cancelable.CancelableTemplate.from_json(text)
        accepted, dist = cancelable.authenticate(key, template, probe)
        print(json.dumps({"accepted": accepted, "distance": dist}))
        return EXIT_ACCEPT if accepted else EXIT_REJECT
    raise ConfigError(f"template has unknown architecture {arch!r}")


def cmd_metrics(args) -> int:
    cfg = _load_config(args)
    preset = _get(args, cfg, "preset", "sidebar-b")
    tau_grid = cfg.get("tau_grid") or [round(0.05 * i, 2) for i in range(10)]
    if preset == "sidebar-b":
        deployment = presets.sidebar_deployment()
        system = deployment.systems[0]
        p = float(_get(args, cfg, "p", 0.1))
    elif preset == "bsc16":
        model, system = presets.bsc16_demo(int(_get(args, cfg, "seed", 0)))
        p = model.p
    else:
        raise ConfigError(f"unknown preset {preset!r}")

    a = presets.ENROLLMENT if preset == "sidebar-b" else \
        np.zeros(system.n, dtype=np.uint8)  # FRR/FAR are enrollment-invariant
    template = sketch.enroll(system, a)
    profile = sketch.distance_profile(system, template)
    report = metrics.MetricReport()
    report.roc = metrics.roc_exact(profile, system.n, a, p, tau_grid)
    report.eer, report.eer_flag = metrics.eer(report.roc)
    report.storage_bits = metrics.storage_bits(template)
    mask = metrics.accept_mask(profile, system.n, system.tau)
    report.sar["none"] = metrics.sar_exact(mask, metrics.uniform_strategy(system.n))
    if system.n <= 12:
        report.leakage_bits["S"] = metrics.mutual_information_bits(
            metrics.sketch_joint(system.code))
    if preset == "sidebar-b":
        report.sar["S"] = multisys.cross_sar(deployment, 0, 0)
        report.sar["S_cross_2"] = multisys.cross_sar(deployment, 0, 1)
        report.sar["S_cross_3"] = multisys.cross_sar(deployment, 0, 2)

    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "roc.csv").write_text(report.to_csv())
        (out_dir / "metrics.json").write_text(report.to_json())
    elif (args.format or "json") == "csv":
        sys.stdout.write(report.to_csv())
    else:
        sys.stdout.write(report.to_json() + "\n")
    return EXIT_ACCEPT


def cmd_attack(args) -> int:
    cfg = _load_config(args)
    if _get(args, cfg, "preset", "sidebar-b") != "sidebar-b":
        raise ConfigError("attack currently supports the sidebar-b preset")
    deployment = presets.sidebar_deployment()
    report = {
        "intersection_sizes": {
            f"0&{i}": len(multisys.intersect_candidates(deployment, [0, i]))
            for i in range(3)
        },
        "cross_sar": {f"0->{i}": multisys.cross_sar(deployment, 0, i)
                      for i in range(3)},
        "cumulative_leakage": multisys.cumulative_leakage(deployment, [0, 1, 2]),
        "stacked_rank": {f"{i},{j}": r for (i, j), r in
                         multisys.dependence_profile(deployment).items()},
    }
    _write(args.out, json.dumps(report, indent=1))
    return EXIT_ACCEPT


def cmd_smc_serve(args) -> int:
    server = smc.serve(args.port, store_path=args.store,
                       default_theta=args.theta, host=args.host,
                       seed=args.seed)
    print(f"listening on {args.host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_ACCEPT


def cmd_smc_auth(args) -> int:
    keypair = paillier.keypair_from_json(Path(args.key).read_text())
    host, port = args.addr.rsplit(":", 1)
    try:
        accepted = smc.authenticate_remote((host, int(port)), args.id,
                                           bits(args.probe), keypair)
    except smc.SmcProtocolError as exc:
        print(json.dumps({"error": exc.code}))
        return EXIT_CONFIG
    print(json.dumps({"accepted": accepted}))
    return EXIT_ACCEPT if accepted else EXIT_REJECT


def cmd_paper_check(args) -> int:
    results = papercheck.run_paper_checks()
    failures = [name for name, ok in results if not ok]
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    print(f"{len(results) - len(failures)}/{len(results)} checks passed")
    return EXIT_ACCEPT if not failures else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secbio")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config")
        p.add_argument("--preset")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--format", choices=["json", "csv"])
        p.add_argument("--trials", type=int)
        p.add_argument("--exact", action="store_true")

    p = sub.add_parser("enroll", help="enroll a feature vector")
    common(p)
    p.add_argument("--arch", choices=["sketch", "commit", "cancelable", "smc"])
    p.add_argument("--feature")
    p.add_argument("--tau", type=float)
    p.add_argument("--code")
    p.add_argument("--two-factor", action="store_true")
    p.add_argument("--key")
    p.add_argument("--key-out")
    p.add_argument("--kind")
    p.add_argument("--addr")
    p.add_argument("--id")
    p.add_argument("--theta", type=int)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("auth", help="authenticate a probe against a template")
    common(p)
    p.add_argument("--template", required=True)
    p.add_argument("--probe")
    p.add_argument("--tau", type=float)
    p.add_argument("--code")
    p.add_argument("--key")
    p.set_defaults(func=cmd_auth)

    p = sub.add_parser("metrics", help="run a metric sweep and write reports")
    common(p)
    p.add_argument("--p", type=float)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("attack", help="multi-system linkage attack report")
    common(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("smc-serve", help="run the encrypted-matching server")
    common(p)
    p.add_argument("--port", type=int, default=0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store")
    p.add_argument("--theta", type=int, default=1)
    p.set_defaults(func=cmd_smc_serve)

    p = sub.add_parser("smc-auth", help="authenticate against a remote server")
    common(p)
    p.add_argument("--addr", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--probe", required=True)
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_smc_auth)

    p = sub.add_parser("paper-check", help="run the anchored regression checks")
    common(p)
    p.set_defaults(func=cmd_paper_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
