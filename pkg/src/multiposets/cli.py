"""Command-line entry point.

Exit status: 0 when a verdict was computed (whatever it is), 2 on bad
input, 3 when a size bound was exceeded.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TextIO

from . import io
from .amalgam import construct_d, find_cone_csm, verify_main_theorem_instance
from .cache import ResultCache
from .canon import canonical_representative
from .classes import ENUMERATION_BOUND, ClassSpec, enumerate_class, is_member, slot_count
from .errors import BoundExceeded, MultiposetError
from .hom import enumerate_embeddings
from .order import Template, validate_template
from .presets import named_structure, preset_template
from .ramsey import arrow_check, has_hp_upto, has_jep_upto, has_sap_upto, ramsey_witness_search
from .structure import Multiposet

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BOUND = 3

COMMANDS = ("validate", "member", "enumerate", "embeddings", "arrow", "search", "classprops", "amalgamate", "verify")


@dataclass
class RunConfig:
    command: str
    template: str | None = None
    preset: str | None = None
    class_name: str | None = None
    s: int | None = None
    m: int | None = None
    structure: str | None = None
    a: str | None = None
    b: str | None = None
    c: str | None = None
    diagram: str | None = None
    cone: str | None = None
    k: int = 2
    n: int = 3
    max_n: int = 6
    max_size: int = 6
    bound: int = ENUMERATION_BOUND
    workers: int = 1
    cache_dir: str | None = None
    fmt: str = "human"
    close: bool = False
    out: str | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise MultiposetError(f"unknown command {self.command!r}")
        for name in ("n", "max_n", "max_size", "bound", "workers"):
            if getattr(self, name) < 1:
                raise MultiposetError(f"--{name.replace('_', '-')} must be positive")
        if self.command in ("arrow", "search") and self.k < 2:
            raise MultiposetError("-k must be at least 2")
        if self.fmt not in ("human", "json"):
            raise MultiposetError("--format is human or json")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("human", "json"), default="human",
                        help="json emits one record per line")
    common.add_argument("--template", help="template file (JSON: t, order as 1-based [i, j] pairs)")
    common.add_argument("--preset", help="bundled template: a, b, c, d:n, e:n (e:n puts the shared order at index n)")
    common.add_argument("--class", dest="class_name", choices=("ch", "epos", "k", "kbar", "csm"),
                        help="defaults to k when a template is given")
    common.add_argument("--s", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--bound", type=int, default=ENUMERATION_BOUND, help="largest size ever enumerated")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--cache-dir", help="result cache directory (default: $MULTIPOSETS_CACHE_DIR)")
    common.add_argument("--close", action="store_true", help="close loaded relations reflexively-transitively")

    parser = argparse.ArgumentParser(prog="multiposets", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="analyse a template")
    p = sub.add_parser("member", parents=[common], help="class membership of a structure")
    p.add_argument("--structure", required=True)
    p = sub.add_parser("enumerate", parents=[common], help="members of a class up to isomorphism")
    p.add_argument("-n", type=int, required=True)
    p = sub.add_parser("embeddings", parents=[common], help="all embeddings A -> B")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p = sub.add_parser("arrow", parents=[common], help="decide C -> (B)^A_k")
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("-k", type=int, default=2)
    p = sub.add_parser("search", parents=[common], help="smallest C in the class with C -> (B)^A_k")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--max-n", type=int, default=6)
    p = sub.add_parser("classprops", parents=[common], help="HP, JEP and SAP up to size n")
    p.add_argument("-n", type=int, default=3)
    p = sub.add_parser("amalgamate", parents=[common], help="build D from a diagram and a cone in C(s,m)")
    p.add_argument("--diagram", required=True)
    p.add_argument("--cone", help="cone file; searched for when omitted")
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--out", help="write the resulting cone (D and legs) here")
    p = sub.add_parser("verify", parents=[common], help="check every claim about the constructed D")
    p.add_argument("--diagram", required=True)
    p.add_argument("--cone", required=True)
    return parser


def parse_args(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})


# -- helpers -------------------------------------------------------------------


def _template(cfg: RunConfig) -> Template:
    if cfg.template:
        return io.load_template(cfg.template)
    if cfg.preset:
        return preset_template(cfg.preset)
    raise MultiposetError("this command needs --template or --preset")


def _class(cfg: RunConfig) -> ClassSpec:
    name = cfg.class_name
    if name is None:
        if not (cfg.template or cfg.preset):
            raise MultiposetError("this command needs --class, --template or --preset")
        name = "k"
    if name == "ch":
        return ClassSpec.ch()
    if name == "epos":
        return ClassSpec.epos()
    if name == "csm":
        if cfg.s is None or cfg.m is None:
            raise MultiposetError("--class csm needs --s and --m")
        return ClassSpec.csm(cfg.s, cfg.m)
    template = _template(cfg)
    return ClassSpec.k(template) if name == "k" else ClassSpec.kbar(template)


def _structure(cfg: RunConfig, ref: str) -> Multiposet:
    if not Path(ref).exists() and (cfg.class_name or cfg.template or cfg.preset):
        named = named_structure(ref, slot_count(_class(cfg)))
        if named is not None:
            return named
    return io.load_structure(ref, cfg.close)


class _Output:
    def __init__(self, cfg: RunConfig, stream: TextIO) -> None:
        self.json = cfg.fmt == "json"
        self.stream = stream

    def emit(self, record: dict, human: str) -> None:
        print(io.dumps(record) if self.json else human, file=self.stream)


# -- commands ------------------------------------------------------------------


def _cmd_validate(cfg: RunConfig, out: _Output) -> None:
    info = validate_template(_template(cfg))
    pairs = [list(p) for p in info.pairs]
    out.emit(
        {"command": "validate", "t": info.template.t, "maximal": sorted(info.maximal),
         "isolated": list(info.isolated), "pairs": pairs, "s": info.s, "m": info.m},
        f"t={info.template.t}, maximal={sorted(info.maximal)}, isolated={list(info.isolated)}\n"
        f"s={info.s}, m={info.m}, pairs {[tuple(p) for p in info.pairs]}",
    )


def _cmd_member(cfg: RunConfig, out: _Output) -> None:
    spec = _class(cfg)
    verdict = is_member(spec, _structure(cfg, cfg.structure))
    out.emit({"command": "member", "class": str(spec), "verdict": verdict}, f"{spec}: {verdict}")


def _cmd_enumerate(cfg: RunConfig, out: _Output) -> None:
    spec = _class(cfg)
    members = enumerate_class(spec, cfg.n, cfg.bound)
    for x in members:
        out.emit({"command": "enumerate", "structure": io.structure_to_dict(x)}, io.dumps(io.structure_to_dict(x)))
    out.emit({"command": "enumerate", "class": str(spec), "n": cfg.n, "count": len(members)},
             f"{len(members)} structures of size {cfg.n} in {spec}")


def _cmd_embeddings(cfg: RunConfig, out: _Output) -> None:
    a, b = _structure(cfg, cfg.a), _structure(cfg, cfg.b)
    homs = enumerate_embeddings(a, b)
    out.emit({"command": "embeddings", "count": len(homs), "maps": [list(f) for f in homs]},
             f"{len(homs)} embeddings\n" + "\n".join(str(list(f)) for f in homs))


def _arrow_record(cfg: RunConfig, c: Multiposet, b: Multiposet, a: Multiposet, k: int) -> dict:
    a, b, c = (canonical_representative(x) for x in (a, b, c))
    instance = {"a": io.described(a), "b": io.described(b), "c": io.described(c), "k": k}
    cache = ResultCache.from_env(cfg.cache_dir)
    if cache is not None:
        hit = cache.get(instance)
        if hit is not None:
            return hit
    record = io.arrow_certificate(c, b, a, k, arrow_check(c, b, a, k, cfg.workers))
    if cache is not None:
        cache.put(instance, record)
    return record


def _cmd_arrow(cfg: RunConfig, out: _Output) -> None:
    a, b, c = (_structure(cfg, ref) for ref in (cfg.a, cfg.b, cfg.c))
    record = _arrow_record(cfg, c, b, a, cfg.k)
    human = f"C -> (B)^A_{cfg.k}: {'holds' if record['holds'] else 'fails'}"
    if record["counterexample"] is not None:
        human += f"\ncounterexample colouring of hom(A, C): {record['counterexample']}"
    out.emit({"command": "arrow", **record}, human)


def _cmd_search(cfg: RunConfig, out: _Output) -> None:
    spec = _class(cfg)
    a, b = _structure(cfg, cfg.a), _structure(cfg, cfg.b)
    found = ramsey_witness_search(spec, a, b, cfg.k, cfg.max_n, cfg.bound, cfg.workers)
    if found is None:
        out.emit({"command": "search", "found": False, "max_n": cfg.max_n},
                 f"no witness in {spec} up to size {cfg.max_n}")
        return
    c, _ = found
    record = _arrow_record(cfg, c, b, a, cfg.k)
    out.emit({"command": "search", "found": True, "size": c.size, "certificate": record},
             f"smallest witness has size {c.size}: {io.dumps(io.structure_to_dict(c))}")


def _cmd_classprops(cfg: RunConfig, out: _Output) -> None:
    spec = _class(cfg)
    hp = has_hp_upto(spec, cfg.n)
    jep = has_jep_upto(spec, cfg.n, cfg.bound)
    sap = has_sap_upto(spec, cfg.n)
    out.emit({"command": "classprops", "class": str(spec), "n": cfg.n, "hp": hp, "jep": jep, "sap": sap},
             f"{spec} up to size {cfg.n}: HP={hp} JEP={jep} SAP={sap}")


def _cmd_amalgamate(cfg: RunConfig, out: _Output) -> None:
    info = validate_template(_template(cfg))
    d = io.load_diagram(cfg.diagram)
    if cfg.cone:
        cone = io.load_cone(cfg.cone)
    else:
        if cfg.max_size > cfg.bound:
            raise BoundExceeded(f"--max-size {cfg.max_size} exceeds --bound {cfg.bound}")
        cone = find_cone_csm(d, info.s, info.m, cfg.max_size)
        if cone is None:
            out.emit({"command": "amalgamate", "cone_found": False, "max_size": cfg.max_size},
                     f"no cone in C({info.s},{info.m}) up to size {cfg.max_size}")
            return
    built = construct_d(d, cone, info)
    result = {"apex": io.structure_to_dict(built.d), "legs": [list(f) for f in built.legs]}
    if cfg.out:
        io.write_json(cfg.out, result)
    out.emit({"command": "amalgamate", "cone_found": True, **result},
             f"D has {built.d.size} elements: {io.dumps(result)}")


def _cmd_verify(cfg: RunConfig, out: _Output) -> None:
    info = validate_template(_template(cfg))
    report = verify_main_theorem_instance(io.load_diagram(cfg.diagram), io.load_cone(cfg.cone), info)
    lines = [f"{'ok  ' if ok else 'FAIL'} {stage} {detail if not ok else ''}".rstrip()
             for stage, ok, detail in report.stages]
    out.emit({"command": "verify", **report.as_dict()}, "\n".join(lines + [f"passed: {report.passed}"]))


_DISPATCH: dict[str, Callable[[RunConfig, _Output], None]] = {
    "validate": _cmd_validate,
    "member": _cmd_member,
    "enumerate": _cmd_enumerate,
    "embeddings": _cmd_embeddings,
    "arrow": _cmd_arrow,
    "search": _cmd_search,
    "classprops": _cmd_classprops,
    "amalgamate": _cmd_amalgamate,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        _DISPATCH[cfg.command](cfg, _Output(cfg, stdout))
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=stderr)
        return EXIT_BOUND
    except MultiposetError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
