"""Line-oriented simulation scripts.

Commands, one per line (``#`` starts a comment)::

    place <fixture|path> M=<int> file=<path>      # or random=<bytes> [seed=<int>]
    fail <i>
    repair <i>                                    # or: repair all
    reconstruct <i,j,...>

The runner pads the file with zero bytes up to a multiple of M and strips
the padding again before comparing reconstructions with the original.
"""

from __future__ import annotations

import hashlib
import random
import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, TextIO

from .incidence import FormatError, IncidenceStructure, as_fr_code
from .storage import Insufficient, StorageSystem, ToleranceExceeded, Unrecoverable, encode_and_place


class ScriptError(FormatError):
    pass


@dataclass
class ScenarioResult:
    lines: list[str] = field(default_factory=list)
    mismatches: int = 0
    refused: int = 0

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def _kv(args: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for a in args:
        if "=" not in a:
            raise ScriptError(f"expected key=value, got {a!r}", lineno)
        k, v = a.split("=", 1)
        out[k] = v
    return out


def _int(text: str, what: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScriptError(f"{what} must be an integer, got {text!r}", lineno) from None


def run_scenario(text: str, resolve: Callable[[str], IncidenceStructure],
                 base_dir: Path | None = None, out: TextIO | None = None) -> ScenarioResult:
    """Execute a script; ``resolve`` maps the place target to a structure."""
    base_dir = base_dir or Path.cwd()
    res = ScenarioResult()
    system: StorageSystem | None = None
    original = b""

    def emit(line: str) -> None:
        res.lines.append(line)
        if out is not None:
            print(line, file=out)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cmd, *args = shlex.split(line)
        if cmd == "place":
            if not args:
                raise ScriptError("place needs a code", lineno)
            opts = _kv(args[1:], lineno)
            if "M" not in opts:
                raise ScriptError("place needs M=<int>", lineno)
            M = _int(opts["M"], "M", lineno)
            if "file" in opts:
                path = Path(opts["file"])
                original = (path if path.is_absolute() else base_dir / path).read_bytes()
            elif "random" in opts:
                rng = random.Random(_int(opts.get("seed", "0"), "seed", lineno))
                original = rng.randbytes(_int(opts["random"], "random", lineno))
            else:
                raise ScriptError("place needs file=<path> or random=<bytes>", lineno)
            code = as_fr_code(resolve(args[0]))
            pad = -len(original) % M
            system = encode_and_place(code, original + bytes(pad), M)
            n, alpha, v, rho = code.params
            emit(f"place {args[0]}: n={n} alpha={alpha} v={v} rho={rho} M={M} "
                 f"packet={system.packet_size} B padding={pad} B")
            continue
        if system is None:
            raise ScriptError(f"'{cmd}' before 'place'", lineno)
        if cmd == "fail":
            i = _int(args[0] if args else "", "node", lineno)
            try:
                system.fail_node(i)
                emit(f"fail {i}: ok")
            except ToleranceExceeded as exc:
                res.refused += 1
                emit(f"fail {i}: refused ({exc})")
        elif cmd == "repair":
            targets = system.failed if args == ["all"] else [_int(args[0] if args else "", "node", lineno)]
            for i in targets:
                try:
                    log = system.repair_node(i)
                except Unrecoverable as exc:
                    res.mismatches += 1
                    emit(f"repair {i}: unrecoverable ({exc})")
                    continue
                emit(f"repair {i}: {len(log)} packets")
                for t in log:
                    emit(str(t))
        elif cmd == "reconstruct":
            if not args:
                raise ScriptError("reconstruct needs a node list", lineno)
            nodes = [_int(x, "node", lineno) for x in args[0].split(",")]
            got = system.reconstruct(nodes)
            label = ",".join(str(i) for i in nodes)
            if isinstance(got, Insufficient):
                emit(f"reconstruct {label}: {got}")
                continue
            got = got[:len(original)]
            digest = hashlib.sha256(got).hexdigest()[:16]
            if got == original:
                emit(f"reconstruct {label}: ok {len(got)} B sha256={digest}")
            else:
                res.mismatches += 1
                emit(f"reconstruct {label}: MISMATCH sha256={digest}")
        else:
            raise ScriptError(f"unknown command {cmd!r}", lineno)
    return res
