"""Batch command-line front door.

Reads UTF-8 JSON problem files, dispatches the computations, and emits
machine-readable result documents. Commands: ``dims``, ``gse``,
``ground-state``, ``evolve``, ``loss``, ``tensors``, ``verify``. Exit codes:
0 success, 1 input validation error, 2 numerical-tolerance failure.

Set ``SYMSIM_CACHE_DIR`` to cache structure/F tensor dumps between runs and
``SYMSIM_BACKEND`` to choose the compiled or pure-Python kernels.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from ._backend import active_backend
from .equivariant_dynamics import (
    IMAG_RESIDUE_TOL,
    PSD_TOL,
    TRACE_TOL,
    UNITARITY_TOL,
    BlockState,
    LabeledSample,
    block_operator_from_json,
    empirical_loss,
    evolution_from_hamiltonian,
    expectation,
    shadow_sample_complexity,
    unitary_from_coeffs,
)
from .errors import ToleranceError, ValidationError
from .monomial_algebra import (
    HERMITICITY_TOL,
    StructureTensor,
    SymmetricOperator,
    as_monomial,
    enumerate_monomials,
    hermitized_regular_rep,
    monomial_count,
    regular_rep,
)
from .schur_blocks import (
    DEGENERACY_RTOL,
    blocks_map_from_json_obj,
    enumerate_irreps,
    f_blocks_to_json,
    ground_state,
)
from .verify import run_checks

DEFAULT_TOLERANCES = {
    "hermiticity": HERMITICITY_TOL,
    "unitarity": UNITARITY_TOL,
    "imag_residue": IMAG_RESIDUE_TOL,
    "state_psd": PSD_TOL,
    "state_trace": TRACE_TOL,
    "degeneracy_rtol": DEGENERACY_RTOL,
}


@dataclass
class ProblemSpec:
    """Validated problem description plus per-command options."""

    n: int
    hamiltonian: SymmetricOperator
    observable: Optional[SymmetricOperator] = None
    unitary_coeffs: Optional[SymmetricOperator] = None
    unitary_time: Optional[float] = None
    unitary_blocks: Optional[object] = None
    state: Optional[BlockState] = None
    dataset: Optional[list] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        sources = sum(
            x is not None
            for x in (self.unitary_coeffs, self.unitary_time, self.unitary_blocks)
        )
        if sources > 1:
            raise ValidationError(
                "at most one unitary source (coefficients, time, blocks) is allowed"
            )


@dataclass
class ResultDocument:
    command: str
    input_digest: str
    results: dict
    degeneracy: Optional[dict]
    wall_time_s: float
    tolerances: dict

    def to_json(self):
        doc = {
            "command": self.command,
            "input_digest": self.input_digest,
            "results": self.results,
            "degeneracy": self.degeneracy,
            "wall_time_s": self.wall_time_s,
            "tolerances": self.tolerances,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# parsing

def _real_number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: expected a real number, got {value!r}")
    return float(value)


def _parse_terms(records, n, where, allow_complex=False):
    if not isinstance(records, list):
        raise ValidationError(f"{where}: expected a list of terms")
    pairs = []
    for pos, rec in enumerate(records):
        slot = f"{where}[{pos}]"
        if not isinstance(rec, dict) or "i" not in rec:
            raise ValidationError(f"{slot}: term must be an object with an 'i' field")
        mono = as_monomial(rec["i"], n)
        if allow_complex:
            coeff = complex(
                _real_number(rec.get("re", 0.0), f"{slot}.re"),
                _real_number(rec.get("im", 0.0), f"{slot}.im"),
            )
        else:
            if "coeff" not in rec:
                raise ValidationError(f"{slot}: missing 'coeff'")
            coeff = _real_number(rec["coeff"], f"{slot}.coeff")
        pairs.append((mono, coeff))
    return SymmetricOperator.from_pairs(n, pairs)


def _parse_dataset(records, n, base_dir):
    if not isinstance(records, list) or not records:
        raise ValidationError("dataset: expected a non-empty list of samples")
    samples = []
    for pos, rec in enumerate(records):
        slot = f"dataset[{pos}]"
        if not isinstance(rec, dict):
            raise ValidationError(f"{slot}: expected an object")
        label = rec.get("label")
        if label not in (-1, 1):
            raise ValidationError(f"{slot}.label: must be -1 or 1, got {label!r}")
        if ("state" in rec) == ("state_file" in rec):
            raise ValidationError(
                f"{slot}: exactly one of 'state' or 'state_file' is required"
            )
        if "state" in rec:
            sub_n, blocks = blocks_map_from_json_obj(rec["state"])
            state = BlockState(sub_n, blocks)
        else:
            path = Path(base_dir) / rec["state_file"]
            state = BlockState.from_json(_read_text(path))
        if state.n != n:
            raise ValidationError(f"{slot}: state has n={state.n}, expected {n}")
        samples.append(LabeledSample(state, int(label)))
    return samples


def parse_spec(text, base_dir=".") -> ProblemSpec:
    """Parse and validate a problem file, naming the offending field on error."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("input: expected a JSON object")
    unknown = set(doc) - {"n", "terms", "observable", "unitary", "state", "dataset"}
    if unknown:
        raise ValidationError(f"input: unknown fields {sorted(unknown)}")
    if "n" not in doc or isinstance(doc["n"], bool) or not isinstance(doc["n"], int):
        raise ValidationError("n: required positive integer")
    n = doc["n"]
    if n < 1:
        raise ValidationError(f"n: must be >= 1, got {n}")
    ham = _parse_terms(doc.get("terms", []), n, "terms")
    spec = {"n": n, "hamiltonian": ham}
    if "observable" in doc:
        spec["observable"] = _parse_terms(doc["observable"], n, "observable")
    if "unitary" in doc:
        uni = doc["unitary"]
        if not isinstance(uni, dict) or len(uni) != 1 or not set(uni) <= {
            "coeffs", "time", "blocks"
        }:
            raise ValidationError(
                "unitary: expected exactly one of 'coeffs', 'time' or 'blocks'"
            )
        if "coeffs" in uni:
            spec["unitary_coeffs"] = _parse_terms(
                uni["coeffs"], n, "unitary.coeffs", allow_complex=True
            )
        elif "time" in uni:
            spec["unitary_time"] = _real_number(uni["time"], "unitary.time")
        else:
            sub_n, blocks = blocks_map_from_json_obj(uni["blocks"])
            if sub_n != n:
                raise ValidationError(f"unitary.blocks: n={sub_n}, expected {n}")
            from .schur_blocks import BlockOperator
            spec["unitary_blocks"] = BlockOperator(sub_n, blocks)
    if "state" in doc:
        sub_n, blocks = blocks_map_from_json_obj(doc["state"])
        if sub_n != n:
            raise ValidationError(f"state: n={sub_n}, expected {n}")
        spec["state"] = BlockState(sub_n, blocks)
    if "dataset" in doc:
        spec["dataset"] = _parse_dataset(doc["dataset"], n, base_dir)
    return ProblemSpec(**spec)


def _read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# tensor cache

def _cache_path(kind, n):
    root = os.environ.get("SYMSIM_CACHE_DIR")
    if not root:
        return None
    return Path(root) / f"{kind}-n{n}.json"


def _structure_dump(n):
    path = _cache_path("structure", n)
    if path is not None and path.exists():
        return _read_text(path)
    text = StructureTensor.build(n).to_json()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text


def _f_dump(n):
    path = _cache_path("fblocks", n)
    if path is not None and path.exists():
        return _read_text(path)
    text = f_blocks_to_json(n)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text


def _structure_tensor_for(h):
    """Structure tensor rows for supp(h), from cache when possible."""
    path = _cache_path("structure", h.n)
    if path is not None and path.exists():
        tensor = StructureTensor.from_json(_read_text(path))
        if tensor.covers(h.support(), enumerate_monomials(h.n)):
            return tensor
    return StructureTensor.build(h.n, left=h.support())


# ---------------------------------------------------------------------------
# commands

def _cmd_dims(spec):
    irreps = [
        {"lambda0": lam.lambda0, "lambda1": lam.lambda1, "q_dim": lam.q_dim}
        for lam in enumerate_irreps(spec.n)
    ]
    count = monomial_count(spec.n)
    return {
        "n": spec.n,
        "monomial_count": count,
        "irreps": irreps,
        "sector_dimension_sum": sum(r["q_dim"] ** 2 for r in irreps),
    }, None


def _cmd_gse(spec):
    method = spec.options.get("method") or "blocks"
    threads = spec.options.get("threads", 1)
    h = spec.hamiltonian.require_real("Hamiltonian")
    if method == "regular":
        if not h.terms:
            return {"method": method, "energy": 0.0}, None
        tensor = _structure_tensor_for(h)
        mat = regular_rep(h, tensor)
        sym, deviation = hermitized_regular_rep(mat, h.n)
        if deviation > HERMITICITY_TOL:
            raise ToleranceError(
                f"regular representation failed Hermitization ({deviation:.3e})"
            )
        energy = float(np.linalg.eigvalsh(0.5 * (sym + sym.conj().T))[0])
        return {"method": method, "energy": energy,
                "hermiticity_deviation": deviation}, None
    if method == "blocks":
        result = ground_state(h, threads=threads)
        degeneracy = {
            "lambda1": result.lambda_min.lambda1,
            "degenerate_lambda1": [l.lambda1 for l in result.degenerate_irreps],
        }
        return {"method": method, "energy": result.energy,
                "lambda1": result.lambda_min.lambda1}, degeneracy
    raise ValidationError(f"--method must be 'regular' or 'blocks', got {method!r}")


def _cmd_ground_state(spec):
    threads = spec.options.get("threads", 1)
    result = ground_state(spec.hamiltonian.require_real("Hamiltonian"), threads=threads)
    degeneracy = {
        "lambda1": result.lambda_min.lambda1,
        "degenerate_lambda1": [l.lambda1 for l in result.degenerate_irreps],
    }
    return json.loads(result.to_json()), degeneracy


def _resolve_unitary(spec, threads):
    if spec.unitary_coeffs is not None:
        return unitary_from_coeffs(spec.unitary_coeffs, threads=threads), "coeffs"
    if spec.unitary_blocks is not None:
        return spec.unitary_blocks, "blocks"
    if spec.unitary_time is not None:
        return (
            evolution_from_hamiltonian(spec.hamiltonian, spec.unitary_time, threads=threads),
            "exp(-iHt)",
        )
    raise ValidationError(
        "no unitary source: provide --time, unitary coefficients or a block file"
    )


def _cmd_evolve(spec):
    threads = spec.options.get("threads", 1)
    if spec.state is None:
        raise ValidationError("evolve requires a block-diagonal state (--state)")
    observable = spec.observable if spec.observable is not None else spec.hamiltonian
    unitary, source = _resolve_unitary(spec, threads)
    value = expectation(observable, unitary, spec.state)
    results = {
        "expectation": value,
        "unitary_source": source,
        "shadow_sample_complexity": shadow_sample_complexity(spec.n),
    }
    if spec.unitary_time is not None:
        results["time"] = spec.unitary_time
    return results, None


def _cmd_loss(spec):
    threads = spec.options.get("threads", 1)
    if spec.dataset is None:
        raise ValidationError("loss requires a dataset (--dataset)")
    if spec.observable is None:
        raise ValidationError("loss requires an observable (--observable)")
    unitary, source = _resolve_unitary(spec, threads)
    value = empirical_loss(spec.dataset, spec.observable, unitary)
    return {
        "loss": value,
        "samples": len(spec.dataset),
        "unitary_source": source,
        "shadow_sample_complexity": shadow_sample_complexity(spec.n),
    }, None


def _cmd_tensors(spec):
    what = spec.options.get("what")
    if what == "structure":
        return {"dump": json.loads(_structure_dump(spec.n))}, None
    if what == "f":
        return {"dump": json.loads(_f_dump(spec.n))}, None
    raise ValidationError(f"--what must be 'structure' or 'f', got {what!r}")


def run(command, spec: ProblemSpec) -> ResultDocument:
    """Execute one command against a parsed spec."""
    handlers = {
        "dims": _cmd_dims,
        "gse": _cmd_gse,
        "ground-state": _cmd_ground_state,
        "evolve": _cmd_evolve,
        "loss": _cmd_loss,
        "tensors": _cmd_tensors,
    }
    if command not in handlers:
        raise ValidationError(f"unknown command {command!r}")
    start = time.perf_counter()
    results, degeneracy = handlers[command](spec)
    elapsed = time.perf_counter() - start
    tolerances = dict(DEFAULT_TOLERANCES)
    if spec.options.get("tolerance") is not None:
        tolerances["override"] = spec.options["tolerance"]
    return ResultDocument(
        command=command,
        input_digest=spec.options.get("input_digest", ""),
        results=results,
        degeneracy=degeneracy,
        wall_time_s=elapsed,
        tolerances=tolerances,
    )


# ---------------------------------------------------------------------------
# argument handling

def _add_common(parser, *, needs_input=True):
    if needs_input:
        parser.add_argument("--input", required=True, help="problem JSON file")
    parser.add_argument("--output", help="write the result document here (default stdout)")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads for per-sector work")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="override the default comparison tolerance")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="symsim",
        description="Simulate permutation-invariant qubit systems in polynomial time.",
    )
    parser.add_argument("--version", action="version", version=f"symsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="basis size and irrep sector table")
    _add_common(p)

    p = sub.add_parser("gse", help="ground-state energy")
    _add_common(p)
    p.add_argument("--method", choices=("regular", "blocks"), default="blocks")

    p = sub.add_parser("ground-state", help="ground state in the sector basis")
    _add_common(p)

    p = sub.add_parser("evolve", help="expectation after unitary evolution")
    _add_common(p)
    p.add_argument("--time", type=float, default=None, help="evolution time")
    p.add_argument("--observable", help="observable JSON file ({'n','terms'})")
    p.add_argument("--state", help="block-diagonal state JSON file")
    p.add_argument("--unitary", help="unitary JSON file (coeffs or blocks)")

    p = sub.add_parser("loss", help="labeled-sample empirical loss")
    _add_common(p)
    p.add_argument("--time", type=float, default=None)
    p.add_argument("--observable", help="observable JSON file")
    p.add_argument("--dataset", help="dataset JSON file")
    p.add_argument("--unitary", help="unitary JSON file (coeffs or blocks)")

    p = sub.add_parser("tensors", help="dump structure constants or sector blocks")
    _add_common(p)
    p.add_argument("--what", choices=("structure", "f"), required=True)

    p = sub.add_parser("verify", help="run the dense-oracle cross-check ladder")
    _add_common(p, needs_input=False)
    p.add_argument("--max-n", type=int, default=5, dest="max_n",
                   help="largest system size for the oracle checks")
    p.add_argument("--samples", type=int, default=50,
                   help="random samples per randomized check")
    return parser


def _attach_files(spec, args):
    """Fold flag-provided auxiliary files into the parsed spec."""
    if getattr(args, "observable", None):
        if spec.observable is not None:
            raise ValidationError("observable given both inline and via --observable")
        doc = json.loads(_read_text(args.observable))
        if isinstance(doc, dict):
            if "terms" not in doc:
                raise ValidationError("observable file: missing 'terms'")
            doc = doc["terms"]
        spec.observable = _parse_terms(doc, spec.n, "observable")
    if getattr(args, "state", None):
        if spec.state is not None:
            raise ValidationError("state given both inline and via --state")
        state = BlockState.from_json(_read_text(args.state))
        if state.n != spec.n:
            raise ValidationError(f"state file has n={state.n}, expected {spec.n}")
        spec.state = state
    if getattr(args, "dataset", None):
        if spec.dataset is not None:
            raise ValidationError("dataset given both inline and via --dataset")
        doc = json.loads(_read_text(args.dataset))
        spec.dataset = _parse_dataset(doc, spec.n, Path(args.dataset).parent)
    if getattr(args, "unitary", None):
        if any(x is not None for x in (spec.unitary_coeffs, spec.unitary_time,
                                       spec.unitary_blocks)):
            raise ValidationError("unitary given both inline and via --unitary")
        doc = json.loads(_read_text(args.unitary))
        if isinstance(doc, dict) and "coeffs" in doc:
            spec.unitary_coeffs = _parse_terms(doc["coeffs"], spec.n,
                                               "unitary.coeffs", allow_complex=True)
        else:
            unitary = block_operator_from_json(json.dumps(doc))
            if unitary.n != spec.n:
                raise ValidationError(f"unitary file has n={unitary.n}, expected {spec.n}")
            spec.unitary_blocks = unitary
    if getattr(args, "time", None) is not None:
        if any(x is not None for x in (spec.unitary_coeffs, spec.unitary_time,
                                       spec.unitary_blocks)):
            raise ValidationError("unitary given both via --time and another source")
        spec.unitary_time = args.time
    return spec


def _emit(text, output):
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _run_verify(args):
    start = time.perf_counter()
    checks = run_checks(
        max_n=args.max_n,
        per_n=max(2, args.samples // 5),
        samples=args.samples,
        tolerance=args.tolerance,
    )
    elapsed = time.perf_counter() - start
    for check in checks:
        print(check.line())
    failed = [c.name for c in checks if not c.passed]
    summary = {
        "command": "verify",
        "backend": active_backend(),
        "max_n": args.max_n,
        "checks": [
            {"name": c.name, "passed": c.passed, "worst": c.worst, "detail": c.detail}
            for c in checks
        ],
        "failed": failed,
        "wall_time_s": elapsed,
    }
    if args.output:
        _emit(json.dumps(summary, indent=2, sort_keys=True), args.output)
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed "
          f"in {elapsed:.1f}s on backend '{active_backend()}'")
    return 2 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        raw = _read_text(args.input)
        spec = parse_spec(raw, base_dir=Path(args.input).parent)
        spec = _attach_files(spec, args)
        spec.options.update(
            {
                "method": getattr(args, "method", None),
                "what": getattr(args, "what", None),
                "threads": max(1, args.threads),
                "tolerance": args.tolerance,
                "input_digest": hashlib.sha256(raw.encode("utf-8")).hexdigest(),
            }
        )
        doc = run(args.command, spec)
        if args.command == "tensors":
            _emit(json.dumps(doc.results["dump"]), args.output)
        else:
            _emit(doc.to_json(), args.output)
        return 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ToleranceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
