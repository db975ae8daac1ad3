"""Check records, reports and JSON (de)serialization of the core objects."""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional

from .kernel import Field, GaussianRational, format_scalar, parse_scalar
from .structure import (
    CONSTANT_TYPES,
    AlgebraWitness,
    SuperalgebraWitness,
    TableLabel,
    Z2Witness,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
STATUSES = (PASS, FAIL, INCONCLUSIVE)


@dataclass
class CheckRecord:
    name: str
    status: str
    residual: str = "0"
    anchor: str = ""
    details: object = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def to_json(self):
        out = {"name": self.name, "status": self.status, "residual": self.residual,
               "anchor": self.anchor}
        if self.details is not None:
            out["details"] = self.details
        return out


@dataclass
class Report:
    command: Optional[List[str]] = None
    checks: List[CheckRecord] = dc_field(default_factory=list)
    data: Optional[Dict[str, object]] = None

    def add(self, name: str, ok: bool, residual: str = "0", anchor: str = "", details=None,
            inconclusive: bool = False) -> CheckRecord:
        status = INCONCLUSIVE if inconclusive else PASS if ok else FAIL
        rec = CheckRecord(name, status, residual if not ok or inconclusive else "0", anchor, details)
        self.checks.append(rec)
        return rec

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        if other.data:
            self.data = {**(self.data or {}), **other.data}

    def summary(self) -> Dict[str, int]:
        return {s: sum(1 for c in self.checks if c.status == s) for s in STATUSES}

    @property
    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_json(self):
        out = {}
        if self.command is not None:
            out["command"] = list(self.command)
        out["checks"] = [c.to_json() for c in self.checks]
        out["summary"] = self.summary()
        if self.data is not None:
            out["data"] = self.data
        return out


def emit(report: Report, fmt: str = "json") -> bytes:
    """Serialize with stable field order; numbers are already exact strings."""
    if fmt == "json":
        return json.dumps(report.to_json(), separators=(",", ":"), ensure_ascii=False).encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    if report.command is not None:
        lines.append("$ z2z2 " + " ".join(report.command))
    for c in report.checks:
        line = f"{c.status.upper():<12} {c.name}"
        if c.anchor:
            line += f"  [{c.anchor}]"
        if c.status != PASS and c.residual not in ("", "0"):
            line += f"\n{'':13}residual: {c.residual}"
        lines.append(line)
    if report.data:
        for k, v in report.data.items():
            lines.append(f"{k}: {json.dumps(v, ensure_ascii=False)}")
    s = report.summary()
    lines.append(f"summary: pass={s[PASS]} fail={s[FAIL]} inconclusive={s[INCONCLUSIVE]}")
    return ("\n".join(lines) + "\n").encode()


# ---------------------------------------------------------------------------
# JSON records


def constants_to_json(c) -> Dict[str, object]:
    return {"kind": c.KIND, "field": c.field.value,
            "values": {k: format_scalar(v) for k, v in c.as_dict().items()}}


def constants_from_json(data: Dict[str, object], kind: Optional[str] = None, fld: Optional[Field] = None):
    k = data.get("kind", kind)
    if kind is not None and k != kind:
        raise ValueError(f"expected {kind} constants, got {k}")
    if k not in CONSTANT_TYPES:
        raise ValueError(f"unknown constant kind {k!r}")
    f = fld or Field(data.get("field", "R"))
    values = {n: parse_scalar(str(v), f) for n, v in data.get("values", {}).items()}
    return CONSTANT_TYPES[k].from_mapping(values, f)


def label_to_json(label: TableLabel) -> Dict[str, object]:
    out: Dict[str, object] = {"family": label.family, "text": str(label)}
    for name in ("eps", "x", "y", "z"):
        v = getattr(label, name)
        if v is not None:
            out[name] = v if name == "eps" else format_scalar(v)
    return out


def label_from_json(data: Dict[str, object], fld: Field = Field.R) -> TableLabel:
    kw = {}
    for name in ("eps", "x", "y", "z"):
        if name in data:
            kw[name] = int(data[name]) if name == "eps" else parse_scalar(str(data[name]), fld)
    return TableLabel(data["family"], **kw)


def parse_label(text: str, fld: Field = Field.R) -> TableLabel:
    """``A8[y=1/2,z=1]``, ``S10[eps=-1]`` or a bare family name."""
    text = text.strip()
    if "[" not in text:
        return TableLabel(text)
    fam, rest = text.split("[", 1)
    kw = {}
    for part in rest.rstrip("]").split(","):
        k, v = part.split("=")
        k = k.strip()
        kw[k] = int(v) if k == "eps" else parse_scalar(v.strip(), fld)
    return TableLabel(fam.strip(), **kw)


def witness_to_json(w) -> Dict[str, object]:
    f = format_scalar
    if isinstance(w, AlgebraWitness):
        out = {"type": "algebra", "lam_h": f(w.lam_h), "sq": [f(s) for s in w.sq],
               "prod": f(w.prod), "perm": list(w.perm)}
    elif isinstance(w, SuperalgebraWitness):
        out = {"type": "superalgebra", "lam_h": f(w.lam_h), "sq": [f(s) for s in w.sq],
               "u": f(w.u), "swap": w.swap}
    elif isinstance(w, Z2Witness):
        out = {"type": "z2", "lam_h": f(w.lam_h), "sq_q": f(w.sq_q)}
    else:
        raise TypeError(type(w).__name__)
    lam = w.lambdas()
    if lam is not None:
        out["lambdas"] = {k: f(v) for k, v in lam.items()}
    return out


def scalar_list(values) -> List[str]:
    return [format_scalar(v) for v in values]
