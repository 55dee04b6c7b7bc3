"""OpenQASM 2.0 export and the matching reader.

Multi-controlled gates are emitted as named ``gate`` definitions built only
from ``qelib1.inc`` primitives, so any OpenQASM 2.0 consumer can load the
file while :func:`parse_qasm` maps the names straight back to gates:

* ``mcx_<pattern>``: X on the last argument, controls first, ``pattern``
  giving each control's polarity (all-positive 1- and 2-control gates use
  the native ``cx``/``ccx``).
* ``negdiff<t>_c<pattern>``: controlled ``-G`` on the last ``t`` arguments.
* ``mcphase<k>(lam)``: phase ``lam`` on |1...1> of ``k`` qubits, expanded
  into parity phases ``u1(+-lam/2**(k-1))`` enumerated in Gray-code order.
"""

from __future__ import annotations

import re

from .gates import Circuit, Gate, x_gate

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def _real(value: float) -> str:
    s = repr(float(value))
    mantissa, _, exp = s.partition("e")
    if "." not in mantissa and mantissa not in ("inf", "-inf", "nan"):
        mantissa += ".0"
    return mantissa + ("e" + exp if exp else "")


def _args(names: list[str]) -> str:
    return ",".join(names)


def _mcphase_body(k: int) -> list[str]:
    a = [f"a{i}" for i in range(k)]
    if k == 1:
        return ["u1(lam) a0;"]
    scale = 2 ** (k - 1)
    body = []
    for h in range(k):
        prev = 0
        for i in range(2**h):
            g = i ^ (i >> 1)
            if i:
                changed = (g ^ prev).bit_length() - 1
                body.append(f"cx {a[changed]},{a[h]};")
            prev = g
            sign = "" if bin(g).count("1") % 2 == 0 else "-"
            body.append(f"u1({sign}lam/{scale}) {a[h]};")
        if h:
            body.append(f"cx {a[h - 1]},{a[h]};")
    return body


class _Definitions:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.done: set[str] = set()

    def _define(self, name: str, header: str, body: list[str]) -> None:
        if name not in self.done:
            self.done.add(name)
            self.lines.append(f"gate {header} {{ {' '.join(body)} }}")

    def mcphase(self, k: int) -> str:
        name = f"mcphase{k}"
        if name not in self.done:
            self._define(name, f"{name}(lam) {_args([f'a{i}' for i in range(k)])}", _mcphase_body(k))
        return name

    def mcx(self, pattern: str) -> str:
        k = len(pattern)
        if "0" not in pattern and k <= 2:
            return ("x", "cx", "ccx")[k]
        name = f"mcx_{pattern}"
        if name in self.done:
            return name
        c = [f"c{i}" for i in range(k)]
        if "0" in pattern:
            inner = self.mcx("1" * k)
            wrap = [f"x {c[i]};" for i, s in enumerate(pattern) if s == "0"]
            body = wrap + [f"{inner} {_args(c + ['t'])};"] + wrap
        else:
            ph = self.mcphase(k + 1)
            body = ["h t;", f"{ph}(pi) {_args(c + ['t'])};", "h t;"]
        self._define(name, f"{name} {_args(c + ['t'])}", body)
        return name

    def negdiff(self, n_targets: int, pattern: str) -> str:
        name = f"negdiff{n_targets}_c{pattern}"
        if name in self.done:
            return name
        c = [f"c{i}" for i in range(len(pattern))]
        t = [f"t{i}" for i in range(n_targets)]
        wrap = [f"x {c[i]};" for i, s in enumerate(pattern) if s == "0"]
        inner = self.mcx("1" * (len(c) + n_targets - 1))
        hs = [f"h {w};" for w in t]
        xs = [f"x {w};" for w in t]
        mcz = [f"h {t[-1]};", f"{inner} {_args(c + t)};", f"h {t[-1]};"]
        body = wrap + hs + xs + mcz + xs + hs + wrap
        self._define(name, f"{name} {_args(c + t)}", body)
        return name


def export_qasm(circuit: Circuit) -> str:
    defs = _Definitions()
    body = []
    for g in circuit:
        q = [f"q[{w}]" for w in g.controls + g.targets]
        pattern = "".join(str(s) for s in g.ctrl_state)
        if g.name in ("H", "Y", "Z"):
            body.append(f"{g.name.lower()} {q[0]};")
        elif g.name == "P":
            body.append(f"u1({_real(g.param)}) {q[0]};")
        elif g.name == "CU":
            body.append(f"{defs.negdiff(len(g.targets), pattern)} {_args(q)};")
        else:
            body.append(f"{defs.mcx(pattern)} {_args(q)};")
    lines = [HEADER.rstrip("\n"), *defs.lines, f"qreg q[{circuit.width}];", *body]
    return "\n".join(lines) + "\n"


_GATE_DEF = re.compile(r"^\s*gate\s.*?\}", re.S | re.M)
_QREG = re.compile(r"qreg\s+q\[(\d+)\]\s*;")
_STMT = re.compile(r"^\s*([a-z][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s+([^;]+);\s*$")
_NEGDIFF = re.compile(r"negdiff(\d+)_c([01]*)$")


def parse_qasm(text: str) -> Circuit:
    """Read a document written by :func:`export_qasm` back into a circuit."""
    m = _QREG.search(text)
    if m is None:
        raise ValueError("no 'qreg q[...]' declaration")
    circuit = Circuit(int(m.group(1)))
    body = _GATE_DEF.sub("", text[m.end():])
    for raw in body.splitlines():
        line = raw.split("//")[0].strip()
        if not line:
            continue
        st = _STMT.match(line)
        if st is None:
            raise ValueError(f"cannot parse statement {line!r}")
        name, param, args = st.groups()
        wires = [int(a) for a in re.findall(r"q\[(\d+)\]", args)]
        if name in ("h", "y", "z"):
            circuit.append(Gate(name.upper(), tuple(wires)))
        elif name == "u1":
            circuit.append(Gate("P", tuple(wires), param=float(param)))
        elif name in ("x", "cx", "ccx"):
            circuit.append(x_gate(wires[-1], wires[:-1]))
        elif name.startswith("mcx_"):
            pattern = [int(s) for s in name[4:]]
            circuit.append(x_gate(wires[-1], wires[:-1], pattern))
        elif (nd := _NEGDIFF.match(name)) is not None:
            t = int(nd.group(1))
            pattern = tuple(int(s) for s in nd.group(2))
            circuit.append(Gate("CU", tuple(wires[-t:]), tuple(wires[:-t]), pattern))
        else:
            raise ValueError(f"unknown gate {name!r}")
    return circuit
