"""Standalone GridFileV1 parser.

The format (produced by the torharm CLI, consumed here with no library
linkage):

    # torharm-grid v1
    # rho_min rho_max n_rho z_min z_max n_z a
    rho,z,value,flag          (n_rho * n_z rows, rho-major)

Flags are OK, SLOW, DIV, INSIDE, SING.  Parse failures report the 1-based
line number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FLAGS = ("OK", "SLOW", "DIV", "INSIDE", "SING")

__all__ = ["Grid", "GridParseError", "load_grid", "parse_grid"]


class GridParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Grid:
    rho_min: float
    rho_max: float
    n_rho: int
    z_min: float
    z_max: float
    n_z: int
    a: float
    values: np.ndarray  # (n_rho, n_z) float
    flags: np.ndarray   # (n_rho, n_z) int index into FLAGS

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.rho_min, self.rho_max, self.n_rho),
                np.linspace(self.z_min, self.z_max, self.n_z))


def parse_grid(text: str) -> Grid:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "# torharm-grid v1":
        raise GridParseError(1, "expected header '# torharm-grid v1'")
    if len(lines) < 2:
        raise GridParseError(2, "missing grid-extent header line")
    head = lines[1].split()
    if len(head) != 8 or head[0] != "#":
        raise GridParseError(2, "expected '# rho_min rho_max n_rho z_min z_max n_z a'")
    try:
        rho_min, rho_max = float(head[1]), float(head[2])
        n_rho = int(head[3])
        z_min, z_max = float(head[4]), float(head[5])
        n_z = int(head[6])
        a = float(head[7])
    except ValueError as exc:
        raise GridParseError(2, f"bad extent header: {exc}") from None
    rows = [(i, ln) for i, ln in enumerate(lines[2:], start=3) if ln.strip()]
    if len(rows) != n_rho * n_z:
        raise GridParseError(len(lines), f"expected {n_rho * n_z} data rows, found {len(rows)}")
    values = np.empty((n_rho, n_z))
    flags = np.empty((n_rho, n_z), dtype=np.int64)
    for idx, (line_no, ln) in enumerate(rows):
        parts = ln.split(",")
        if len(parts) != 4:
            raise GridParseError(line_no, f"expected 4 comma-separated fields, got {len(parts)}")
        i, j = divmod(idx, n_z)
        try:
            values[i, j] = float(parts[2])
        except ValueError:
            raise GridParseError(line_no, f"bad value field {parts[2]!r}") from None
        flag = parts[3].strip()
        if flag not in FLAGS:
            raise GridParseError(line_no, f"unknown flag {flag!r}")
        flags[i, j] = FLAGS.index(flag)
    values.setflags(write=False)
    flags.setflags(write=False)
    return Grid(rho_min, rho_max, n_rho, z_min, z_max, n_z, a, values, flags)


def load_grid(path: str) -> Grid:
    with open(path) as fh:
        return parse_grid(fh.read())
