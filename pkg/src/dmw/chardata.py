"""Data model and ingestion for block datasets.

Datasets are UTF-8 JSON files, one per block, shipped under
``dmw/data`` (overridable through the environment variable
``DMW_DATA_DIR``).  Top-level fields:

``group``            {"label", "family", "rank"} with family one of
                     D, 2D, BC, E6, 2E6, E7, E8, F4
``order``            factored polynomial string for |G(q)|
``block``            block label within the group
``ell_condition``    e.g. "(q^2+1)_ell > 5"
``defect``           declared Phi4-defect of the block
``kind``             "matrix" (default) or "chain" for cyclic blocks
``characters``       array of {name, degree?, series, family?, a?}
``columns``          array of {series, entries: [expression strings]}
                     (matrix kind; chains synthesise their columns)
``chain``            {"nodes": [...names, "O" once...],
                      "edge_series": [...]} for chain kind
``params``           map unknown -> {min, max}
``published_assignment``  a published-table-consistent point of the unknowns
``constraints``      array of constraint records (see ConstraintSpec)
``virtual_chars``    map name -> {entries, sign, source}
``levis``            array of {name, rows, pims, restriction, assign?}

Every invariant that can be checked at load time is checked here, with
row/column coordinates in the error messages.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .paramexpr import ParamExpr, parse_expr
from .qpoly import CycloPoly, parse_poly
from . import symbols

DATA_ENV = "DMW_DATA_DIR"

CLASSICAL_FAMILIES = {"D", "2D", "BC"}
FAMILY_POSITIVE_ROOTS = {
    "D": lambda n: n * (n - 1),
    "2D": lambda n: n * (n - 1),
    "BC": lambda n: n * n,
    "E6": lambda n: 36,
    "2E6": lambda n: 36,
    "E7": lambda n: 63,
    "E8": lambda n: 120,
    "F4": lambda n: 24,
}

# cuspidal-series label prefixes and the extra symbol defect they carry
SERIES_PREFIXES = {"D4:": 4, "C2:": 2, "B2:": 2}


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class GroupInfo:
    label: str
    family: str
    rank: int
    order: CycloPoly

    @property
    def weyl_generators(self) -> int:
        return self.rank

    @property
    def positive_roots(self) -> int:
        return FAMILY_POSITIVE_ROOTS[self.family](self.rank)

    @property
    def sylow_phi4(self) -> int:
        return self.order.phi_exp(4)


@dataclass(frozen=True)
class UnipotentCharacter:
    name: str
    series: str
    degree: CycloPoly | None = None
    a_value: int | None = None
    family: str = ""

    def split_prefix(self) -> tuple[str | None, str]:
        for prefix in SERIES_PREFIXES:
            if self.name.startswith(prefix):
                return prefix, self.name[len(prefix):]
        return None, self.name


@dataclass(frozen=True)
class Column:
    series: str
    entries: tuple[ParamExpr, ...]


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str  # nonneg | equal_zero | at_least | sign_of_pim_coords | brauer_nonneg | degree_positivity
    source: str
    tier: str = "proved"  # proved | p_gt_5 | conjectural
    expr: ParamExpr | None = None
    k: int | None = None
    virtual: str | None = None
    columns: tuple[int, ...] | None = None  # 1-based column indices
    q_samples: tuple[int, ...] | None = None


@dataclass(frozen=True)
class VirtualChar:
    entries: tuple[int, ...]
    sign: int
    source: str


@dataclass(frozen=True)
class LeviData:
    name: str
    rows: tuple[str, ...]
    pims: tuple[tuple[int, ...], ...]  # one inner tuple per PIM, over rows
    restriction: tuple[tuple[int, ...], ...]  # G-rows x L-rows


@dataclass
class BlockTable:
    name: str
    group: GroupInfo
    block: str
    ell_condition: str
    declared_defect: int
    kind: str
    rows: list[UnipotentCharacter]
    columns: list[Column]
    params: dict[str, tuple[int, int]] = field(default_factory=dict)
    published: dict[str, int] = field(default_factory=dict)
    constraints: list[ConstraintSpec] = field(default_factory=list)
    virtual_chars: dict[str, VirtualChar] = field(default_factory=dict)
    levis: list[LeviData] = field(default_factory=list)
    chain_nodes: tuple[str, ...] = ()
    notes: str = ""

    @property
    def size(self) -> int:
        return len(self.rows)

    def row_index(self, name: str) -> int:
        for i, r in enumerate(self.rows):
            if r.name == name:
                return i
        raise KeyError(f"{self.name}: no row named {name!r}")

    def entry(self, i: int, j: int) -> ParamExpr:
        return self.columns[j].entries[i]

    def matrix(self, assignment: dict[str, int] | None = None) -> list[list[int]]:
        """Integer matrix under an assignment binding all unknowns."""
        assignment = dict(assignment or {})
        out = []
        for i in range(self.size):
            row = []
            for j in range(self.size):
                e = self.entry(i, j).substitute(assignment)
                if not e.is_constant():
                    raise ValueError(
                        f"{self.name}: entry ({i + 1},{j + 1}) still has unknowns {sorted(e.unknowns())}"
                    )
                row.append(e.constant_value())
            out.append(row)
        return out

    def unknowns(self) -> set[str]:
        out: set[str] = set()
        for col in self.columns:
            for e in col.entries:
                out |= e.unknowns()
        return out


def _require(cond, msg: str):
    if not cond:
        raise DatasetError(msg)


def load_table(text: str, name: str = "<dataset>") -> BlockTable:
    """Parse and fully validate one dataset."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise DatasetError(f"{name}: not valid JSON: {err}") from err

    for key in ("group", "order", "block", "ell_condition", "defect", "characters"):
        _require(key in raw, f"{name}: missing field {key!r}")
    g = raw["group"]
    family = g["family"]
    _require(family in FAMILY_POSITIVE_ROOTS, f"{name}: unknown family {family!r}")
    try:
        order = parse_poly(raw["order"])
    except ValueError as err:
        raise DatasetError(f"{name}: bad order: {err}") from err
    group = GroupInfo(g["label"], family, int(g["rank"]), order)
    _require(
        order.qexp == group.positive_roots,
        f"{name}: order q-power {order.qexp} != number of positive roots {group.positive_roots}",
    )

    rows = []
    for i, rec in enumerate(raw["characters"]):
        deg = None
        if rec.get("degree"):
            try:
                deg = parse_poly(rec["degree"])
            except ValueError as err:
                raise DatasetError(f"{name}: row {i + 1}: bad degree: {err}") from err
        a = rec.get("a")
        if deg is not None:
            if a is None:
                a = deg.valuation_q()
            _require(
                a == deg.valuation_q(),
                f"{name}: row {i + 1} ({rec['name']}): a={a} but degree has valuation {deg.valuation_q()}",
            )
            for q0 in (2, 3, 5):
                v = deg.eval(q0)
                _require(
                    v.denominator == 1 and v > 0,
                    f"{name}: row {i + 1} ({rec['name']}): degree at q={q0} is {v}, not a positive integer",
                )
        rows.append(UnipotentCharacter(rec["name"], rec["series"], deg, a, rec.get("family", "")))

    kind = raw.get("kind", "matrix")
    params = {
        k: (int(v["min"]), int(v["max"])) for k, v in raw.get("params", {}).items()
    }
    for k, (lo, hi) in params.items():
        _require(0 <= lo <= hi, f"{name}: bad domain for {k}: {lo}..{hi}")
    published = {k: int(v) for k, v in raw.get("published_assignment", {}).items()}
    for k, v in published.items():
        _require(k in params, f"{name}: published assignment binds undeclared unknown {k!r}")
        lo, hi = params[k]
        _require(lo <= v <= hi, f"{name}: published {k}={v} outside domain {lo}..{hi}")

    chain_nodes: tuple[str, ...] = ()
    if kind == "chain":
        chain = raw["chain"]
        nodes = list(chain["nodes"])
        _require(nodes.count("O") == 1, f"{name}: chain must have exactly one exceptional node")
        _require(
            sorted(x for x in nodes if x != "O") == sorted(r.name for r in rows),
            f"{name}: chain nodes disagree with character rows",
        )
        edge_series = list(chain["edge_series"])
        _require(len(edge_series) == len(nodes) - 1, f"{name}: chain needs one series per edge")
        columns = []
        for e, series in enumerate(edge_series):
            a, b = nodes[e], nodes[e + 1]
            vec = [0] * len(rows)
            for endpoint in (a, b):
                if endpoint != "O":
                    vec[[r.name for r in rows].index(endpoint)] = 1
            columns.append(Column(series, tuple(ParamExpr.const(v) for v in vec)))
        chain_nodes = tuple(nodes)
    else:
        _require("columns" in raw, f"{name}: matrix dataset needs columns")
        columns = []
        for j, rec in enumerate(raw["columns"]):
            entries = []
            for i, s in enumerate(rec["entries"]):
                try:
                    entries.append(parse_expr(str(s)))
                except ValueError as err:
                    raise DatasetError(f"{name}: column {j + 1} row {i + 1}: {err}") from err
            _require(
                len(entries) == len(rows),
                f"{name}: column {j + 1} has {len(entries)} entries for {len(rows)} rows",
            )
            columns.append(Column(rec["series"], tuple(entries)))

    _require(
        len(columns) == len(rows),
        f"{name}: {len(rows)} rows but {len(columns)} columns (basic set must be square)",
    )

    table = BlockTable(
        name=name,
        group=group,
        block=raw["block"],
        ell_condition=raw["ell_condition"],
        declared_defect=int(raw["defect"]),
        kind=kind,
        rows=rows,
        columns=columns,
        params=params,
        published=published,
        chain_nodes=chain_nodes,
        notes=raw.get("notes", ""),
    )

    for vname, rec in raw.get("virtual_chars", {}).items():
        entries = tuple(int(x) for x in rec["entries"])
        _require(
            len(entries) == table.size,
            f"{name}: virtual character {vname!r} has {len(entries)} entries",
        )
        table.virtual_chars[vname] = VirtualChar(entries, int(rec["sign"]), rec.get("source", ""))

    for c, rec in enumerate(raw.get("constraints", [])):
        kind_c = rec["kind"]
        spec = ConstraintSpec(
            kind=kind_c,
            source=rec.get("source", ""),
            tier=rec.get("tier", "proved"),
            expr=parse_expr(rec["expr"]) if "expr" in rec else None,
            k=rec.get("k"),
            virtual=rec.get("virtual"),
            columns=tuple(rec["columns"]) if "columns" in rec else None,
            q_samples=tuple(rec["q_samples"]) if "q_samples" in rec else None,
        )
        if kind_c in ("nonneg", "equal_zero", "at_least"):
            _require(spec.expr is not None, f"{name}: constraint {c + 1} needs an expression")
        elif kind_c in ("sign_of_pim_coords", "brauer_nonneg"):
            _require(
                spec.virtual in table.virtual_chars,
                f"{name}: constraint {c + 1} references unknown virtual character {spec.virtual!r}",
            )
        elif kind_c == "degree_positivity":
            _require(spec.q_samples, f"{name}: constraint {c + 1} needs q_samples")
        else:
            raise DatasetError(f"{name}: constraint {c + 1}: unknown kind {kind_c!r}")
        table.constraints.append(spec)

    for rec in raw.get("levis", []):
        lrows = tuple(rec["rows"])
        pims = tuple(tuple(int(x) for x in col) for col in rec["pims"])
        restr = tuple(tuple(int(x) for x in row) for row in rec["restriction"])
        _require(
            all(len(p) == len(lrows) for p in pims),
            f"{name}: levi {rec['name']}: PIM vectors must match its rows",
        )
        _require(
            len(restr) == table.size and all(len(r) == len(lrows) for r in restr),
            f"{name}: levi {rec['name']}: restriction must be {table.size} x {len(lrows)}",
        )
        table.levis.append(LeviData(rec["name"], lrows, pims, restr))

    _validate_invariants(table)
    return table


def _validate_invariants(t: BlockTable):
    # unknown coverage
    undeclared = t.unknowns() - set(t.params)
    _require(not undeclared, f"{t.name}: entries use undeclared unknowns {sorted(undeclared)}")
    for spec in t.constraints:
        if spec.expr is not None:
            undeclared = spec.expr.unknowns() - set(t.params)
            _require(
                not undeclared,
                f"{t.name}: constraint uses undeclared unknowns {sorted(undeclared)}",
            )

    # triangularity (matrix datasets); above-diagonal entries may carry an
    # expression only if it vanishes at the published assignment
    if t.kind == "matrix":
        for j in range(t.size):
            diag = t.entry(j, j)
            _require(
                diag.is_constant() and diag.constant_value() == 1,
                f"{t.name}: diagonal not 1 at row {j + 1} ({t.rows[j].name})",
            )
            for i in range(j):
                e = t.entry(i, j)
                if e.is_zero():
                    continue
                _require(
                    not e.is_constant(),
                    f"{t.name}: nonzero entry above diagonal at ({i + 1},{j + 1})",
                )
                _require(
                    e.eval({k: t.published.get(k, 0) for k in e.unknowns()}) == 0,
                    f"{t.name}: above-diagonal entry at ({i + 1},{j + 1}) does not vanish "
                    f"at the published assignment",
                )

    # a-values weakly increasing where known
    known = [r.a_value for r in t.rows if r.a_value is not None]
    if len(known) == len(t.rows):
        for i in range(1, len(known)):
            _require(
                known[i] >= known[i - 1],
                f"{t.name}: a-values not sorted at row {i + 1} ({t.rows[i].name})",
            )

    # defect: Phi4 valuation of the order minus the minimal row valuation
    if all(r.degree is not None for r in t.rows):
        dec = t.group.sylow_phi4 - min(r.degree.phi_exp(4) for r in t.rows)
        _require(
            dec == t.declared_defect,
            f"{t.name}: computed defect {dec} != declared {t.declared_defect}",
        )


def block_defect(t: BlockTable) -> int:
    """Phi4-defect of the block; computed from degrees when they are all
    present, otherwise the declared value (checked against degrees at load
    time whenever possible)."""
    if all(r.degree is not None for r in t.rows):
        return t.group.sylow_phi4 - min(r.degree.phi_exp(4) for r in t.rows)
    return t.declared_defect


def series_census(t: BlockTable) -> dict[str, int]:
    census: dict[str, int] = {}
    for col in t.columns:
        census[col.series] = census.get(col.series, 0) + 1
    return census


def census_text(census: dict[str, int]) -> str:
    """Stable one-line census: ps first, named series, then dot-labelled
    series, cuspidal last."""

    def key(item):
        label = item[0]
        if label in ("ps", "p"):
            group = 0
        elif label == "c":
            group = 3
        elif label.startswith("."):
            group = 2
        else:
            group = 1
        return (group, label)

    return " ".join(f"{k}:{v}" for k, v in sorted(census.items(), key=key))


def recompute_degree(t: BlockTable, i: int) -> CycloPoly | None:
    """Degree of row i from the symbol machinery; None when the label is
    outside its scope (exceptional groups, cuspidal-series labels, bare
    cuspidal names)."""
    if t.group.family not in CLASSICAL_FAMILIES:
        return None
    row = t.rows[i]
    prefix, body = row.split_prefix()
    if prefix is not None:
        return None
    if "." not in body and body[-1:] not in ("+", "-"):
        return None  # a cuspidal character's own name, dataset-supplied
    gtype = t.group.family
    bp = symbols.parse_label(body, gtype, t.group.rank)
    return symbols.generic_degree(bp)


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def dataset_names() -> list[str]:
    return sorted(p.stem for p in data_dir().glob("*.json"))


def load_dataset(name: str) -> BlockTable:
    path = data_dir() / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"no dataset {name!r} under {data_dir()}")
    return load_table(path.read_text(encoding="utf-8"), name=name)


def load_path(path: str | Path) -> BlockTable:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    return load_table(p.read_text(encoding="utf-8"), name=p.stem)
