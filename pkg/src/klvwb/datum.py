"""Combinatorial orbit datums: the input data for every computation here.

A datum records a stratified picture as pure combinatorics: a Weyl group, a
poset of orbits with dimensions, parameters (orbit, local system) indexing
basis vectors, and one case descriptor per (simple reflection, parameter)
telling how the generator acts.  The four descriptor families G/U/T/N match
the possible fiber decompositions of a minimal-parabolic line bundle; the
ExplicitRow escape hatch keeps exotic configurations expressible.

Orbit data is input, never derived from group pairs: datums are loaded from
JSON files or produced by the builtin generators (two rank-one symmetric
pictures, and the group-times-group family 'hecke-regular:<type>' whose
module is the Hecke algebra itself).

validate_datum is total and side-effect free; each named check is reported
individually and downstream modules refuse datums whose report failed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import coxeter as cox
from . import hecke
from .errors import (
    DatumError,
    DatumFormatError,
    DatumInvalid,
    MissingCostandard,
    MissingDescriptor,
    UnsupportedType,
)
from .laurent import (
    ONE,
    Q,
    LaurentPoly,
    PoincareSeries,
    parse_poly,
    parse_series,
    render_poly,
    series_to_json,
)

BUILTIN_NAMES = (
    "hecke-regular:A1",
    "hecke-regular:A2",
    "hecke-regular:B2",
    "hecke-regular:A3",
    "sl2-T",
    "sl2-N",
)


@dataclass(frozen=True)
class OrbitInfo:
    id: str
    dim: int
    closed: bool


@dataclass(frozen=True)
class Parameter:
    id: str
    orbit: str
    local_system: str
    dim: int


@dataclass(frozen=True)
class CompactG:
    case = "CompactG"


@dataclass(frozen=True)
class AscentU:
    up: str
    case = "AscentU"


@dataclass(frozen=True)
class DescentU:
    down: str
    case = "DescentU"


@dataclass(frozen=True)
class AscentT:
    cross: str
    up: str
    case = "AscentT"


@dataclass(frozen=True)
class DescentT:
    downs: tuple[str, str]
    case = "DescentT"


@dataclass(frozen=True)
class DescentTNonParity:
    case = "DescentTNonParity"


@dataclass(frozen=True)
class AscentN:
    ups: tuple[str, str]
    case = "AscentN"


@dataclass(frozen=True)
class DescentN:
    partner: str
    down: str
    case = "DescentN"


@dataclass(frozen=True)
class ExplicitRow:
    coeffs: tuple[tuple[str, LaurentPoly], ...]
    case = "ExplicitRow"

    def coeff_map(self) -> dict[str, LaurentPoly]:
        return dict(self.coeffs)


ASCENT_CASES = (AscentU, AscentT, AscentN)


class OrbitDatum:
    """Immutable-by-convention container; validate before computing."""

    def __init__(
        self,
        name,
        coxeter_spec,
        orbits,
        closure_pairs,
        params,
        actions,
        costandard,
        poincare,
    ):
        self.name = name
        self.coxeter_spec = coxeter_spec
        self.coxeter = (
            cox.build_system(coxeter_spec["type"])
            if "type" in coxeter_spec
            else cox.build_system(coxeter_spec["cartan"])
        )
        self.orbits = tuple(orbits)
        self.closure_pairs = tuple(closure_pairs)
        self.params = tuple(params)
        self.actions = actions
        self.costandard = costandard
        self.poincare = poincare

        self.orbit_by_id = {o.id: o for o in self.orbits}
        self.param_by_id = {p.id: p for p in self.params}
        # canonical basis order: by (dim, id)
        self.basis = tuple(sorted(self.params, key=lambda p: (p.dim, p.id)))
        self.basis_index = {p.id: i for i, p in enumerate(self.basis)}
        self._up = self._reachability()
        self._cache: dict = {}

    def _reachability(self):
        adj: dict[str, set[str]] = {o.id: set() for o in self.orbits}
        for lo, hi in self.closure_pairs:
            adj[lo].add(hi)
        up = {}
        for start in adj:
            seen = {start}
            stack = [start]
            while stack:
                for nxt in adj[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            up[start] = frozenset(seen)
        return up

    def leq_orbits(self, a: str, b: str) -> bool:
        """Closure order: a below b (reflexive-transitive hull of the pairs)."""
        return b in self._up[a]

    def params_on(self, orbit_id: str):
        return tuple(p for p in self.params if p.orbit == orbit_id)

    def descriptor(self, s: int, param_id: str):
        return self.actions.get(s, {}).get(param_id)

    def to_jsonable(self) -> dict:
        out = {
            "name": self.name,
            "coxeter": self.coxeter_spec,
            "orbits": [
                {"id": o.id, "dim": o.dim, "closed": o.closed} for o in self.orbits
            ],
            "closure": [list(p) for p in self.closure_pairs],
            "params": [
                {"id": p.id, "orbit": p.orbit, "local_system": p.local_system}
                for p in self.params
            ],
            "actions": {
                str(s + 1): {
                    pid: _descriptor_to_json(desc)
                    for pid, desc in sorted(self.actions[s].items())
                }
                for s in sorted(self.actions)
            },
            "poincare": {
                pid: series_to_json(self.poincare[pid]) for pid in sorted(self.poincare)
            },
        }
        if self.costandard is not None:
            out["costandard"] = {
                col: {row: render_poly(p) for row, p in sorted(rows.items())}
                for col, rows in sorted(self.costandard.items())
            }
        return out

    def __eq__(self, other):
        return isinstance(other, OrbitDatum) and self.to_jsonable() == other.to_jsonable()

    def __repr__(self):
        return f"OrbitDatum({self.name!r}, {len(self.params)} parameters)"


def _descriptor_to_json(desc) -> dict:
    if isinstance(desc, CompactG):
        return {"case": "CompactG"}
    if isinstance(desc, AscentU):
        return {"case": "AscentU", "up": desc.up}
    if isinstance(desc, DescentU):
        return {"case": "DescentU", "down": desc.down}
    if isinstance(desc, AscentT):
        return {"case": "AscentT", "cross": desc.cross, "up": desc.up}
    if isinstance(desc, DescentT):
        return {"case": "DescentT", "downs": list(desc.downs)}
    if isinstance(desc, DescentTNonParity):
        return {"case": "DescentTNonParity"}
    if isinstance(desc, AscentN):
        return {"case": "AscentN", "ups": list(desc.ups)}
    if isinstance(desc, DescentN):
        return {"case": "DescentN", "partner": desc.partner, "down": desc.down}
    if isinstance(desc, ExplicitRow):
        return {
            "case": "ExplicitRow",
            "coeffs": {pid: render_poly(p) for pid, p in desc.coeffs},
        }
    raise DatumError(f"unknown descriptor {desc!r}")


def _descriptor_from_json(obj, where: str):
    if not isinstance(obj, dict) or "case" not in obj:
        raise DatumFormatError(f"{where}: descriptor must be an object with 'case'")
    case = obj["case"]
    try:
        if case == "CompactG":
            return CompactG()
        if case == "AscentU":
            return AscentU(up=obj["up"])
        if case == "DescentU":
            return DescentU(down=obj["down"])
        if case == "AscentT":
            return AscentT(cross=obj["cross"], up=obj["up"])
        if case == "DescentT":
            downs = obj["downs"]
            if not isinstance(downs, list) or len(downs) != 2:
                raise DatumFormatError(f"{where}: 'downs' must list two parameters")
            return DescentT(downs=(downs[0], downs[1]))
        if case == "DescentTNonParity":
            return DescentTNonParity()
        if case == "AscentN":
            ups = obj["ups"]
            if not isinstance(ups, list) or len(ups) != 2:
                raise DatumFormatError(f"{where}: 'ups' must list two parameters")
            return AscentN(ups=(ups[0], ups[1]))
        if case == "DescentN":
            return DescentN(partner=obj["partner"], down=obj["down"])
        if case == "ExplicitRow":
            coeffs = obj["coeffs"]
            if not isinstance(coeffs, dict):
                raise DatumFormatError(f"{where}: 'coeffs' must be an object")
            return ExplicitRow(
                coeffs=tuple(
                    (pid, parse_poly(text)) for pid, text in sorted(coeffs.items())
                )
            )
    except KeyError as exc:
        raise DatumFormatError(f"{where}: descriptor missing field {exc}") from None
    raise DatumFormatError(f"{where}: unknown descriptor case {case!r}")


def load_datum(source) -> OrbitDatum:
    """Parse and materialize a datum from JSON text (or a parsed dict).

    Schema-level problems (malformed fields, duplicate ids, dangling
    references, missing action rows) raise here; semantic problems are the
    business of validate_datum.
    """
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise DatumFormatError(f"invalid JSON: {exc}") from None
    else:
        obj = source
    if not isinstance(obj, dict):
        raise DatumFormatError("datum must be a JSON object")

    for key in ("name", "coxeter", "orbits", "closure", "params", "actions", "poincare"):
        if key not in obj:
            raise DatumFormatError(f"missing top-level key {key!r}")

    spec = obj["coxeter"]
    if not isinstance(spec, dict) or not ({"type", "cartan"} & set(spec)):
        raise DatumFormatError("'coxeter' must carry 'type' or 'cartan'")
    try:
        system = (
            cox.build_system(spec["type"]) if "type" in spec else cox.build_system(spec["cartan"])
        )
    except UnsupportedType:
        raise

    orbits = []
    seen = set()
    for i, o in enumerate(obj["orbits"]):
        try:
            info = OrbitInfo(id=o["id"], dim=int(o["dim"]), closed=bool(o["closed"]))
        except (KeyError, TypeError) as exc:
            raise DatumFormatError(f"orbits[{i}]: bad entry ({exc})") from None
        if info.dim < 0:
            raise DatumFormatError(f"orbits[{i}]: negative dimension")
        if info.id in seen:
            raise DatumFormatError(f"orbits[{i}]: duplicate orbit id {info.id!r}")
        seen.add(info.id)
        orbits.append(info)
    orbit_by_id = {o.id: o for o in orbits}

    closure = []
    for i, pair in enumerate(obj["closure"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DatumFormatError(f"closure[{i}]: must be [lower, upper]")
        lo, hi = pair
        for oid in (lo, hi):
            if oid not in orbit_by_id:
                raise DatumFormatError(f"closure[{i}]: unknown orbit {oid!r}")
        closure.append((lo, hi))

    params = []
    seen_ids: set[str] = set()
    seen_pairs = set()
    for i, p in enumerate(obj["params"]):
        try:
            pid, porb, psys = p["id"], p["orbit"], p["local_system"]
        except KeyError as exc:
            raise DatumFormatError(f"params[{i}]: missing field {exc}") from None
        if pid in seen_ids:
            raise DatumFormatError(f"params[{i}]: duplicate parameter id {pid!r}")
        if porb not in orbit_by_id:
            raise DatumFormatError(f"params[{i}]: unknown orbit {porb!r}")
        if (porb, psys) in seen_pairs:
            raise DatumFormatError(
                f"params[{i}]: duplicate (orbit, local_system) pair ({porb!r}, {psys!r})"
            )
        seen_ids.add(pid)
        seen_pairs.add((porb, psys))
        params.append(
            Parameter(id=pid, orbit=porb, local_system=psys, dim=orbit_by_id[porb].dim)
        )
    param_ids = {p.id for p in params}

    actions_in = obj["actions"]
    if not isinstance(actions_in, dict):
        raise DatumFormatError("'actions' must be an object keyed by generator index")
    expected_keys = {str(s + 1) for s in range(system.rank)}
    if set(actions_in) != expected_keys:
        raise DatumFormatError(
            f"'actions' keys must be exactly {sorted(expected_keys)}, "
            f"got {sorted(actions_in)}"
        )
    actions: dict[int, dict] = {}
    for key, rows in actions_in.items():
        s = int(key) - 1
        if not isinstance(rows, dict):
            raise DatumFormatError(f"actions[{key}] must be an object keyed by parameter")
        table = {}
        for pid, desc_obj in rows.items():
            if pid not in param_ids:
                raise DatumFormatError(f"actions[{key}][{pid!r}]: unknown parameter")
            desc = _descriptor_from_json(desc_obj, f"actions[{key}][{pid!r}]")
            for target in _descriptor_targets(desc):
                if target not in param_ids:
                    raise DatumFormatError(
                        f"actions[{key}][{pid!r}]: dangling parameter {target!r}"
                    )
            table[pid] = desc
        missing = param_ids - set(table)
        if missing:
            raise MissingDescriptor(
                f"actions[{key}]: no descriptor for parameter(s) "
                + ", ".join(sorted(missing))
            )
        actions[s] = table

    costandard = None
    if "costandard" in obj:
        costandard = {}
        for col, rows in obj["costandard"].items():
            if col not in param_ids:
                raise DatumFormatError(f"costandard[{col!r}]: unknown parameter")
            if not isinstance(rows, dict):
                raise DatumFormatError(f"costandard[{col!r}]: must be an object")
            entry = {}
            for row, text in rows.items():
                if row not in param_ids:
                    raise DatumFormatError(
                        f"costandard[{col!r}][{row!r}]: unknown parameter"
                    )
                poly = parse_poly(text)
                if not poly.is_zero():
                    entry[row] = poly
            costandard[col] = entry
        missing = param_ids - set(costandard)
        if missing:
            raise DatumFormatError(
                "costandard table incomplete; missing column(s) "
                + ", ".join(sorted(missing))
            )

    poincare = {}
    for pid, sobj in obj["poincare"].items():
        if pid not in param_ids:
            raise DatumFormatError(f"poincare[{pid!r}]: unknown parameter")
        poincare[pid] = parse_series(sobj)
    missing = param_ids - set(poincare)
    if missing:
        raise DatumFormatError(
            "poincare table incomplete; missing " + ", ".join(sorted(missing))
        )

    return OrbitDatum(
        name=obj["name"],
        coxeter_spec={"type": spec["type"]} if "type" in spec else {"cartan": spec["cartan"]},
        orbits=orbits,
        closure_pairs=closure,
        params=params,
        actions=actions,
        costandard=costandard,
        poincare=poincare,
    )


def dump_datum(d: OrbitDatum) -> str:
    return json.dumps(d.to_jsonable(), indent=2, sort_keys=False) + "\n"


def _descriptor_targets(desc):
    if isinstance(desc, AscentU):
        return (desc.up,)
    if isinstance(desc, DescentU):
        return (desc.down,)
    if isinstance(desc, AscentT):
        return (desc.cross, desc.up)
    if isinstance(desc, DescentT):
        return desc.downs
    if isinstance(desc, AscentN):
        return desc.ups
    if isinstance(desc, DescentN):
        return (desc.partner, desc.down)
    if isinstance(desc, ExplicitRow):
        return tuple(pid for pid, _ in desc.coeffs)
    return ()


def _ascent_target_orbits(d: OrbitDatum, desc) -> set[str]:
    """Orbits this descriptor explicitly ascends to (ExplicitRow aside)."""
    if isinstance(desc, AscentU):
        return {d.param_by_id[desc.up].orbit}
    if isinstance(desc, AscentT):
        return {d.param_by_id[desc.up].orbit}
    if isinstance(desc, AscentN):
        return {d.param_by_id[u].orbit for u in desc.ups}
    return set()


def s_star(d: OrbitDatum, s: int, orbit_id: str) -> str:
    """The ascent operation on orbits for one simple reflection.

    Returns the common target orbit of the ascent descriptors on orbit_id,
    or orbit_id itself if no parameter on it ascends.
    """
    if orbit_id not in d.orbit_by_id:
        raise DatumError(f"unknown orbit {orbit_id!r}")
    base_dim = d.orbit_by_id[orbit_id].dim
    targets = set()
    for p in d.params_on(orbit_id):
        desc = d.descriptor(s, p.id)
        if desc is None:
            continue
        if isinstance(desc, ExplicitRow):
            ups = {
                d.param_by_id[pid].orbit
                for pid, c in desc.coeffs
                if not c.is_zero() and d.param_by_id[pid].dim > base_dim
            }
            targets |= ups
        else:
            targets |= _ascent_target_orbits(d, desc)
    if not targets:
        return orbit_id
    if len(targets) > 1:
        raise DatumError(
            f"inconsistent ascent targets from orbit {orbit_id!r} under s{s + 1}: "
            + ", ".join(sorted(targets))
        )
    return next(iter(targets))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


class ValidationReport:
    def __init__(self, checks):
        self.checks = list(checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_names(self):
        return [c.name for c in self.checks if not c.passed]

    def lines(self):
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            suffix = f": {c.detail}" if c.detail else ""
            out.append(f"{status} {c.name}{suffix}")
        return out


def validate_datum(d: OrbitDatum) -> ValidationReport:
    """Run the named semantic checks; the report is cached on the datum."""
    from . import hmodule  # deferred: hmodule needs the types above

    checks = []

    # (1) every parameter has a row for every s, and each non-closed orbit is
    # reachable from the closed orbits by a chain of ascents
    problems = []
    for s in range(d.coxeter.rank):
        rows = d.actions.get(s, {})
        for p in d.params:
            if p.id not in rows:
                problems.append(f"missing descriptor ({p.id}, s{s + 1})")
    if not problems:
        star_errors = set()
        reachable = {o.id for o in d.orbits if o.closed}
        changed = True
        while changed:
            changed = False
            for s in range(d.coxeter.rank):
                for v in list(reachable):
                    try:
                        w = s_star(d, s, v)
                    except DatumError as exc:
                        star_errors.add(str(exc))
                        continue
                    if w not in reachable:
                        reachable.add(w)
                        changed = True
        problems.extend(sorted(star_errors))
        unreached = sorted(o.id for o in d.orbits if o.id not in reachable)
        if unreached:
            problems.append("orbit(s) unreachable by ascents: " + ", ".join(unreached))
    checks.append(
        CheckResult("thm-order-reachability", not problems, "; ".join(problems))
    )
    if problems and any("missing descriptor" in p for p in problems):
        # remaining checks assume a complete action table
        checks.append(CheckResult("sstar-monotone", False, "skipped: incomplete actions"))
        checks.append(CheckResult("quadratic-relation", False, "skipped: incomplete actions"))
        checks.append(CheckResult("braid-relations", False, "skipped: incomplete actions"))
        checks.append(CheckResult("link-mirroring", False, "skipped: incomplete actions"))
        checks.append(CheckResult("costandard-involution", False, "skipped: incomplete actions"))
        checks.append(_check_dims(d))
        checks.append(_check_poincare(d))
        report = ValidationReport(checks)
        d._cache["validation"] = report
        return report

    # (2) s-star is monotone and idempotent on orbits
    problems = []
    for s in range(d.coxeter.rank):
        for o in d.orbits:
            try:
                w = s_star(d, s, o.id)
            except DatumError as exc:
                problems.append(str(exc))
                continue
            if not d.leq_orbits(o.id, w):
                problems.append(f"s{s + 1}*{o.id} = {w} not above {o.id} in closure order")
            try:
                ww = s_star(d, s, w)
            except DatumError as exc:
                problems.append(str(exc))
                continue
            if ww != w:
                problems.append(f"s{s + 1}* not idempotent at {o.id}: {w} -> {ww}")
    checks.append(CheckResult("sstar-monotone", not problems, "; ".join(problems)))

    # (3) quadratic relation for each generator matrix
    table = hmodule.build_action_table(d)
    problems = []
    for s in range(d.coxeter.rank):
        for p in d.params:
            v = hmodule.basis_vector(d, p.id)
            tsv = table.apply(s, v)
            lhs = table.apply(s, tsv)
            rhs = tsv.scale(Q - ONE) + v.scale(Q)
            if lhs != rhs:
                problems.append(f"(T+1)(T-q) != 0 at (s{s + 1}, {p.id})")
    checks.append(CheckResult("quadratic-relation", not problems, "; ".join(problems)))

    # (4) braid relations for all generator pairs
    problems = []
    for s in range(d.coxeter.rank):
        for t in range(s + 1, d.coxeter.rank):
            m = d.coxeter.coxeter_m(s, t)
            for p in d.params:
                v = hmodule.basis_vector(d, p.id)
                left = right = v
                for k in range(m):
                    left = table.apply(s if k % 2 == 0 else t, left)
                    right = table.apply(t if k % 2 == 0 else s, right)
                if left != right:
                    problems.append(f"braid (s{s + 1}, s{t + 1}) fails at {p.id}")
    checks.append(CheckResult("braid-relations", not problems, "; ".join(problems)))

    # (5) link mirroring between ascent and descent descriptors
    problems = _check_mirroring(d)
    checks.append(CheckResult("link-mirroring", not problems, "; ".join(problems)))

    # (6) costandard table (given or derived) defines an involution
    checks.append(_check_costandard(d))

    # (7) dims consistent with closure order, closed orbits minimal
    checks.append(_check_dims(d))

    # supplementary schema invariant: stabilizer series start at 1
    checks.append(_check_poincare(d))

    report = ValidationReport(checks)
    d._cache["validation"] = report
    return report


def _check_mirroring(d: OrbitDatum):
    problems = []
    for s in range(d.coxeter.rank):
        for p in d.params:
            desc = d.descriptor(s, p.id)
            pid = p.id

            def _mirror(target, expected, kind):
                got = d.descriptor(s, target)
                if got != expected:
                    problems.append(
                        f"(s{s + 1}, {pid}) {kind} link to {target} not mirrored"
                    )

            if isinstance(desc, AscentU):
                up = d.param_by_id[desc.up]
                if up.dim <= p.dim:
                    problems.append(f"(s{s + 1}, {pid}) ascent target {up.id} not higher")
                _mirror(desc.up, DescentU(down=pid), "AscentU")
            elif isinstance(desc, DescentU):
                down = d.param_by_id[desc.down]
                if down.dim >= p.dim:
                    problems.append(f"(s{s + 1}, {pid}) descent target {down.id} not lower")
                _mirror(desc.down, AscentU(up=pid), "DescentU")
            elif isinstance(desc, AscentT):
                cross = d.param_by_id[desc.cross]
                up = d.param_by_id[desc.up]
                if desc.cross == pid:
                    problems.append(f"(s{s + 1}, {pid}) AscentT cross-links to itself")
                if cross.dim != p.dim:
                    problems.append(f"(s{s + 1}, {pid}) cross {cross.id} has different dim")
                if up.dim <= p.dim:
                    problems.append(f"(s{s + 1}, {pid}) ascent target {up.id} not higher")
                _mirror(desc.cross, AscentT(cross=pid, up=desc.up), "AscentT-cross")
                got = d.descriptor(s, desc.up)
                if not (isinstance(got, DescentT) and set(got.downs) == {pid, desc.cross}):
                    problems.append(
                        f"(s{s + 1}, {pid}) AscentT up link to {desc.up} not mirrored"
                    )
            elif isinstance(desc, DescentT):
                d1, d2 = desc.downs
                if d1 == d2:
                    problems.append(f"(s{s + 1}, {pid}) DescentT downs coincide")
                for lo in desc.downs:
                    if d.param_by_id[lo].dim >= p.dim:
                        problems.append(f"(s{s + 1}, {pid}) descent target {lo} not lower")
                _mirror(d1, AscentT(cross=d2, up=pid), "DescentT")
                _mirror(d2, AscentT(cross=d1, up=pid), "DescentT")
            elif isinstance(desc, AscentN):
                u1, u2 = desc.ups
                if u1 == u2:
                    problems.append(f"(s{s + 1}, {pid}) AscentN ups coincide")
                for u in desc.ups:
                    if d.param_by_id[u].dim <= p.dim:
                        problems.append(f"(s{s + 1}, {pid}) ascent target {u} not higher")
                if d.param_by_id[u1].orbit != d.param_by_id[u2].orbit:
                    problems.append(f"(s{s + 1}, {pid}) AscentN ups on different orbits")
                _mirror(u1, DescentN(partner=u2, down=pid), "AscentN")
                _mirror(u2, DescentN(partner=u1, down=pid), "AscentN")
            elif isinstance(desc, DescentN):
                partner = d.param_by_id[desc.partner]
                if desc.partner == pid:
                    problems.append(f"(s{s + 1}, {pid}) DescentN partners itself")
                if partner.orbit != p.orbit:
                    problems.append(f"(s{s + 1}, {pid}) partner on a different orbit")
                if d.param_by_id[desc.down].dim >= p.dim:
                    problems.append(f"(s{s + 1}, {pid}) descent target {desc.down} not lower")
                _mirror(desc.partner, DescentN(partner=pid, down=desc.down), "DescentN")
                got = d.descriptor(s, desc.down)
                if not (isinstance(got, AscentN) and set(got.ups) == {pid, desc.partner}):
                    problems.append(
                        f"(s{s + 1}, {pid}) DescentN down link to {desc.down} not mirrored"
                    )
    return problems


def _check_costandard(d: OrbitDatum) -> CheckResult:
    from . import hmodule

    try:
        table, origin = hmodule.costandard_table(d)
    except MissingCostandard as exc:
        return CheckResult(
            "costandard-involution",
            True,
            f"costandard absent and not derivable ({exc}); duality operations disabled",
        )
    except DatumError as exc:
        return CheckResult("costandard-involution", False, str(exc))
    problems = []
    for col, rows in table.items():
        cdim = d.param_by_id[col].dim
        if rows.get(col) != ONE:
            problems.append(f"n[{col}] diagonal is not 1")
        for row in rows:
            if row != col and d.param_by_id[row].dim >= cdim:
                problems.append(f"n[{col}] has non-lower term at {row}")
    if not problems:
        for p in d.params:
            v = hmodule.basis_vector(d, p.id)
            bb = hmodule.beta(hmodule.beta(v, d), d)
            if bb != v:
                problems.append(f"beta^2 != id at {p.id}")
    detail = "; ".join(problems) if problems else f"table {origin}"
    return CheckResult("costandard-involution", not problems, detail)


def _check_dims(d: OrbitDatum) -> CheckResult:
    problems = []
    for lo, hi in d.closure_pairs:
        if lo == hi:
            continue
        if d.orbit_by_id[lo].dim >= d.orbit_by_id[hi].dim:
            problems.append(f"closure pair ({lo}, {hi}) does not increase dim")
    for o in d.orbits:
        if o.closed:
            below = [
                x.id
                for x in d.orbits
                if x.id != o.id and d.leq_orbits(x.id, o.id)
            ]
            if below:
                problems.append(f"closed orbit {o.id} is not minimal (above {below[0]})")
    return CheckResult("dim-closure-consistency", not problems, "; ".join(problems))


def _check_poincare(d: OrbitDatum) -> CheckResult:
    problems = []
    for pid, series in d.poincare.items():
        if series.coefficient(0) != 1:
            problems.append(f"poincare[{pid}] constant term is not 1")
        lo = min(series.num._c, default=0)
        if lo < 0:
            problems.append(f"poincare[{pid}] has negative exponents")
    return CheckResult("poincare-normalization", not problems, "; ".join(problems))


def ensure_valid(d: OrbitDatum) -> None:
    """Gate for downstream modules: validate once, then raise on failure."""
    report = d._cache.get("validation")
    if report is None:
        report = validate_datum(d)
    if not report.ok:
        raise DatumInvalid(report.failed_names())


def builtin_datum(name: str) -> OrbitDatum:
    """Builtin generators: 'sl2-T', 'sl2-N' and 'hecke-regular:<type>'."""
    if name == "sl2-T":
        return _sl2_t()
    if name == "sl2-N":
        return _sl2_n()
    if name.startswith("hecke-regular:"):
        return _hecke_regular(name.split(":", 1)[1])
    raise UnsupportedType(
        f"unknown builtin {name!r}; available: " + ", ".join(BUILTIN_NAMES)
    )


def _series(num: str, den) -> PoincareSeries:
    return PoincareSeries(parse_poly(num), den)


def _sl2_t() -> OrbitDatum:
    one_minus_q = parse_poly("1-q")
    return OrbitDatum(
        name="sl2-T",
        coxeter_spec={"type": "A1"},
        orbits=[
            OrbitInfo("0", 0, True),
            OrbitInfo("inf", 0, True),
            OrbitInfo("w", 1, False),
        ],
        closure_pairs=[("0", "w"), ("inf", "w")],
        params=[
            Parameter("p0", "0", "triv", 0),
            Parameter("pInf", "inf", "triv", 0),
            Parameter("wt", "w", "triv", 1),
            Parameter("ws", "w", "sign", 1),
        ],
        actions={
            0: {
                "p0": AscentT(cross="pInf", up="wt"),
                "pInf": AscentT(cross="p0", up="wt"),
                "wt": DescentT(downs=("p0", "pInf")),
                "ws": DescentTNonParity(),
            }
        },
        costandard={
            "p0": {"p0": ONE},
            "pInf": {"pInf": ONE},
            "wt": {"wt": ONE, "p0": one_minus_q, "pInf": one_minus_q},
            "ws": {"ws": ONE},
        },
        poincare={
            "p0": _series("1", [1]),
            "pInf": _series("1", [1]),
            "wt": _series("1", []),
            "ws": _series("1", []),
        },
    )


def _sl2_n() -> OrbitDatum:
    one_minus_q = parse_poly("1-q")
    return OrbitDatum(
        name="sl2-N",
        coxeter_spec={"type": "A1"},
        orbits=[OrbitInfo("u", 0, True), OrbitInfo("w", 1, False)],
        closure_pairs=[("u", "w")],
        params=[
            Parameter("u", "u", "triv", 0),
            Parameter("wp", "w", "plus", 1),
            Parameter("wm", "w", "minus", 1),
        ],
        actions={
            0: {
                "u": AscentN(ups=("wp", "wm")),
                "wp": DescentN(partner="wm", down="u"),
                "wm": DescentN(partner="wp", down="u"),
            }
        },
        costandard={
            "u": {"u": ONE},
            "wp": {"wp": ONE, "u": one_minus_q},
            "wm": {"wm": ONE, "u": one_minus_q},
        },
        poincare={
            "u": _series("1", [1]),
            "wp": _series("1", []),
            "wm": _series("1", []),
        },
    )


def _hecke_regular(label: str) -> OrbitDatum:
    system = cox.build_system(label)
    els = system.elements()
    tokens = {w: system.element_token(w) for w in els}

    orbits = [OrbitInfo(tokens[w], w.length, w.length == 0) for w in els]
    params = [Parameter(tokens[w], tokens[w], "triv", w.length) for w in els]

    closure = []
    for x in els:
        for y in els:
            if x.length + 1 == y.length and system.leq_bruhat(x, y):
                closure.append((tokens[x], tokens[y]))

    actions: dict[int, dict] = {}
    for s in range(system.rank):
        gen = system.generator(s)
        rows = {}
        for w in els:
            sw = gen * w  # generators act on the left
            if sw.length > w.length:
                rows[tokens[w]] = AscentU(up=tokens[sw])
            else:
                rows[tokens[w]] = DescentU(down=tokens[sw])
        actions[s] = rows

    # costandard by Hecke inversion: n_w = q^len(w) bar(T_w) in the T-basis
    costandard = {}
    for w in els:
        bar_tw = hecke.T(system, w).bar()
        col = {}
        for x, c in bar_tw.terms.items():
            col[tokens[x]] = c.shift(w.length)
        costandard[tokens[w]] = col

    stab = PoincareSeries(ONE, [1] * system.rank)
    poincare = {tokens[w]: stab for w in els}

    return OrbitDatum(
        name=f"hecke-regular:{label}",
        coxeter_spec={"type": label},
        orbits=orbits,
        closure_pairs=closure,
        params=params,
        actions=actions,
        costandard=costandard,
        poincare=poincare,
    )
