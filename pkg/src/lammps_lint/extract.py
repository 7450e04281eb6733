"""Pull physical parameters out of a parsed script.

Every value is reported in one fixed unit regardless of the script's unit
system: lengths in Angstrom, times in ps, pressures in atm, temperatures in K
and velocities in Angstrom/ps.  A parameter the script never sets is
reported as not found; nothing is filled in from defaults except where the
engine itself would (the default timestep when computing simulated time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .parser import AstCommand, AstScript

ATM_PER_BAR = 1 / 1.01325


@dataclass(frozen=True)
class UnitSystem:
    length: float  # Angstrom per native length unit
    time: float  # ps per native time unit
    pressure: float  # atm per native pressure unit
    velocity: float  # (Angstrom/ps) per native velocity unit
    default_dt: float  # native time units


UNIT_SYSTEMS = {
    "metal": UnitSystem(1.0, 1.0, ATM_PER_BAR, 1.0, 0.001),
    "real": UnitSystem(1.0, 1e-3, 1.0, 1e3, 1.0),
    "si": UnitSystem(1e10, 1e12, 1 / 101325.0, 1e-2, 1e-8),
    "cgs": UnitSystem(1e8, 1e12, 1 / 1013250.0, 1e-4, 1e-8),
}

INTEGRATORS = {"nve": "nve", "nve/limit": "nve", "nvt": "nvt", "npt": "npt", "nph": "nph"}
THERMOSTATS = ("langevin", "temp/berendsen", "temp/rescale")
_BAROSTAT_KEYS = ("iso", "aniso", "tri", "x", "y", "z")
_CUBIC = ("sc", "bcc", "fcc", "diamond")


@dataclass(frozen=True)
class Param:
    value: Any = None
    found: bool = False
    sources: tuple[int, ...] = ()
    unit: str = ""
    detail: str = ""

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"found": self.found, "value": _jsonable(self.value), "sources": list(self.sources)}
        if self.unit:
            d["unit"] = self.unit
        if self.detail:
            d["detail"] = self.detail
        return d


def _jsonable(v: Any) -> Any:
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _missing(detail: str = "") -> Param:
    return Param(detail=detail)


@dataclass(frozen=True)
class ParameterSet:
    values: Mapping[str, Param] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Param:
        return self.values.get(key, _missing())

    def __contains__(self, key: str) -> bool:
        return key in self.values

    def to_dict(self) -> dict:
        return {k: p.to_dict() for k, p in sorted(self.values.items())}


# -- one linear walk collects everything the extractors need ------------------


@dataclass
class _Lattice:
    style: str
    scale: float
    spacing: tuple[float, float, float]  # native length units
    index: int


@dataclass
class _Region:
    rid: str
    style: str
    bounds: tuple[float | None, ...] | None  # xlo xhi ylo yhi zlo zhi in Angstrom
    spacing: tuple[float, float, float] | None  # Angstrom, lattice in force at definition
    index: int
    # commands the Angstrom bounds and cell counts depend on (lattice, units)
    inputs: tuple[int, ...] = ()

    def extent(self, axis: int) -> float | None:
        if self.bounds is None:
            return None
        lo, hi = self.bounds[2 * axis], self.bounds[2 * axis + 1]
        if lo is None or hi is None:
            return None
        return hi - lo

    def center(self, axis: int) -> float | None:
        if self.bounds is None or None in self.bounds[2 * axis : 2 * axis + 2]:
            return None
        return (self.bounds[2 * axis] + self.bounds[2 * axis + 1]) / 2

    def cells(self) -> tuple[float, float, float] | None:
        if self.spacing is None:
            return None
        ext = [self.extent(a) for a in range(3)]
        if any(e is None for e in ext):
            return None
        return tuple(_clean(e / s) for e, s in zip(ext, self.spacing))


@dataclass
class _Stage:
    index: int  # command index of the run
    steps: int
    dt: float | None  # ps
    dt_explicit: bool
    fixes: tuple[tuple[int, AstCommand], ...]

    @property
    def duration(self) -> float | None:
        return None if self.dt is None else self.steps * self.dt

    @property
    def label(self) -> str:
        integrators = {INTEGRATORS[c.style] for _, c in self.fixes if c.style in INTEGRATORS}
        thermostatted = any(c.style in THERMOSTATS for _, c in self.fixes)
        if integrators == {"nve"} and thermostatted:
            return "nvt"
        if not integrators:
            return "none"
        return "+".join(sorted(integrators))

    def thermostat(self) -> tuple[int, AstCommand] | None:
        for idx, c in self.fixes:
            if c.style in ("nvt", "npt") or c.style in THERMOSTATS:
                return idx, c
        return None

    def barostat(self) -> tuple[int, AstCommand] | None:
        for idx, c in self.fixes:
            if c.style in ("npt", "nph"):
                return idx, c
        return None


def _clean(x: float) -> float:
    """Round away float noise from unit arithmetic (12 significant digits)."""
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


class _Walk:
    def __init__(self, ast: AstScript):
        self.ast = ast
        self.units: str | None = None
        self.units_idx: int | None = None
        self.dt_native: float | None = None
        self.dt_idx: int | None = None
        self.lattice: _Lattice | None = None
        self.atom_lattice: _Lattice | None = None
        self.regions: dict[str, _Region] = {}
        self.box_region: tuple[str, int] | None = None
        self.boundary: tuple[tuple[str, ...], int] | None = None
        self.atom_regions: list[tuple[str, int]] = []
        self.replicate: tuple[tuple[int, int, int], int] | None = None
        self.groups: dict[str, tuple[str, int]] = {}
        self.velocities: list[tuple[int, AstCommand, _Lattice | None]] = []
        self.pair_styles: list[tuple[int, str]] = []
        self.stages: list[_Stage] = []
        live: dict[str, tuple[int, AstCommand]] = {}
        for idx, cmd in enumerate(ast.commands):
            handler = getattr(self, "_on_" + cmd.name.replace("/", "_"), None)
            if handler is not None:
                handler(idx, cmd)
            if cmd.name == "fix":
                live[cmd.value("id")] = (idx, cmd)
            elif cmd.name == "unfix":
                live.pop(cmd.value("id"), None)
            elif cmd.name == "run":
                self.stages.append(
                    _Stage(idx, cmd.value("n"), self.dt_ps, self.dt_native is not None, tuple(live.values()))
                )

    @property
    def system(self) -> UnitSystem | None:
        return UNIT_SYSTEMS.get(self.units or "")

    @property
    def dt_ps(self) -> float | None:
        sys = self.system
        if sys is None:
            return None
        native = self.dt_native if self.dt_native is not None else sys.default_dt
        return native * sys.time

    def _on_units(self, idx, cmd):
        self.units, self.units_idx = cmd.value("style"), idx

    def _on_kim(self, idx, cmd):
        if cmd.style == "init":
            self._on_units(idx, cmd)
        elif cmd.style == "interactions":
            self.pair_styles.append((idx, "kim"))

    def _on_kim_init(self, idx, cmd):
        self._on_units(idx, cmd)

    def _on_kim_interactions(self, idx, cmd):
        self.pair_styles.append((idx, "kim"))

    def _on_timestep(self, idx, cmd):
        self.dt_native, self.dt_idx = cmd.value("dt"), idx

    def _on_boundary(self, idx, cmd):
        self.boundary = ((cmd.value("x"), cmd.value("y"), cmd.value("z")), idx)

    def _on_pair_style(self, idx, cmd):
        self.pair_styles.append((idx, cmd.style))

    def _on_lattice(self, idx, cmd):
        style, scale = cmd.value("style"), cmd.value("scale")
        spacing = (scale, scale, scale)
        if style == "hcp":
            spacing = (scale, scale * math.sqrt(3), scale * math.sqrt(8 / 3))
        elif style in _CUBIC:
            dims = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}
            for k in cmd.keywords:
                if k.word == "orient":
                    dims[k.args[0].value] = tuple(a.value for a in k.args[1:])
            spacing = tuple(scale * math.sqrt(sum(c * c for c in dims[d])) for d in "xyz")
        sp = cmd.keyword("spacing")
        if sp is not None:
            spacing = tuple(scale * a.value for a in sp.args)
        self.lattice = _Lattice(style, scale, spacing, idx)

    def _lattice_spacing_A(self, lattice: _Lattice | None) -> tuple[float, float, float] | None:
        sys = self.system
        if lattice is None or sys is None or lattice.style == "none":
            return None
        return tuple(s * sys.length for s in lattice.spacing)

    def _on_region(self, idx, cmd):
        rid = cmd.value("id")
        bounds = None
        spacing = self._lattice_spacing_A(self.lattice)
        if cmd.style == "block":
            box_units = (cmd.keyword("units") is not None and cmd.keyword("units").args[0].value == "box")
            raw = [cmd.value(n) for n in ("xlo", "xhi", "ylo", "yhi", "zlo", "zhi")]
            sys = self.system
            scale: tuple[float, ...] | None
            if box_units:
                scale = (sys.length,) * 3 if sys else None
            else:
                scale = spacing
            if scale is not None:
                bounds = tuple(
                    _clean(v * scale[i // 2]) if isinstance(v, (int, float)) else None for i, v in enumerate(raw)
                )
        inputs = tuple(i for i in (self.lattice.index if self.lattice else None, self.units_idx) if i is not None)
        self.regions[rid] = _Region(rid, cmd.style, bounds, spacing, idx, inputs)

    def _on_create_box(self, idx, cmd):
        self.box_region = (cmd.value("region"), idx)

    def _on_create_atoms(self, idx, cmd):
        if self.atom_lattice is None:
            self.atom_lattice = self.lattice
        if cmd.style == "region":
            rid = cmd.value("region")
            if rid not in [r for r, _ in self.atom_regions]:
                self.atom_regions.append((rid, idx))

    def _on_replicate(self, idx, cmd):
        self.replicate = ((cmd.value("nx"), cmd.value("ny"), cmd.value("nz")), idx)

    def _on_group(self, idx, cmd):
        if cmd.style == "region":
            self.groups[cmd.value("id")] = (cmd.value("region"), idx)

    def _on_velocity(self, idx, cmd):
        self.velocities.append((idx, cmd, self.lattice))


# -- extractors -----------------------------------------------------------------


def _units(w: _Walk) -> Param:
    if w.units is None:
        return _missing("no units command")
    return Param(w.units, True, (w.units_idx,))


def _unit_guard(w: _Walk) -> str | None:
    if w.units is None:
        return "no units command (lj units have no physical scale)"
    if w.system is None:
        return f"{w.units} units are not converted"
    return None


def _lattice_used(w: _Walk) -> _Lattice | None:
    return w.atom_lattice or w.lattice


def _lattice_style(w: _Walk) -> Param:
    lat = _lattice_used(w)
    if lat is None:
        return _missing("no lattice command")
    return Param(lat.style, True, (lat.index,))


def _lattice_constant(w: _Walk) -> Param:
    lat = _lattice_used(w)
    if lat is None:
        return _missing("no lattice command")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    return Param(_clean(lat.scale * w.system.length), True, (lat.index, w.units_idx), "Angstrom")


def _replication(w: _Walk) -> Param:
    if w.box_region is None:
        return _missing("no create_box command")
    rid, idx = w.box_region
    region = w.regions.get(rid)
    if region is None or region.cells() is None:
        return _missing(f"box region {rid!r} has no finite block extent in lattice cells")
    cells = region.cells()
    sources = [region.index, idx, *region.inputs]
    if w.replicate is not None:
        factors, ridx = w.replicate
        cells = tuple(_clean(c * f) for c, f in zip(cells, factors))
        sources.append(ridx)
    return Param(cells, True, tuple(sorted(set(sources))), "lattice cells")


def _boundary(w: _Walk) -> Param:
    if w.boundary is None:
        return _missing("no boundary command")
    return Param(w.boundary[0], True, (w.boundary[1],))


def _active_stages(w: _Walk) -> list[_Stage]:
    return [s for s in w.stages if s.steps > 0]


def _ensemble_sequence(w: _Walk) -> Param:
    labels: list[str] = []
    sources: list[int] = []
    scopes: list[str] = []
    for stage in _active_stages(w):
        label = stage.label
        if label == "none":
            continue
        sources.append(stage.index)
        sources.extend(i for i, _ in stage.fixes)
        if labels and labels[-1] == label:
            continue
        labels.append(label)
        scopes.append(
            label + "(" + ",".join(f"{c.value('group')}:{c.style}" for _, c in stage.fixes) + ")"
        )
    if not labels:
        return _missing("no run with an integrator fix")
    return Param(tuple(labels), True, tuple(sorted(set(sources))), detail=" -> ".join(scopes))


def _primary_thermostat(w: _Walk) -> tuple[_Stage, int, AstCommand] | None:
    """The ramp stage if there is one, else the longest thermostatted stage."""
    candidates = []
    for stage in _active_stages(w):
        t = stage.thermostat()
        if t is not None:
            start, stop, _ = _thermo_targets(t[1])
            candidates.append((start != stop, stage.steps, -stage.index, stage, t))
    if not candidates:
        return None
    best = max(candidates, key=lambda c: c[:3])
    return best[3], best[4][0], best[4][1]


def _thermo_targets(cmd: AstCommand) -> tuple[float, float, float]:
    if cmd.style in ("nvt", "npt"):
        args = cmd.keyword("temp").args
        return args[0].value, args[1].value, args[2].value
    if cmd.style == "temp/rescale":
        return cmd.value("t_start"), cmd.value("t_stop"), float("nan")
    return cmd.value("t_start"), cmd.value("t_stop"), cmd.value("damp")


def _temperature(which: int) -> Callable[[_Walk], Param]:
    def extract(w: _Walk) -> Param:
        found = _primary_thermostat(w)
        if found is None:
            return _missing("no thermostat active during a run")
        stage, idx, cmd = found
        if w.units == "lj" or w.units is None:
            return _missing(_unit_guard(w) or "lj temperature")
        return Param(_clean(_thermo_targets(cmd)[which]), True, (idx, stage.index), "K")

    return extract


def _tdamp(w: _Walk) -> Param:
    found = _primary_thermostat(w)
    if found is None:
        return _missing("no thermostat active during a run")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    stage, idx, cmd = found
    damp = _thermo_targets(cmd)[2]
    if math.isnan(damp):
        return _missing(f"fix {cmd.style} has no damping time")
    return Param(_clean(damp * w.system.time), True, (idx, w.units_idx), "ps")


def _barostat_args(cmd: AstCommand):
    for word in _BAROSTAT_KEYS:
        k = cmd.keyword(word)
        if k is not None:
            return word, k.args
    return None


def _primary_barostat(w: _Walk):
    best = None
    for stage in _active_stages(w):
        b = stage.barostat()
        if b is not None and (best is None or stage.steps > best[0].steps):
            best = (stage, *b)
    return best


def _pressure(w: _Walk) -> Param:
    found = _primary_barostat(w)
    if found is None:
        return _missing("no barostat active during a run")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    stage, idx, cmd = found
    word, args = _barostat_args(cmd)
    p_start, p_stop = args[0].value, args[1].value
    native = "bar" if w.units == "metal" else {"real": "atm", "si": "Pa", "cgs": "dyne/cm^2"}[w.units]
    detail = f"{word} {p_start} -> {p_stop} {native}"
    return Param(_clean(p_start * w.system.pressure), True, (idx, w.units_idx), "atm", detail)


def _pdamp(w: _Walk) -> Param:
    found = _primary_barostat(w)
    if found is None:
        return _missing("no barostat active during a run")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    stage, idx, cmd = found
    _, args = _barostat_args(cmd)
    return Param(_clean(args[2].value * w.system.time), True, (idx, w.units_idx), "ps")


def _timestep(w: _Walk) -> Param:
    if w.dt_native is None:
        return _missing("no timestep command")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    return Param(_clean(w.dt_native * w.system.time), True, (w.dt_idx, w.units_idx), "ps")


def _run_steps(w: _Walk) -> Param:
    if not w.stages:
        return _missing("no run command")
    return Param(tuple(s.steps for s in w.stages), True, tuple(s.index for s in w.stages), "steps")


def _stage_time(label: str | None) -> Callable[[_Walk], Param]:
    def extract(w: _Walk) -> Param:
        stages = [s for s in _active_stages(w) if label is None or s.label == label]
        if not stages:
            return _missing(f"no {label or 'run'} stage")
        guard = _unit_guard(w)
        if guard:
            return _missing(guard)
        total = sum(s.duration for s in stages)
        detail = "" if all(s.dt_explicit for s in stages) else "uses the default timestep of the unit system"
        sources = {s.index for s in stages} | {i for i in (w.dt_idx, w.units_idx) if i is not None}
        return Param(_clean(total), True, tuple(sorted(sources)), "ps", detail)

    return extract


def _heating_rate(w: _Walk) -> Param:
    found = _primary_thermostat(w)
    if found is None:
        return _missing("no thermostat active during a run")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    stage, idx, cmd = found
    start, stop, _ = _thermo_targets(cmd)
    duration = stage.duration
    if not duration:
        return _missing("ramp stage has zero duration")
    rate = (stop - start) / duration
    detail = f"({stop} - {start}) K over {stage.steps} steps x {stage.dt} ps"
    sources = {idx, stage.index} | {i for i in (w.dt_idx, w.units_idx) if i is not None}
    return Param(_clean(rate), True, tuple(sorted(sources)), "K/ps", detail)


def _velocity_create_temp(w: _Walk) -> Param:
    for idx, cmd, _ in w.velocities:
        if cmd.style == "create":
            return Param(_clean(cmd.value("temp")), True, (idx,), "K")
    return _missing("no velocity create command")


def _atom_pair(w: _Walk) -> tuple[_Region, _Region] | None:
    """(projectile, target): the two atom-filled regions, the shorter along z being the projectile."""
    regions = [w.regions[r] for r, _ in w.atom_regions if r in w.regions]
    if len(regions) != 2:
        return None
    a, b = regions
    za, zb = a.extent(2), b.extent(2)
    if za is None or zb is None or za == zb:
        return None
    return (a, b) if za < zb else (b, a)


def _projectile_velocity(w: _Walk) -> tuple[tuple[int, AstCommand, _Lattice | None], tuple[int, ...]] | None:
    """The velocity set applied to the projectile's group, else the first one; plus the commands that decided it."""
    sets = [v for v in w.velocities if v[1].style == "set"]
    if not sets:
        return None
    pair = _atom_pair(w)
    if pair is not None:
        proj_groups = {g: gidx for g, (r, gidx) in w.groups.items() if r == pair[0].rid}
        for v in sets:
            group = v[1].value("group")
            if group in proj_groups:
                return v, (proj_groups[group], pair[0].index, pair[1].index)
    return sets[0], ()


def _velocity_set_vector(w: _Walk) -> Param:
    found = _projectile_velocity(w)
    if found is None:
        return _missing("no velocity set command")
    guard = _unit_guard(w)
    if guard:
        return _missing(guard)
    (idx, cmd, lattice), decided_by = found
    units_kw = cmd.keyword("units")
    box_units = units_kw is not None and units_kw.args[0].value == "box"
    if box_units:
        factors = (1.0, 1.0, 1.0)
    else:
        spacing = w._lattice_spacing_A(lattice)
        if spacing is None:
            return _missing("velocity in lattice units but no lattice is defined")
        factors = tuple(s / w.system.length for s in spacing)
    comps = []
    for name, f in zip(("vx", "vy", "vz"), factors):
        v = cmd.value(name)
        comps.append(0.0 if v == "NULL" else _clean(v * f * w.system.velocity))
    detail = f"group {cmd.value('group')}, {'box' if box_units else 'lattice'} units; NULL read as 0"
    sources = {idx, w.units_idx, *decided_by}
    if not box_units:
        sources.add(lattice.index)
    return Param(tuple(comps), True, tuple(sorted(sources)), "Angstrom/ps", detail)


def _impact_direction(w: _Walk) -> Param:
    pair = _atom_pair(w)
    vel = _velocity_set_vector(w)
    if pair is None or not vel.found:
        return _missing("needs two atom regions and a velocity set command")
    proj, target = pair
    dz = target.center(2) - proj.center(2)
    vz = vel.value[2]
    if vz == 0:
        word = "lateral"
    else:
        word = "toward" if dz * vz > 0 else "away"
    return Param(word, True, tuple(sorted({proj.index, target.index, *proj.inputs, *target.inputs, *vel.sources})))


def _pair_style_word(w: _Walk) -> Param:
    if not w.pair_styles:
        return _missing("no pair_style or kim interactions command")
    idx, word = w.pair_styles[-1]
    return Param(word, True, (idx,))


def _gap_distance(w: _Walk) -> Param:
    pair = _atom_pair(w)
    if pair is None:
        return _missing("needs exactly two atom-filled regions with distinct z extents")
    proj, target = pair
    if proj.center(2) > target.center(2):
        gap = proj.bounds[4] - target.bounds[5]
    else:
        gap = target.bounds[4] - proj.bounds[5]
    return Param(_clean(gap), True, tuple(sorted({proj.index, target.index, *proj.inputs, *target.inputs})), "Angstrom")


def _region_cells(which: int) -> Callable[[_Walk], Param]:
    def extract(w: _Walk) -> Param:
        pair = _atom_pair(w)
        if pair is None:
            return _missing("needs exactly two atom-filled regions with distinct z extents")
        region = pair[which]
        cells = region.cells()
        if cells is None:
            return _missing(f"region {region.rid!r} has no finite extent in lattice cells")
        sources = {pair[0].index, pair[1].index, *pair[0].inputs, *pair[1].inputs}
        return Param(cells, True, tuple(sorted(sources)), "lattice cells", f"region {region.rid}")

    return extract


def _free_boundary_mode(w: _Walk) -> Param:
    if w.boundary is None:
        return _missing("no boundary command")
    words, bidx = w.boundary
    z = words[2]
    if z == "p":
        return Param("periodic", True, (bidx,))
    if set(z) <= {"s", "m"}:
        return Param("shrink", True, (bidx,))
    if set(z) != {"f"}:
        return Param("mixed", True, (bidx,))
    # fixed walls need room for atoms to move: the box must extend past the atoms
    atoms = [w.regions[r] for r, _ in w.atom_regions if r in w.regions]
    box = w.regions.get(w.box_region[0]) if w.box_region else None
    if box is None or box.bounds is None or not atoms or any(r.bounds is None for r in atoms):
        return _missing("fixed z boundary but box or atom extents are unknown")
    lo = min(r.bounds[4] for r in atoms)
    hi = max(r.bounds[5] for r in atoms)
    margin = min(lo - box.bounds[4], box.bounds[5] - hi)
    mode = "fixed_margin" if margin > 0 else "fixed_no_margin"
    sources = {bidx, box.index, *box.inputs, *(r.index for r in atoms), *(i for r in atoms for i in r.inputs)}
    return Param(mode, True, tuple(sorted(sources)), detail=f"smallest z margin {margin:g} Angstrom")


def _region_extents(w: _Walk) -> Param:
    if not w.regions:
        return _missing("no region command")
    extents = {rid: r.bounds for rid, r in w.regions.items() if r.bounds is not None}
    return Param(extents, True, tuple(r.index for r in w.regions.values()), "Angstrom")


EXTRACTORS: dict[str, Callable[[_Walk], Param]] = {
    "units": _units,
    "lattice_style": _lattice_style,
    "lattice_constant": _lattice_constant,
    "replication": _replication,
    "boundary": _boundary,
    "ensemble_sequence": _ensemble_sequence,
    "temp_start": _temperature(0),
    "temp_stop": _temperature(1),
    "tdamp": _tdamp,
    "pdamp": _pdamp,
    "pressure": _pressure,
    "timestep": _timestep,
    "run_steps": _run_steps,
    "total_sim_time": _stage_time(None),
    "nvt_time": _stage_time("nvt"),
    "npt_time": _stage_time("npt"),
    "nve_time": _stage_time("nve"),
    "heating_rate": _heating_rate,
    "velocity_create_temp": _velocity_create_temp,
    "velocity_set_vector": _velocity_set_vector,
    "pair_style_word": _pair_style_word,
    "gap_distance": _gap_distance,
    "projectile_cells": _region_cells(0),
    "target_cells": _region_cells(1),
    "free_boundary_mode": _free_boundary_mode,
    "impact_direction": _impact_direction,
    "region_extents": _region_extents,
}


def extract_parameters(ast: AstScript) -> ParameterSet:
    walk = _Walk(ast)
    return ParameterSet({key: fn(walk) for key, fn in EXTRACTORS.items()})
