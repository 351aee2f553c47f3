"""Declarative benchmark cases and their JSON form.

Evaluation points are given as fractions: ``x/a``, ``y/a`` and ``z/h`` for
square plates, ``x/R``, ``y/R`` and ``z/h`` for circular ones.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..errors import CaseError

SCHEMA_VERSION = 1
QUANTITY_KINDS = ("w", "sxx", "syy", "txz", "omega")
DEGREE_NAMES = {2: "Quadratic", 3: "Cubic", 4: "Quartic"}


@dataclass
class MaterialSpec:
    """Lamina constants; ``None`` entries are completed as ``E3=E2``, ``nu13=nu23=nu12``."""

    E1: float
    E2: float
    G12: float
    G13: float
    G23: float
    nu12: float
    E3: float | None = None
    nu13: float | None = None
    nu23: float | None = None
    rho: float = 1.0
    name: str = ""

    def completed(self) -> list[str]:
        """Names of constants filled in by the default completion."""
        return [n for n in ("E3", "nu13", "nu23") if getattr(self, n) is None]


@dataclass
class QuantitySpec:
    """One reported output and its published reference."""

    name: str
    kind: str
    point: tuple[float, float, float] = (0.5, 0.5, 0.0)
    mode: int = 0
    reference: float | None = None
    citation: str = ""
    tolerance: float | None = None
    others: dict[str, float] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.kind not in QUANTITY_KINDS:
            raise CaseError(f"unknown quantity kind {self.kind!r}")
        self.point = tuple(float(v) for v in self.point)


@dataclass
class CaseSpec:
    name: str
    geometry: str  # "square" or "circle"
    size: float  # side a or radius R
    span_to_thickness: float  # a/h or R/h
    angles_deg: list[float]
    material: MaterialSpec
    degree: int
    mesh: int
    analysis: str  # "static" or "modes"
    boundary: str
    quantities: list[QuantitySpec]
    theory: str = "sinus-w2"
    load: str = "sinusoidal"
    P0: float = 1.0
    modes: int = 10
    stabilization: bool = True
    alpha: float = 0.1
    frequency_length: str = "side"  # "side", "radius" or "diameter"
    table: str = ""
    row: str = ""
    column: str = ""
    notes: str = ""

    def __post_init__(self):
        if self.geometry not in ("square", "circle"):
            raise CaseError(f"{self.name}: unknown geometry {self.geometry!r}")
        if self.analysis not in ("static", "modes"):
            raise CaseError(f"{self.name}: unknown analysis {self.analysis!r}")
        if self.size <= 0 or self.span_to_thickness <= 0:
            raise CaseError(f"{self.name}: size and span/thickness ratio must be positive")
        if self.mesh < 1 or self.degree < 1:
            raise CaseError(f"{self.name}: mesh and degree must be >= 1")
        for q in self.quantities:
            if (q.kind == "omega") != (self.analysis == "modes"):
                raise CaseError(f"{self.name}: quantity {q.name!r} does not fit a {self.analysis} analysis")
            if abs(q.point[2]) > 0.5:
                raise CaseError(f"{self.name}: quantity {q.name!r} lies outside the thickness")
            if self.geometry == "square" and not all(0 <= v <= 1 for v in q.point[:2]):
                raise CaseError(f"{self.name}: quantity {q.name!r} lies outside the plate")
            if self.geometry == "circle" and math.hypot(*q.point[:2]) > 1:
                raise CaseError(f"{self.name}: quantity {q.name!r} lies outside the plate")

    @property
    def thickness(self) -> float:
        return self.size / self.span_to_thickness

    def to_dict(self) -> dict:
        d = asdict(self)
        for q in d["quantities"]:
            q["point"] = list(q["point"])
        return {"schema": SCHEMA_VERSION, **d}

    @classmethod
    def from_dict(cls, data: dict) -> "CaseSpec":
        data = dict(data)
        schema = data.pop("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise CaseError(f"unsupported case schema {schema}")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise CaseError(f"unknown case fields: {sorted(unknown)}")
        try:
            data["material"] = MaterialSpec(**data["material"])
            data["quantities"] = [QuantitySpec(**q) for q in data["quantities"]]
            data["angles_deg"] = [float(t) for t in data["angles_deg"]]
            return cls(**data)
        except (KeyError, TypeError) as exc:
            raise CaseError(f"malformed case description: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CaseSpec":
        return cls.from_dict(json.loads(text))


def load_cases(path: str | Path) -> list[CaseSpec]:
    """Read one case object or a list of them from a JSON file."""
    data = json.loads(Path(path).read_text())
    items = data if isinstance(data, list) else [data]
    return [CaseSpec.from_dict(item) for item in items]


# ---------------------------------------------------------------------------
# builtin benchmark suite

PAGANO = MaterialSpec(E1=25.0, E2=1.0, G12=0.5, G13=0.5, G23=0.2, nu12=0.25, name="E1=25E2")
GRAPHITE_EPOXY = MaterialSpec(E1=132.38, E2=10.756, E3=10.756, G12=3.606, G13=5.6537, G23=5.6537,
                              nu12=0.24, nu13=0.24, nu23=0.49, name="GPa")


def vibration_material(ratio: float) -> MaterialSpec:
    return MaterialSpec(E1=float(ratio), E2=1.0, G12=0.6, G13=0.6, G23=0.5, nu12=0.25,
                        name=f"E1={ratio:g}E2")


CROSS4 = [0.0, 90.0, 90.0, 0.0]
CROSS3 = [0.0, 90.0, 0.0]
DEGREES = (2, 3, 4)
MESHES = (5, 7, 9)

STATIC_POINTS = {
    "w": (0.5, 0.5, 0.0),
    "sxx": (0.5, 0.5, 0.5),
    "syy": (0.5, 0.5, 0.25),
    "txz": (0.0, 0.5, 0.0),
}
STATIC_NAMES = {"w": "w_bar", "sxx": "sigma_xx_bar", "syy": "sigma_yy_bar", "txz": "tau_xz_bar"}

TABLE1 = {  # kind -> degree -> values on 5x5, 7x7, 9x9
    "w": {2: (1.9207, 1.9100, 1.9058), 3: (1.9076, 1.9038, 1.9021), 4: (1.9045, 1.9020, 1.9010)},
    "sxx": {2: (0.6966, 0.7009, 0.7029), 3: (0.7074, 0.7063, 0.7061), 4: (0.7062, 0.7060, 0.7058)},
    "syy": {2: (0.6179, 0.6221, 0.6239), 3: (0.6277, 0.6270, 0.6268), 4: (0.6268, 0.6267, 0.6266)},
    "txz": {2: (0.2293, 0.2246, 0.2227), 3: (0.2210, 0.2205, 0.2202), 4: (0.2205, 0.2202, 0.2201)},
}
TABLE1_OTHERS = {
    "w": {"HSDT": 1.8937, "Elasticity": 1.9540},
    "sxx": {"HSDT": 0.6651, "Elasticity": 0.7200},
    "syy": {"HSDT": 0.6322, "Elasticity": 0.6660},
    "txz": {"HSDT": 0.2064, "Elasticity": 0.2700},
}

TABLE2 = {  # a/h -> degree -> (w, sxx, syy, txz)
    10: {2: (0.7250, 0.5571, 0.3908, 0.2985), 3: (0.7203, 0.5596, 0.3913, 0.2983),
         4: (0.7187, 0.5594, 0.3907, 0.2967)},
    100: {2: (0.4383, 0.5334, None, 0.4069), 3: (0.4336, 0.5368, None, 0.3271),
          4: (0.4317, 0.5366, None, 0.3275)},
}
TABLE2_OTHERS = {
    10: {"HSDT": (0.7147, 0.5456, 0.3888, 0.2640), "FSDT": (0.6628, 0.4989, 0.3615, 0.1667),
         "Elasticity": (0.7430, 0.5590, 0.4030, 0.3010), "RBF": (0.7325, 0.5627, 0.3908, 0.3321),
         "CS-FEM Q4": (0.7195, 0.5597, 0.3905, 0.2952)},
    # the FSDT deflection is printed as "04337" in the source table
    100: {"HSDT": (0.4343, 0.5387, 0.2708, 0.2897), "FSDT": (0.4337, 0.5382, 0.2705, 0.1780),
          "Elasticity": (0.4347, 0.5390, 0.2710, 0.3390), "RBF": (0.4307, 0.5431, 0.2730, 0.3768),
          "CS-FEM Q4": (0.4304, 0.5368, None, 0.3285)},
}

TABLE3_RATIOS = (10, 50, 100, 500, 1000)
TABLE3 = {2: (0.9252, 0.7713, 0.7650, 0.7624, 0.7624),
          3: (0.9226, 0.7704, 0.7656, 0.7640, 0.7639),
          4: (0.9217, 0.7695, 0.7646, 0.7631, 0.7630)}
TABLE3_OTHERS = {"Analytical ESL-2": (0.9249, 0.7767, 0.7720, 0.7705, 0.7704),
                 "MITC4": (0.9195, 0.7713, 0.7666, 0.7650, 0.7650),
                 "CS-FEM Q4": (0.9235, 0.7703, 0.7655, 0.7639, 0.7639)}

TABLE4 = {2: (10.6926, 10.7295, 10.7454), 3: (10.7340, 10.7517, 10.7590), 4: (10.7498, 10.7598, 10.7640)}

TABLE5_RATIOS = (10, 20, 30, 40)
TABLE5 = {2: (8.3358, 9.5437, 10.2572, 10.7454), 3: (8.3417, 9.5532, 10.2691, 10.7590),
          4: (8.3439, 9.5566, 10.2734, 10.7640)}
TABLE5_OTHERS = {"Liew": (8.2924, 9.5613, 10.3200, 10.8490), "Reddy, Khdeir": (8.2982, 9.5671, 10.3260, 10.8540),
                 "HSDT (nu23=0.18)": (8.2999, 9.5411, 10.2687, 10.7652),
                 "CS-FEM Q4": (8.3642, 9.5793, 10.2973, 10.7887)}

TABLE6_RATIOS = (2, 4, 10, 20, 50, 100)
TABLE6 = {2: (5.3931, 9.2701, 15.0660, 17.5781, 18.5913, 18.7579),
          3: (5.3945, 9.2785, 15.1086, 17.649, 18.6711, 18.8343),
          4: (5.3951, 9.2815, 15.1239, 17.6749, 18.7024, 18.8665)}
TABLE6_OTHERS = {"FSDT": (5.4998, 9.3949, 15.1426, 17.6596, 18.6742, 18.8362),
                 "Model-2 (9dofs)": (5.3929, 9.2710, 15.0949, 17.6434, 18.6713, 18.8355),
                 "HSDT": (5.5065, 9.3235, 15.1073, 17.6457, 18.6718, 18.8356),
                 "CS-FEM Q4": (5.4026, 9.2998, 15.1766, 17.7540, 18.7947, 18.9611)}

TABLE8_ANGLES = (0, 15, 30, 45)
TABLE8_LABELS = {0: "0", 15: "pi/12", 30: "pi/6", 45: "pi/4"}
TABLE8 = {0: (22.6663, 30.3485, 41.7294), 15: (23.0024, 31.5752, 43.7671),
          30: (23.9749, 35.2577, 44.2964), 45: (24.5253, 37.4311, 44.0796)}
TABLE8_OTHERS = {0: {"MLSDQ-FSDT": (22.2110, 29.651, 41.1010), "IGA": (23.5781, 30.7459, 42.0042)},
                 15: {"MLSDQ-FSDT": (22.7740, 31.4550, 43.350), "IGA": (23.6090, 31.7743, 43.9569)},
                 30: {"MLSDQ-FSDT": (24.0710, 36.1530, 43.9680), "IGA": (24.2081, 35.6047, 46.5406)},
                 45: {"MLSDQ-FSDT": (24.7520, 39.1810, 43.6070), "IGA": (24.6607, 37.8980, 46.2560)}}


def _present(p: int, mesh: int) -> str:
    return f"Present ({DEGREE_NAMES[p]} {mesh}x{mesh})"


def _static_quantities(values: dict, others: dict, p: int, mesh: int, w_z: float = 0.0) -> list[QuantitySpec]:
    out = []
    for kind, ref in values.items():
        point = STATIC_POINTS[kind] if kind != "w" else (0.5, 0.5, w_z)
        out.append(QuantitySpec(STATIC_NAMES[kind], kind, point, reference=ref,
                                citation=_present(p, mesh),
                                others={k: v for k, v in others.get(kind, {}).items() if v is not None}))
    return out


def _table1() -> list[CaseSpec]:
    cases = []
    for p in DEGREES:
        for j, n in enumerate(MESHES):
            values = {kind: TABLE1[kind][p][j] for kind in STATIC_POINTS}
            cases.append(CaseSpec(
                name=f"table1-{DEGREE_NAMES[p].lower()}-{n}x{n}", geometry="square", size=1.0,
                span_to_thickness=4.0, angles_deg=CROSS4, material=PAGANO, degree=p, mesh=n,
                analysis="static", boundary="simply_supported",
                quantities=_static_quantities(values, TABLE1_OTHERS, p, n),
                table="table1", row=DEGREE_NAMES[p], column=f"{n}x{n}",
                notes="a/h = 4 inferred from the elasticity reference"))
    return cases


def _table2() -> list[CaseSpec]:
    cases = []
    for ratio, by_degree in TABLE2.items():
        for p, refs in by_degree.items():
            kinds = ("w", "sxx", "syy", "txz")
            values = dict(zip(kinds, refs))
            others = {kind: {label: vals[i] for label, vals in TABLE2_OTHERS[ratio].items()}
                      for i, kind in enumerate(kinds)}
            qs = _static_quantities(values, others, p, 9)
            if ratio == 100:
                qs[0].note = "FSDT reference printed as 04337 in the source table; read as 0.4337"
            cases.append(CaseSpec(
                name=f"table2-ah{ratio}-{DEGREE_NAMES[p].lower()}", geometry="square", size=1.0,
                span_to_thickness=float(ratio), angles_deg=CROSS4, material=PAGANO, degree=p, mesh=9,
                analysis="static", boundary="simply_supported", quantities=qs,
                table="table2", row=DEGREE_NAMES[p], column=f"a/h={ratio}"))
    return cases


def _table3() -> list[CaseSpec]:
    cases = []
    for p in DEGREES:
        for j, ratio in enumerate(TABLE3_RATIOS):
            q = QuantitySpec("w_bar", "w", (0.5, 0.5, 0.5), reference=TABLE3[p][j],
                             citation=_present(p, 9),
                             others={k: v[j] for k, v in TABLE3_OTHERS.items()},
                             note="deflection at the top surface, scaled by 100 E2 h^3 / (P a^4)")
            cases.append(CaseSpec(
                name=f"table3-ah{ratio}-{DEGREE_NAMES[p].lower()}", geometry="square", size=1.0,
                span_to_thickness=float(ratio), angles_deg=CROSS3, material=GRAPHITE_EPOXY, degree=p,
                mesh=9, analysis="static", boundary="simply_supported", quantities=[q],
                table="table3", row=DEGREE_NAMES[p], column=f"a/h={ratio}"))
    return cases


def _omega(reference, citation, others=None, tolerance=None, mode=0) -> QuantitySpec:
    return QuantitySpec(f"Omega_{mode + 1}", "omega", (0.5, 0.5, 0.0), mode=mode, reference=reference,
                        citation=citation, tolerance=tolerance, others=others or {})


def _table4() -> list[CaseSpec]:
    return [CaseSpec(
        name=f"table4-{DEGREE_NAMES[p].lower()}-{n}x{n}", geometry="square", size=1.0,
        span_to_thickness=5.0, angles_deg=CROSS4, material=vibration_material(40), degree=p, mesh=n,
        analysis="modes", boundary="simply_supported",
        quantities=[_omega(TABLE4[p][j], _present(p, n))],
        table="table4", row=DEGREE_NAMES[p], column=f"{n}x{n}")
        for p in DEGREES for j, n in enumerate(MESHES)]


def _table5() -> list[CaseSpec]:
    return [CaseSpec(
        name=f"table5-e{ratio}-{DEGREE_NAMES[p].lower()}", geometry="square", size=1.0,
        span_to_thickness=5.0, angles_deg=CROSS4, material=vibration_material(ratio), degree=p, mesh=9,
        analysis="modes", boundary="simply_supported",
        quantities=[_omega(TABLE5[p][j], _present(p, 9), {k: v[j] for k, v in TABLE5_OTHERS.items()})],
        table="table5", row=DEGREE_NAMES[p], column=f"E1/E2={ratio}")
        for p in DEGREES for j, ratio in enumerate(TABLE5_RATIOS)]


def _table6() -> list[CaseSpec]:
    material = vibration_material(40)
    material.nu13 = material.nu23 = 0.25
    return [CaseSpec(
        name=f"table6-ah{ratio}-{DEGREE_NAMES[p].lower()}", geometry="square", size=1.0,
        span_to_thickness=float(ratio), angles_deg=CROSS4, material=material, degree=p, mesh=9,
        analysis="modes", boundary="simply_supported",
        quantities=[_omega(TABLE6[p][j], _present(p, 9), {k: v[j] for k, v in TABLE6_OTHERS.items()},
                           tolerance=0.015 if ratio == 2 else 0.01)],
        table="table6", row=DEGREE_NAMES[p], column=f"a/h={ratio}")
        for p in DEGREES for j, ratio in enumerate(TABLE6_RATIOS)]


def _table8() -> list[CaseSpec]:
    cases = []
    for theta in TABLE8_ANGLES:
        qs = [_omega(TABLE8[theta][m], "Present (Cubic 13x13)",
                     {k: v[m] for k, v in TABLE8_OTHERS[theta].items()}, tolerance=0.015, mode=m)
              for m in range(3)]
        cases.append(CaseSpec(
            name=f"table8-theta{theta}", geometry="circle", size=0.5, span_to_thickness=5.0,
            angles_deg=[theta, -theta, -theta, theta], material=vibration_material(40), degree=3,
            mesh=13, analysis="modes", boundary="clamped", quantities=qs, modes=16,
            frequency_length="diameter", table="table8", row=f"theta={TABLE8_LABELS[theta]}",
            column="Omega", notes="quadratic disc patch elevated to cubic, then refined to 13x13"))
    return cases


def builtin_cases() -> dict[str, CaseSpec]:
    cases = _table1() + _table2() + _table3() + _table4() + _table5() + _table6() + _table8()
    return {c.name: c for c in cases}


def select_cases(selector: str) -> list[CaseSpec]:
    """Resolve ``all``, a table id (``table3``), a case name or a JSON file path."""
    registry = builtin_cases()
    if selector == "all":
        return list(registry.values())
    if selector in registry:
        return [registry[selector]]
    by_table = [c for c in registry.values() if c.table == selector]
    if by_table:
        return by_table
    path = Path(selector)
    if path.suffix == ".json" and path.exists():
        return load_cases(path)
    raise CaseError(f"no builtin case, table or case file named {selector!r}")
