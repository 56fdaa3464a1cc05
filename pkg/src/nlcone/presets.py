"""Built-in lattices for the moduli families handled by the CLI.

Each preset records the full signature-(2,n) lattice, the small "core" block
that carries the discriminant form (the hyperbolic planes and E8(-1) summands
are unimodular and contribute nothing), and a naming scheme for discriminant
cosets that matches the labels used in printed tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .lattice import DiscriminantForm, Lattice, LatticeError

U_GRAM = ((0, 1), (1, 0))

E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        m = len(b)
        for i in range(m):
            for j in range(m):
                out[off + i][off + j] = b[i][j]
        off += m
    return tuple(tuple(r) for r in out)


def scale(block, c):
    return tuple(tuple(c * x for x in row) for row in block)


@dataclass
class Preset:
    key: str
    family: str
    n: int                      # lattice has signature (2, n)
    core: Lattice               # block carrying the discriminant form
    coset_names: dict           # label -> coords in core disc form
    params: dict = field(default_factory=dict)
    with_e8: bool = False       # full lattice = U^2 (+ E8(-1)^2) + core
    monodromy_extension: str = ""

    @property
    def weight(self) -> Fraction:
        return Fraction(self.n + 2, 2)

    @property
    def disc(self) -> DiscriminantForm:
        return _disc_of(self)

    def full_lattice(self) -> Lattice:
        blocks = [U_GRAM, U_GRAM]
        if self.with_e8:
            blocks += [scale(E8_GRAM, -1), scale(E8_GRAM, -1)]
        blocks.append(self.core.gram.entries)
        return Lattice(block_diag(*blocks))

    @property
    def u_split(self):
        return (0, 1)

    def coset_label(self, coords) -> str:
        for label, c in self.coset_names.items():
            if tuple(c) == tuple(coords):
                return label
        return "+".join(f"{a}*g{i}" for i, a in enumerate(coords)) or "0"

    def __repr__(self):
        return f"Preset({self.key})"


@lru_cache(maxsize=None)
def _disc_cached(gram_entries):
    return DiscriminantForm(Lattice(gram_entries))


def _disc_of(preset: Preset) -> DiscriminantForm:
    return _disc_cached(preset.core.gram.entries)


def _names_from_gens(disc: DiscriminantForm, core: Lattice, gens: dict) -> dict:
    """Expand generator labels into names for every coset.

    gens maps a short symbol to a dual vector of the core; composite cosets
    get additive labels like '3l*+d*'.
    """
    sym_coords = {}
    for sym, vec in gens.items():
        sym_coords[sym] = disc.coords_of_dual(vec)
    names = {}
    syms = list(sym_coords)
    ranges = [disc.element_order(sym_coords[s]) for s in syms]

    def emit(label, coords):
        if coords not in names.values():
            names[label] = coords

    from itertools import product

    for combo in product(*[range(r) for r in ranges]):
        coords = disc.zero()
        parts = []
        for a, s in zip(combo, syms):
            coords = disc.add(coords, disc.scale(a, sym_coords[s]))
            if a == 1:
                parts.append(s)
            elif a > 1:
                parts.append(f"{a}{s}")
        label = "+".join(parts) if parts else "0"
        emit(label, coords)
    return names


def _k3_preset(two_d: int) -> Preset:
    if two_d % 2 or two_d <= 0:
        raise LatticeError("k3 preset needs positive even 2d")
    d = two_d // 2
    core = Lattice([[-two_d]])
    disc = DiscriminantForm(core)
    names = _names_from_gens(disc, core, {"l*": (Fraction(1, two_d),)})
    return Preset(
        key=f"k3:2d={two_d}",
        family="k3",
        n=19,
        core=core,
        coset_names=names,
        params={"d": d},
        with_e8=True,
    )


def _k3two_split(d: int) -> Preset:
    core = Lattice([[-2 * d, 0], [0, -2]])
    disc = DiscriminantForm(core)
    names = _names_from_gens(
        disc, core, {"l*": (Fraction(1, 2 * d), Fraction(0)), "d*": (Fraction(0), Fraction(1, 2))}
    )
    return Preset(
        key=f"k3two:split:d={d}",
        family="k3two-split",
        n=20,
        core=core,
        coset_names=names,
        params={"d": d},
        with_e8=True,
    )


def _k3two_nonsplit(t: int) -> Preset:
    core = Lattice([[-2 * t, 1], [1, -2]])
    disc = DiscriminantForm(core)
    p = 4 * t - 1
    names = _names_from_gens(
        disc, core, {"w*": (Fraction(2, p), Fraction(1, p))}
    )  # w* = (2u+v)/(4t-1)
    return Preset(
        key=f"k3two:nonsplit:t={t}",
        family="k3two-nonsplit",
        n=20,
        core=core,
        coset_names=names,
        params={"t": t, "d": 4 * t - 1},
        with_e8=True,
    )


def _og6_div1(d: int) -> Preset:
    core = Lattice([[-2, 0, 0], [0, -2, 0], [0, 0, -2 * d]])
    disc = DiscriminantForm(core)
    names = _names_from_gens(
        disc,
        core,
        {
            "d1*": (Fraction(1, 2), Fraction(0), Fraction(0)),
            "d2*": (Fraction(0), Fraction(1, 2), Fraction(0)),
            "l*": (Fraction(0), Fraction(0), Fraction(1, 2 * d)),
        },
    )
    return Preset(
        key=f"og6:div1:d={d}",
        family="og6",
        n=5,
        core=core,
        coset_names=names,
        params={"d": d, "gamma": 1},
        monodromy_extension="sigma(d1-d2)",
    )


def _og6_div2(t: int, shape: str) -> Preset:
    if shape == "4t-1":
        core = Lattice(block_diag(((-2,),), ((-2, 1), (1, -2 * t))))
        d = 4 * t - 1
        ext = ""
    elif shape == "4t-2":
        core = Lattice([[-2, 0, 1], [0, -2, 1], [1, 1, -2 * t]])
        d = 4 * t - 2
        ext = "sigma(d1-d2)"
    else:
        raise LatticeError("og6 div2 shape must be 4t-1 or 4t-2")
    disc = DiscriminantForm(core)
    return Preset(
        key=f"og6:div2:t={t}:shape={shape}",
        family="og6",
        n=5,
        core=core,
        coset_names=_names_from_gens(disc, core, {}),
        params={"t": t, "d": d, "gamma": 2},
        monodromy_extension=ext,
    )


def _kum_div1(n: int, d: int = 1) -> Preset:
    core = Lattice([[-2 * d, 0], [0, -2 * (n + 1)]])
    disc = DiscriminantForm(core)
    names = _names_from_gens(
        disc,
        core,
        {"l*": (Fraction(1, 2 * d), Fraction(0)), "d*": (Fraction(0), Fraction(1, 2 * (n + 1)))},
    )
    return Preset(
        key=f"kum:n={n}:div1",
        family="kum",
        n=4,
        core=core,
        coset_names=names,
        params={"n": n, "d": d, "gamma": 1},
        monodromy_extension="sigma(delta)",
    )


def _kum_div2(n: int) -> Preset:
    if n % 4 != 2:
        raise LatticeError("kum div2 preset needs n = 2 mod 4")
    t = (n + 2) // 4
    m = n + 1
    core = Lattice([[-2 * t, m], [m, -2 * m]])
    disc = DiscriminantForm(core)
    # v has divisibility n+1, so v* = v/(n+1) generates the discriminant group
    names = _names_from_gens(disc, core, {"v*": (Fraction(0), Fraction(1, m))})
    return Preset(
        key=f"kum:n={n}:div2",
        family="kum",
        n=4,
        core=core,
        coset_names=names,
        params={"n": n, "t": t, "d": 1, "gamma": 2},
        monodromy_extension="sigma(v)",
    )


def parse_preset(name: str) -> Preset:
    """Resolve a CLI preset name like k3:2d=8 or og6:div2:t=3."""
    parts = name.split(":")
    kv = {}
    for p in parts[1:]:
        if "=" in p:
            key, val = p.split("=", 1)
            kv[key] = val
        else:
            kv[p] = True
    try:
        head = parts[0]
        if head == "k3":
            return _k3_preset(int(kv["2d"]))
        if head == "k3two":
            if kv.get("split"):
                return _k3two_split(int(kv["d"]))
            if kv.get("nonsplit"):
                return _k3two_nonsplit(int(kv["t"]))
            raise KeyError("split or nonsplit")
        if head == "cubic":
            p = _k3two_nonsplit(1)
            p.key = "cubic"
            return p
        if head == "og6":
            if kv.get("div1"):
                return _og6_div1(int(kv["d"]))
            if kv.get("div2"):
                return _og6_div2(int(kv["t"]), str(kv.get("shape", "4t-1")))
            raise KeyError("div1 or div2")
        if head == "kum":
            n = int(kv["n"])
            if kv.get("div2"):
                return _kum_div2(n)
            d = int(kv.get("d", 1))
            return _kum_div1(n, d)
    except (KeyError, ValueError) as exc:
        raise LatticeError(
            f"unknown preset {name!r}; valid forms: k3:2d=<even>, "
            "k3two:split:d=<d>, k3two:nonsplit:t=<t>, cubic, og6:div1:d=<d>, "
            "og6:div2:t=<t>[:shape=4t-1|4t-2], kum:n=<n>:div1, kum:n=<n>:div2"
        ) from exc
    raise LatticeError(f"unknown preset family {parts[0]!r}")


ALL_PRESET_EXAMPLES = (
    "k3:2d=2",
    "k3:2d=4",
    "k3two:split:d=1",
    "k3two:nonsplit:t=1",
    "og6:div1:d=1",
    "og6:div2:t=1",
    "og6:div2:t=1:shape=4t-2",
    "kum:n=2:div1",
    "kum:n=2:div2",
)
