"""Procedural urban scenery: layouts, buildings, details, scenes.

Everything here is deterministic given a Randomizer: the same seed
produces byte-identical scene files on any platform, because the PRNG
is implemented in the package (PCG32, the pcg_setseq_64 XSH-RR member)
instead of delegating to whatever the host runtime ships.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

FLOOR_HEIGHT = 3.5
DEFAULT_BUILDING_HEIGHT = 35.0
DEFAULT_BUILDING_WIDTH = 40.0

_MASK64 = (1 << 64) - 1
_PCG_MULT = 6364136223846793005
_DEFAULT_STREAM = 0xDA3E39CB94B95BDB


class Pcg32:
    """PCG32: 64-bit LCG state, xorshift-rotate output, period 2^64."""

    def __init__(self, seed: int = 0, stream: int = _DEFAULT_STREAM):
        self._state = 0
        self._inc = ((stream << 1) | 1) & _MASK64
        self.next_u32()
        self._state = (self._state + (seed & _MASK64)) & _MASK64
        self.next_u32()

    def next_u32(self) -> int:
        old = self._state
        self._state = (old * _PCG_MULT + self._inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def next_double(self) -> float:
        # 53 significant bits from two outputs, uniform in [0, 1)
        hi = self.next_u32() >> 6   # 26 bits
        lo = self.next_u32() >> 5   # 27 bits
        return (hi * 134217728.0 + lo) / 9007199254740992.0


class Randomizer:
    """The drawing API scripts see; wraps one PCG32 stream.

    scatter controls how far around(x) may stray from x, as a fraction
    of x. It is mutable on purpose: scripts re-configure the shared
    randomizer rather than creating new streams.
    """

    def __init__(self, seed: int = 0, scatter: float = 0.1):
        self._rng = Pcg32(seed)
        self._scatter = 0.1
        self.set_scatter(scatter)

    @property
    def scatter(self) -> float:
        return self._scatter

    def set_scatter(self, scatter: float):
        scatter = float(scatter)
        if not 0.0 <= scatter < 1.0:
            raise ValueError(f"scatter must be in [0, 1), got {scatter}")
        self._scatter = scatter

    def interval(self, a: float, b: float) -> float:
        """Uniform draw in [a, b]."""
        a = float(a)
        b = float(b)
        if a > b:
            raise ValueError(f"interval needs a <= b, got ({a}, {b})")
        return a + self._rng.next_double() * (b - a)

    def discrete_interval(self, a: float, b: float) -> float:
        """interval(a, b) rounded half-up to a whole number."""
        return float(math.floor(self.interval(a, b) + 0.5))

    def around(self, x: float) -> float:
        """Uniform draw in [x*(1-scatter), x*(1+scatter)]."""
        x = float(x)
        spread = x * self._scatter
        lo = x - spread
        hi = x + spread
        if lo > hi:
            lo, hi = hi, lo
        return lo + self._rng.next_double() * (hi - lo)

    def flip_coin(self) -> bool:
        return self._rng.next_double() < 0.5


# ---------------------------------------------------------------------------
# Layouts

@dataclass(frozen=True)
class Vertex:
    x: float
    y: float


@dataclass(frozen=True)
class District:
    """One rectangular district; boundary runs counterclockwise from the
    lower-left corner: (x0,y0), (x1,y0), (x1,y1), (x0,y1)."""

    boundary: tuple[Vertex, Vertex, Vertex, Vertex]
    index: tuple[int, int]

    def center(self) -> Vertex:
        v1, _, v3, _ = self.boundary
        return Vertex((v1.x + v3.x) / 2.0, (v1.y + v3.y) / 2.0)


@dataclass(frozen=True)
class ManhattanLayout:
    districts: tuple[District, ...]
    grid_dims: tuple[int, int]
    diameter: float
    center: Vertex


def manhattan_generate(num_districts: int, diameter: float, r: Randomizer) -> ManhattanLayout:
    """Lay out a Manhattan-style district grid.

    The grid is nx by ny with nx = floor(sqrt(n)) and ny = ceil(n/nx),
    so the district count may round up to the next full row. Grid lines
    are prefix sums of around(diameter) draws (all x lines first, then
    all y lines), which makes neighbouring districts share their edge
    coordinates exactly.
    """
    num_districts = int(num_districts)
    if num_districts < 1:
        raise ValueError("need at least one district")
    diameter = float(diameter)
    if diameter <= 0:
        raise ValueError(f"district diameter must be positive, got {diameter}")
    nx = int(math.floor(math.sqrt(num_districts)))
    ny = int(math.ceil(num_districts / nx))

    xs = [0.0]
    for _ in range(nx):
        xs.append(xs[-1] + r.around(diameter))
    ys = [0.0]
    for _ in range(ny):
        ys.append(ys[-1] + r.around(diameter))

    districts = []
    for i in range(nx):
        for j in range(ny):
            x0, x1 = xs[i], xs[i + 1]
            y0, y1 = ys[j], ys[j + 1]
            boundary = (Vertex(x0, y0), Vertex(x1, y0), Vertex(x1, y1), Vertex(x0, y1))
            districts.append(District(boundary=boundary, index=(i, j)))
    center = Vertex(xs[-1] / 2.0, ys[-1] / 2.0)
    return ManhattanLayout(
        districts=tuple(districts),
        grid_dims=(nx, ny),
        diameter=diameter,
        center=center,
    )


def district_distance_from_center(layout: ManhattanLayout, district: District) -> float:
    if district not in layout.districts:
        raise ValueError("district does not belong to this layout")
    c = district.center()
    return math.hypot(c.x - layout.center.x, c.y - layout.center.y)


# ---------------------------------------------------------------------------
# Prefab catalog

@dataclass(frozen=True)
class Prefab:
    name: str
    category: str  # "building" or "detail"
    box: tuple[float, float, float]


class PrefabCatalog:
    def __init__(self, catalog_id: str, prefabs):
        self.id = catalog_id
        self.prefabs = list(prefabs)
        self._by_name = {p.name: p for p in self.prefabs}

    def buildings(self) -> list[Prefab]:
        return [p for p in self.prefabs if p.category == "building"]

    def details(self) -> list[Prefab]:
        return [p for p in self.prefabs if p.category == "detail"]

    def get(self, name: str) -> Prefab:
        prefab = self._by_name.get(name)
        if prefab is None:
            known = ", ".join(sorted(self._by_name))
            raise LookupError(f"no prefab named {name!r} (catalog has: {known})")
        return prefab

    @classmethod
    def from_json_obj(cls, data) -> "PrefabCatalog":
        prefabs = []
        for raw in data["prefabs"]:
            box = tuple(float(v) for v in raw["box"])
            if len(box) != 3 or any(v <= 0 for v in box):
                raise ValueError(f"prefab {raw.get('name')!r} needs a positive 3d box")
            category = raw["category"]
            if category not in ("building", "detail"):
                raise ValueError(f"prefab {raw.get('name')!r} has unknown category {category!r}")
            prefabs.append(Prefab(name=raw["name"], category=category, box=box))
        return cls(data["id"], prefabs)


_default_catalog = None


def default_catalog() -> PrefabCatalog:
    global _default_catalog
    if _default_catalog is None:
        text = resources.files(__package__).joinpath("assets/catalog.json").read_text("utf-8")
        _default_catalog = PrefabCatalog.from_json_obj(json.loads(text))
    return _default_catalog


def catalog_manifest() -> dict:
    """The raw catalog manifest, as served by the HTTP API."""
    catalog = default_catalog()
    return {
        "id": catalog.id,
        "prefabs": [
            {"name": p.name, "category": p.category, "box": list(p.box)}
            for p in catalog.prefabs
        ],
    }


# ---------------------------------------------------------------------------
# Scene graph

KIND_PREFAB = "PREFAB"
KIND_GENERATED = "GENERATED"

TEX_WALL = "WALL"
TEX_WINDOW = "WINDOW"
TEX_DOOR = "DOOR"
TEX_ROOF = "ROOF"


class Quad(NamedTuple):
    # a NamedTuple rather than a dataclass: tall buildings mean
    # hundreds of thousands of quads, and tuple construction is cheap
    corners: tuple  # four (x, y, z) triples
    texture: str


@dataclass(frozen=True)
class SceneNode:
    id: str
    kind: str
    position: Vertex
    elevation: float
    scale: tuple[float, float, float]
    prefab: str | None = None
    quads: tuple[Quad, ...] | None = None


class Scene:
    """An append-only collection of placed nodes.

    Nodes are never removed or reordered; ids count up from n1 in the
    order things were placed, which is what keeps scene files stable
    for a given program and seed.
    """

    def __init__(self, catalog: PrefabCatalog | None = None):
        self.catalog = catalog or default_catalog()
        self.nodes: list[SceneNode] = []
        self.district_rects: list[dict] = []
        self._counter = 0

    def _next_id(self) -> str:
        self._counter += 1
        return f"n{self._counter}"

    def add_prefab(self, prefab: Prefab, x, y, scale=(1.0, 1.0, 1.0)) -> SceneNode:
        node = SceneNode(
            id=self._next_id(),
            kind=KIND_PREFAB,
            position=Vertex(float(x), float(y)),
            elevation=0.0,
            scale=tuple(float(s) for s in scale),
            prefab=prefab.name,
        )
        self.nodes.append(node)
        return node

    def add_generated(self, quads, x, y) -> SceneNode:
        node = SceneNode(
            id=self._next_id(),
            kind=KIND_GENERATED,
            position=Vertex(float(x), float(y)),
            elevation=0.0,
            scale=(1.0, 1.0, 1.0),
            quads=tuple(quads),
        )
        self.nodes.append(node)
        return node

    def record_layout(self, layout: ManhattanLayout):
        """Remember district rectangles so viewers can draw the street
        grid; purely informational, not a scene node."""
        for d in layout.districts:
            v1, _, v3, _ = d.boundary
            self.district_rects.append({
                "index": list(d.index),
                "min": [v1.x, v1.y],
                "max": [v3.x, v3.y],
            })


# ---------------------------------------------------------------------------
# Generators

def premade_building_generate(scene: Scene, r: Randomizer, x, y,
                              height=None, width=None) -> SceneNode:
    """Place a catalog building, scaled to the requested footprint and
    height. Which prefab is used comes from one discrete draw."""
    height = DEFAULT_BUILDING_HEIGHT if height is None else float(height)
    width = DEFAULT_BUILDING_WIDTH if width is None else float(width)
    if height <= 0 or width <= 0:
        raise ValueError("building height and width must be positive")
    buildings = scene.catalog.buildings()
    if not buildings:
        raise LookupError(f"catalog {scene.catalog.id!r} has no building prefabs")
    choice = int(r.discrete_interval(0, len(buildings) - 1))
    prefab = buildings[choice]
    scale = (width / prefab.box[0], width / prefab.box[1], height / prefab.box[2])
    return scene.add_prefab(prefab, x, y, scale)


def procedural_building_generate(scene: Scene, r: Randomizer, x, y,
                                 height=None, width=None,
                                 floor_height=FLOOR_HEIGHT) -> SceneNode:
    """Build a box building quad by quad.

    floor count = floor(height / floor_height), at least 1. Every floor
    contributes four side quads; the ground floor gets one DOOR and
    three WALLs, upper floors face WINDOW front and back and WALL on
    the sides. One ROOF quad closes the top, so a building always has
    4 * floors + 1 quads.
    """
    height = DEFAULT_BUILDING_HEIGHT if height is None else float(height)
    width = DEFAULT_BUILDING_WIDTH if width is None else float(width)
    if height <= 0 or width <= 0:
        raise ValueError("building height and width must be positive")
    floors = max(1, int(math.floor(height / floor_height)))
    x = float(x)
    y = float(y)
    half = width / 2.0
    x0, x1 = x - half, x + half
    y0, y1 = y - half, y + half

    quads = []
    add = quads.append
    for f in range(floors):
        z0 = f * floor_height
        z1 = (f + 1) * floor_height
        front = TEX_DOOR if f == 0 else TEX_WINDOW
        back = TEX_WALL if f == 0 else TEX_WINDOW
        a0, b0, c0, d0 = (x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0)
        a1, b1, c1, d1 = (x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)
        add(Quad((a0, b0, b1, a1), front))
        add(Quad((c0, d0, d1, c1), back))
        add(Quad((d0, a0, a1, d1), TEX_WALL))
        add(Quad((b0, c0, c1, b1), TEX_WALL))
    top = floors * floor_height
    quads.append(Quad(((x0, y0, top), (x1, y0, top), (x1, y1, top), (x0, y1, top)), TEX_ROOF))
    return scene.add_generated(quads, x, y)


def details_place(scene: Scene, name: str, x, y) -> SceneNode:
    """Place one detail prefab (tree, bench, ...) at unit scale."""
    prefab = scene.catalog.get(name)
    if prefab.category != "detail":
        raise LookupError(f"prefab {name!r} is a {prefab.category}, not a detail")
    return scene.add_prefab(prefab, x, y)


# ---------------------------------------------------------------------------
# Serialization

def _node_json(node: SceneNode) -> dict:
    data = {
        "id": node.id,
        "kind": node.kind,
        "position": [node.position.x, node.position.y],
        "elevation": node.elevation,
        "scale": list(node.scale),
    }
    if node.kind == KIND_PREFAB:
        data["prefab"] = node.prefab
    else:
        data["quads"] = [
            {"corners": [list(c) for c in q.corners], "texture": q.texture}
            for q in node.quads
        ]
    return data


def scene_serialize(scene: Scene) -> str:
    """Canonical scene JSON: sorted keys, no whitespace, bytes stable
    for a given program and seed."""
    doc: dict = {"nodes": [_node_json(n) for n in scene.nodes]}
    if scene.district_rects:
        doc["districts"] = list(scene.district_rects)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def scene_export_obj(scene: Scene) -> str:
    """Wavefront OBJ export.

    Generated geometry is emitted quad by quad with usemtl set to the
    quad's texture label. Prefab nodes become comment-annotated
    placeholder boxes built from the catalog's nominal bounding box and
    the node's scale.
    """
    lines = [f"# scene export ({len(scene.nodes)} nodes)"]
    vert_count = 0

    def emit_quad(corners, material):
        nonlocal vert_count
        if material is not None:
            lines.append(f"usemtl {material}")
        for cx, cy, cz in corners:
            lines.append(f"v {cx!r} {cy!r} {cz!r}")
        base = vert_count + 1
        lines.append(f"f {base} {base + 1} {base + 2} {base + 3}")
        vert_count += 4

    for node in scene.nodes:
        lines.append(f"o {node.id}")
        if node.kind == KIND_GENERATED:
            for quad in node.quads:
                emit_quad(quad.corners, quad.texture)
            continue
        prefab = scene.catalog.get(node.prefab)
        sx = prefab.box[0] * node.scale[0]
        sy = prefab.box[1] * node.scale[1]
        sz = prefab.box[2] * node.scale[2]
        lines.append(f"# prefab placeholder: {node.prefab}")
        x0, x1 = node.position.x - sx / 2.0, node.position.x + sx / 2.0
        y0, y1 = node.position.y - sy / 2.0, node.position.y + sy / 2.0
        z0, z1 = node.elevation, node.elevation + sz
        emit_quad(((x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0)), None)
        emit_quad(((x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)), None)
        emit_quad(((x0, y0, z0), (x1, y0, z0), (x1, y0, z1), (x0, y0, z1)), None)
        emit_quad(((x1, y1, z0), (x0, y1, z0), (x0, y1, z1), (x1, y1, z1)), None)
        emit_quad(((x0, y1, z0), (x0, y0, z0), (x0, y0, z1), (x0, y1, z1)), None)
        emit_quad(((x1, y0, z0), (x1, y1, z0), (x1, y1, z1), (x1, y0, z1)), None)
    return "\n".join(lines) + "\n"
