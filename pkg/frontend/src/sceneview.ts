// Top-down 2D view model for a run's scene JSON.
//
// Districts become outlined rectangles, buildings filled footprints
// shaded by height, details small icons. World y points north; SVG y
// points down, so every rectangle is emitted with y negated. The
// catalog supplies prefab footprints (box times the node's scale,
// centered on the node position, the same convention the toolkit's
// OBJ exporter uses).

import type { CatalogJson, PrefabJson, SceneJson, SceneNodeJson } from "./types";

export interface RectVM {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface DistrictVM extends RectVM {
  label: string;
}

export interface BuildingVM extends RectVM {
  id: string;
  worldHeight: number;
  /** 0 = shortest in scene, 1 = tallest; drives footprint shading */
  shade: number;
}

export interface DetailVM {
  id: string;
  x: number;
  y: number;
  radius: number;
  name: string;
}

export interface SceneView {
  viewBox: string;
  districts: DistrictVM[];
  buildings: BuildingVM[];
  details: DetailVM[];
}

function rectFromBounds(minX: number, minY: number, maxX: number, maxY: number): RectVM {
  return { x: minX, y: -maxY, width: maxX - minX, height: maxY - minY };
}

interface Classified {
  node: SceneNodeJson;
  rect: RectVM;
  worldHeight: number;
  isDetail: boolean;
  prefabName: string | null;
}

function classify(node: SceneNodeJson, prefabs: Map<string, PrefabJson>): Classified | null {
  if (node.kind === "GENERATED") {
    const quads = node.quads ?? [];
    if (quads.length === 0) return null;
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    let maxZ = 0;
    for (const quad of quads) {
      for (const [cx, cy, cz] of quad.corners) {
        minX = Math.min(minX, cx);
        minY = Math.min(minY, cy);
        maxX = Math.max(maxX, cx);
        maxY = Math.max(maxY, cy);
        maxZ = Math.max(maxZ, cz);
      }
    }
    return {
      node,
      rect: rectFromBounds(minX, minY, maxX, maxY),
      worldHeight: maxZ,
      isDetail: false,
      prefabName: null,
    };
  }
  const prefab = node.prefab !== undefined ? prefabs.get(node.prefab) : undefined;
  // an unknown prefab still gets a footprint so nothing vanishes silently
  const box: [number, number, number] = prefab !== undefined ? prefab.box : [10, 10, 10];
  const sx = box[0] * node.scale[0];
  const sy = box[1] * node.scale[1];
  const sz = box[2] * node.scale[2];
  const [px, py] = node.position;
  return {
    node,
    rect: rectFromBounds(px - sx / 2, py - sy / 2, px + sx / 2, py + sy / 2),
    worldHeight: node.elevation + sz,
    isDetail: prefab !== undefined && prefab.category === "detail",
    prefabName: node.prefab ?? null,
  };
}

export function buildSceneView(scene: SceneJson, catalog: CatalogJson | null): SceneView {
  const prefabs = new Map<string, PrefabJson>();
  for (const prefab of catalog?.prefabs ?? []) prefabs.set(prefab.name, prefab);

  const districts: DistrictVM[] = (scene.districts ?? []).map((d) => ({
    ...rectFromBounds(d.min[0], d.min[1], d.max[0], d.max[1]),
    label: `${d.index[0]},${d.index[1]}`,
  }));

  const classified: Classified[] = [];
  for (const node of scene.nodes) {
    const c = classify(node, prefabs);
    if (c !== null) classified.push(c);
  }

  let tallest = 0;
  for (const c of classified) {
    if (!c.isDetail) tallest = Math.max(tallest, c.worldHeight);
  }

  const buildings: BuildingVM[] = [];
  const details: DetailVM[] = [];
  for (const c of classified) {
    if (c.isDetail) {
      const [px, py] = c.node.position;
      details.push({
        id: c.node.id,
        x: px,
        y: -py,
        radius: Math.max(1, Math.max(c.rect.width, c.rect.height) / 2),
        name: c.prefabName ?? c.node.id,
      });
    } else {
      buildings.push({
        id: c.node.id,
        ...c.rect,
        worldHeight: c.worldHeight,
        shade: tallest > 0 ? c.worldHeight / tallest : 0,
      });
    }
  }

  return { viewBox: computeViewBox(districts, buildings, details), districts, buildings, details };
}

function computeViewBox(
  districts: DistrictVM[],
  buildings: BuildingVM[],
  details: DetailVM[],
): string {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  const cover = (r: RectVM) => {
    minX = Math.min(minX, r.x);
    minY = Math.min(minY, r.y);
    maxX = Math.max(maxX, r.x + r.width);
    maxY = Math.max(maxY, r.y + r.height);
  };
  for (const d of districts) cover(d);
  for (const b of buildings) cover(b);
  for (const d of details) {
    cover({ x: d.x - d.radius, y: d.y - d.radius, width: 2 * d.radius, height: 2 * d.radius });
  }
  if (minX > maxX) return "0 0 100 100";
  const width = Math.max(maxX - minX, 1);
  const height = Math.max(maxY - minY, 1);
  const margin = 0.05 * Math.max(width, height);
  return [minX - margin, minY - margin, width + 2 * margin, height + 2 * margin]
    .map((v) => round3(v))
    .join(" ");
}

function round3(v: number): number {
  return Math.round(v * 1000) / 1000;
}

/** Footprint fill: light for low buildings, dark for tall ones. */
export function shadeColor(shade: number): string {
  const level = Math.round(208 - 144 * Math.min(Math.max(shade, 0), 1));
  return `rgb(${level}, ${level}, ${level + 16})`;
}
