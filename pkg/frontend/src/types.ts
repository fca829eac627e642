// JSON shapes shared with the flowc HTTP service.

export interface BlockJson {
  kind: "block";
  code: string[];
  next: string | null;
}

export interface BranchJson {
  kind: "branch";
  condition: string;
  true_next: string | null;
  false_next: string | null;
}

export type InstructionJson = BlockJson | BranchJson;

export interface FlowchartJson {
  id: string;
  entry: string;
  instructions: Record<string, InstructionJson>;
  metadata: Record<string, unknown>;
}

export interface DiagnosticJson {
  rule: string;
  instruction: string | null;
  message: string;
}

export interface DiagnosticsBody {
  diagnostics: DiagnosticJson[];
}

export interface CompileBody {
  code: string;
}

export interface QuadJson {
  corners: [number, number, number][];
  texture: string;
}

export interface SceneNodeJson {
  id: string;
  kind: "PREFAB" | "GENERATED";
  position: [number, number];
  elevation: number;
  scale: [number, number, number];
  prefab?: string;
  quads?: QuadJson[];
}

export interface DistrictRectJson {
  index: [number, number];
  min: [number, number];
  max: [number, number];
}

export interface SceneJson {
  nodes: SceneNodeJson[];
  districts?: DistrictRectJson[];
}

export interface RunStatsJson {
  steps_executed: number;
  while_count: number;
  if_count: number;
  stmt_count: number;
  max_depth: number;
}

export interface RunBody {
  stdout: string;
  scene: SceneJson;
  stats: RunStatsJson;
  error: "step_limit" | "runtime_error" | null;
  detail?: string;
}

export interface PrefabJson {
  name: string;
  category: "building" | "detail";
  box: [number, number, number];
}

export interface CatalogJson {
  id: string;
  prefabs: PrefabJson[];
}

export function isBranch(inst: InstructionJson): inst is BranchJson {
  return inst.kind === "branch";
}

export function isBlock(inst: InstructionJson): inst is BlockJson {
  return inst.kind === "block";
}
