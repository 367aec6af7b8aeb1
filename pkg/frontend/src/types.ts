// Wire types mirroring the server's scene JSON and API responses.
// The UI never recomputes any of these figures; it displays them verbatim.

export interface Viewport {
  xmin: number;
  ymin: number;
  xmax: number;
  ymax: number;
  width: number;
  height: number;
}

export interface SceneEllipse {
  cx: number;
  cy: number;
  w: number;
  h: number;
}

export interface SceneSector {
  coord: number;
  label: string;
  s0: number;
  s1: number;
  tick: [number, number];
  labelAt: [number, number];
}

export interface SceneGraph {
  id: number;
  class: string;
  visible: boolean;
  nodes: [number, number][];
}

export interface RuleStatsJson {
  hitsByClass: Record<string, number>;
  totalHits: number;
  precision: number;
  coverageInClass: number;
  coverageTotal: number;
  activeTotal: number;
  activeInClass: number;
  tieBroken: boolean;
}

export interface SceneRect {
  id: number;
  class: string;
  mode: string;
  xmin: number;
  ymin: number;
  xmax: number;
  ymax: number;
  stats: RuleStatsJson;
}

export interface SideEllipseJson {
  coord: number;
  role: string;
  cx: number;
  cy: number;
  rw: number;
  rh: number;
}

export interface Scene {
  version: number;
  viewport: Viewport;
  ellipse: SceneEllipse;
  sectors: SceneSector[];
  graphs: SceneGraph[];
  rects: SceneRect[];
  legend: Record<string, string>;
  sideEllipses: SideEllipseJson[];
}

export interface UploadResponse {
  id: string;
  n: number;
  classes: string[];
  caseCount: number;
}

export interface EvalRecordJson {
  hitsByClass: Record<string, number>;
  totalHits: number;
  dominantClass: string | null;
  precision: number;
  coverageInClass: number;
  coverageTotal: number;
  activeTotal: number;
  activeInClass: number;
  tieBroken: boolean;
}

export interface RuleJson {
  rect: [number, number, number, number];
  mode: string;
  class: string;
  order: number;
  stats: RuleStatsJson;
}

export interface AcceptResponse {
  rule: RuleJson;
  activeCount: number;
}

export interface MineResponse {
  rules: RuleJson[];
  activeCount: number;
}

export interface ReportRow {
  rule: string;
  class: string;
  coverageInClassPct: number;
  precisionPct: number;
  covered: number;
}

export interface ReportDoc {
  version: number;
  rules: ReportRow[];
  totals: {
    caseCount: number;
    covered: number;
    uncovered: number;
    recallPct: number;
    weightedPrecisionPct: number;
  };
}

export interface RectSpec {
  xmin: number;
  ymin: number;
  xmax: number;
  ymax: number;
}

export type FiringMode = "point" | "intersect";
export type Visibility = "all" | "outside-rules" | "inside-rules";
