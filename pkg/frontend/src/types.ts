/** Payload shapes of the corgie HTTP API (all carry schema: 1). */

export interface DatasetPayload {
  schema: number;
  nNodes: number;
  nEdges: number;
  nodeTypes: string[];
  types: number[];
  labels: string[];
  edges: [number, number][];
  denseFeatures: string[];
  denseValues: number[][];
  denseMask: boolean[][];
  sparseCount: number;
  embeddingDim: number;
  predictionKind: "none" | "nodeClassification" | "linkPrediction";
  k: number;
  diagnostics: string[];
  trueLabels?: number[];
  predLabels?: number[];
  correct?: boolean[];
}

export interface NeighborBlockPayload {
  row: number;
  col: number;
  members: number[];
  cells: number[][];
}

export interface LatentPayload {
  schema: number;
  positions: [number, number][];
  colors: string[];
  method: string;
  params: Record<string, unknown>;
  blocks: { gridSize: number; blocks: NeighborBlockPayload[] };
}

export interface GlobalLayoutPayload {
  schema: number;
  positions: [number, number][];
}

export interface KhopBoxPayload {
  group: string;
  rect: [number, number, number, number];
  transform: string;
  nodes: number[];
}

export interface KhopLayoutPayload {
  schema: number;
  k: number;
  seed: number;
  distanceMode: string;
  bundled: boolean;
  energy: number;
  tuplesEvaluated: number;
  boxes: KhopBoxPayload[];
  positions: [number, number, number][]; // [nodeId, x, y]
  edges: [number, number][];
  polylines: [number, number][][];
  timings?: Record<string, number>;
}

export interface DenseHistogramPayload {
  feature: string;
  binEdges: number[];
  counts: number[];
}

export interface FeaturesPayload {
  schema: number;
  dense: { scope: string; histograms: DenseHistogramPayload[] }[];
  sparse: { scope: string; counts: number[]; strip: number[]; rowMax: number }[];
}

export interface DistanceChartPayload {
  schema: number;
  xSpace: string;
  ySpace: string;
  scope: string;
  scale: string;
  gridSize: number;
  cells: number[][];
  xHist: number[];
  yHist: number[];
  includedCount: number;
  excludedCount: number;
  sampleMeta: { sampled: boolean; population: number };
}

export interface BrushResultPayload {
  schema: number;
  pairs: [number, number][];
  x: number[];
  y: number[];
}

export interface SessionPayload {
  schema: number;
  id: string;
  k: number;
  focalGroups: number[][];
  selection: number[];
  settings: {
    nodeColorMode: string;
    colorFeature: string | null;
    hoverExtendsToNeighbors: number;
    edgeBundling: boolean;
    distanceMode: string;
  };
}

export interface FocusAccepted {
  schema: number;
  jobId: number | null;
}

/** Everything the views render from; khop is null until a focus completes. */
export interface Payloads {
  dataset: DatasetPayload;
  latent: LatentPayload;
  globalLayout: GlobalLayoutPayload;
  features: FeaturesPayload;
  distances: DistanceChartPayload[];
  khop: KhopLayoutPayload | null;
  focalGroups: number[][];
}
