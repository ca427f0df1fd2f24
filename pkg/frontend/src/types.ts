/** Wire formats of the backend API plus client-side view state. */

export interface ConceptSummary {
  id: string;
  label: string;
  depth: number;
  subtree_size: number;
  child_count: number;
  is_leaf: boolean;
}

export interface NeighborhoodNode extends ConceptSummary {
  definition: string | null;
  parents: string[];
  is_focus: boolean;
  is_ancestor: boolean;
}

export interface Neighborhood {
  focus: string;
  depth: number;
  nodes: NeighborhoodNode[];
  edges: { parent: string; child: string }[];
}

export interface RankedHit extends ConceptSummary {
  score: number;
}

export interface QueryResponse {
  echo: string;
  zero_query: boolean;
  k: number;
  family: string;
  hits: RankedHit[];
}

export interface InstanceInfo {
  instance_id: string;
  name: string;
  concepts: number;
  family: string;
  dim: number | null;
  ready: boolean;
}

export interface JobInfo {
  job_id: string;
  state: "queued" | "running" | "done" | "failed";
  detail: string;
}

/** AST wire format shared with the backend query engine. */
export type AstNode =
  | { op: "ref"; id: string }
  | { op: "and" | "or"; children: AstNode[] }
  | { op: "not"; children: [AstNode] };

export type ScalingMode = "equal" | "subtree" | "children";

export interface ViewState {
  instanceId: string;
  focusedConcept: string;
  depth: number;
  tilingRatio: number; // preferred cell aspect ratio (width / height)
  scaling: ScalingMode;
  normalization: boolean;
  showLayers: boolean;
  focusMode: boolean;
  loci: Set<string>;
  similarityStain: QueryResponse | null;
}

export function defaultViewState(instanceId: string, focus: string): ViewState {
  return {
    instanceId,
    focusedConcept: focus,
    depth: 2,
    tilingRatio: 1.6,
    scaling: "equal",
    normalization: false,
    showLayers: false,
    focusMode: false,
    loci: new Set(),
    similarityStain: null,
  };
}

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

export type HighlightPredicate =
  | { kind: "substring"; value: string }
  | { kind: "exact"; value: string }
  | { kind: "range"; min?: number; max?: number }
  | { kind: "equals"; value: number };

export interface HighlightRule {
  field: "label" | "subtree_size" | "child_count" | "depth";
  predicate: HighlightPredicate;
  color: Rgb;
  negated: boolean;
  enabled: boolean;
}
