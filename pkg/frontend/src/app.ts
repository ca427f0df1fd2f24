/**
 * Single-page exploration UI.
 *
 * Layout: header (search, tabs, add-ontology), left controls (visualization
 * settings + highlight rules), central treemap, right panels (collection,
 * details, query builder, results). Each tab owns one backend instance and
 * keeps its own view state, rules, collection, and query canvas.
 */

import { ApiClient, ApiError, ConceptDetails } from "./api";
import { applyFocusDistortion } from "./fisheye";
import { cssColor, evaluateHighlightRules, visibleConcepts } from "./highlight";
import { CanvasItem, CanvasValidationError, syncQueryCanvas } from "./queryCanvas";
import { renderResults, ResultsView } from "./results";
import { collectCells, LayoutCell, layoutTreemap } from "./treemap";
import {
  ConceptSummary,
  defaultViewState,
  HighlightRule,
  Neighborhood,
  QueryResponse,
  Rgb,
  ViewState,
} from "./types";

interface Tab {
  name: string;
  state: ViewState;
  rules: HighlightRule[];
  collection: Map<string, string>; // id -> label
  pinned: Set<string>;
  canvas: CanvasItem;
  lastResult: QueryResponse | null;
  subgraph: Neighborhood | null;
  selected: string | null;
  hoverPath: string[];
  detailCards: Set<string>;
  showOnlyHighlighted: boolean;
  family: string;
  requestSeq: number;
}

const api = new ApiClient(
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8000",
);

const tabs: Tab[] = [];
let activeTab = -1;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function currentTab(): Tab | null {
  return activeTab >= 0 ? tabs[activeTab] : null;
}

// ---------------------------------------------------------------- header --

function renderTabs(): void {
  const bar = $("tabs");
  bar.replaceChildren();
  tabs.forEach((tab, i) => {
    const b = el("button", { class: i === activeTab ? "tab active" : "tab" }, tab.name);
    b.onclick = () => {
      activeTab = i;
      renderTabs();
      void refreshView();
    };
    bar.appendChild(b);
  });
  const plus = el("button", { class: "tab plus", title: "load an ontology" }, "+");
  plus.onclick = () => $("selection-panel").classList.toggle("hidden");
  bar.appendChild(plus);
}

function setupSearch(): void {
  const input = $("search") as HTMLInputElement;
  const results = $("search-results");
  let seq = 0;
  input.oninput = async () => {
    const tab = currentTab();
    const q = input.value.trim();
    results.replaceChildren();
    if (!tab || q.length < 2) return;
    const mySeq = ++seq;
    try {
      const { hits } = await api.search(tab.state.instanceId, q, 12);
      if (mySeq !== seq) return; // stale response
      for (const hit of hits) {
        const row = el("div", { class: "search-hit" }, `${hit.label} (${hit.id})`);
        row.onclick = () => {
          results.replaceChildren();
          input.value = "";
          void focusConcept(hit.id);
        };
        results.appendChild(row);
      }
    } catch {
      /* search errors are non-fatal */
    }
  };
}

function setupSelectionPanel(): void {
  ($("create-btn") as HTMLButtonElement).onclick = async () => {
    const status = $("create-status");
    status.textContent = "loading…";
    try {
      const ontologyText = ($("ontology-text") as HTMLTextAreaElement).value;
      const format = ($("ontology-format") as HTMLSelectElement).value as "obo" | "json";
      const family = ($("family-select") as HTMLSelectElement).value;
      const name = ($("instance-name") as HTMLInputElement).value || `tab ${tabs.length + 1}`;
      const mode = ($("embedding-mode") as HTMLSelectElement).value;
      let embedding;
      if (mode === "generate") {
        embedding = {
          mode: "generate" as const,
          alpha: Number(($("gen-alpha") as HTMLInputElement).value),
          dim: Number(($("gen-dim") as HTMLInputElement).value),
          seed: Number(($("gen-seed") as HTMLInputElement).value),
        };
      } else if (mode === "upload") {
        embedding = {
          mode: "upload" as const,
          data: ($("embedding-text") as HTMLTextAreaElement).value,
        };
      }
      const created = await api.createInstance({ ontology: ontologyText, format, family, name, embedding });
      if (created.job) {
        status.textContent = `generating embedding (${created.job.job_id})…`;
        const job = await api.waitForJob(created.job.job_id);
        if (job.state === "failed") throw new ApiError("JobFailed", job.detail, 500);
      }
      const roots = await findRoot(created.instance_id);
      tabs.push(newTab(name, created.instance_id, family, roots));
      activeTab = tabs.length - 1;
      $("selection-panel").classList.add("hidden");
      status.textContent = "";
      renderTabs();
      await refreshView();
    } catch (e) {
      status.textContent = e instanceof Error ? e.message : String(e);
    }
  };
}

async function findRoot(instanceId: string): Promise<string> {
  // Cheapest root discovery: depth-0 concepts rank first on any search of
  // their own label; instead walk up from any hit via the details endpoint.
  const { hits } = await api.search(instanceId, "a", 1).catch(() => ({ hits: [] as ConceptSummary[] }));
  let cur = hits[0]?.id;
  if (!cur) throw new ApiError("Empty", "ontology has no searchable concepts", 500);
  for (;;) {
    const details = await api.getConcept(instanceId, cur);
    if (details.parents.length === 0) return details.id;
    cur = details.parents[0];
  }
}

function newTab(name: string, instanceId: string, family: string, root: string): Tab {
  return {
    name,
    state: defaultViewState(instanceId, root),
    rules: [],
    collection: new Map(),
    pinned: new Set(),
    canvas: { kind: "group", op: "and", items: [] },
    lastResult: null,
    subgraph: null,
    selected: null,
    hoverPath: [],
    detailCards: new Set(),
    showOnlyHighlighted: false,
    family,
    requestSeq: 0,
  };
}

// -------------------------------------------------------------- controls --

function setupControls(): void {
  const bind = (id: string, apply: (tab: Tab, value: string) => void, refetch = false) => {
    const input = $(id) as HTMLInputElement | HTMLSelectElement;
    input.onchange = () => {
      const tab = currentTab();
      if (!tab) return;
      apply(tab, input.value);
      refetch ? void refreshView() : renderTreemap();
    };
  };
  bind("ctl-depth", (tab, v) => (tab.state.depth = Math.max(1, Number(v))), true);
  bind("ctl-ratio", (tab, v) => (tab.state.tilingRatio = Number(v)));
  bind("ctl-scaling", (tab, v) => (tab.state.scaling = v as ViewState["scaling"]));
  bind("ctl-normalize", (tab, v) => (tab.state.normalization = v === "on"));
  bind("ctl-layers", (tab, v) => (tab.state.showLayers = v === "on"));
  bind("ctl-focus", (tab, v) => (tab.state.focusMode = v === "on"));
  bind("ctl-only-highlighted", (tab, v) => (tab.showOnlyHighlighted = v === "on"));
  bind("ctl-stain", (tab, v) => {
    tab.state.similarityStain = v === "on" ? tab.lastResult : null;
  });
}

function setupHighlightPanel(): void {
  // Dropping a concept chip on the panel creates an exact-label rule.
  const panel = $("highlight-panel");
  panel.ondragover = (ev) => ev.preventDefault();
  panel.ondrop = (ev) => {
    ev.preventDefault();
    const data = ev.dataTransfer?.getData("text/concept");
    const tab = currentTab();
    if (!data || !tab) return;
    const { label } = JSON.parse(data);
    tab.rules.push({
      field: "label",
      predicate: { kind: "exact", value: label },
      color: hexToRgb(($("rule-color") as HTMLInputElement).value),
      negated: false,
      enabled: true,
    });
    renderRules();
    renderTreemap();
  };
  ($("rule-add") as HTMLButtonElement).onclick = () => {
    const tab = currentTab();
    if (!tab) return;
    const field = ($("rule-field") as HTMLSelectElement).value as HighlightRule["field"];
    const raw = ($("rule-value") as HTMLInputElement).value;
    const color = hexToRgb(($("rule-color") as HTMLInputElement).value);
    const negated = ($("rule-negated") as HTMLInputElement).checked;
    let rule: HighlightRule;
    if (field === "label") {
      rule = { field, predicate: { kind: "substring", value: raw }, color, negated, enabled: true };
    } else {
      const [lo, hi] = raw.split("..");
      const predicate =
        hi !== undefined
          ? { kind: "range" as const, min: lo ? Number(lo) : undefined, max: hi ? Number(hi) : undefined }
          : { kind: "equals" as const, value: Number(lo) };
      rule = { field, predicate, color, negated, enabled: true };
    }
    tab.rules.push(rule);
    renderRules();
    renderTreemap();
  };
}

function renderRules(): void {
  const tab = currentTab();
  const list = $("rule-list");
  list.replaceChildren();
  if (!tab) return;
  tab.rules.forEach((rule, i) => {
    const row = el("div", { class: "rule" });
    const swatch = el("span", { class: "swatch" });
    swatch.style.background = cssColor(rule.color);
    const desc = describeRule(rule);
    const toggle = el("input", { type: "checkbox" }) as HTMLInputElement;
    toggle.checked = rule.enabled;
    toggle.onchange = () => {
      rule.enabled = toggle.checked;
      renderTreemap();
    };
    const remove = el("button", {}, "×");
    remove.onclick = () => {
      tab.rules.splice(i, 1);
      renderRules();
      renderTreemap();
    };
    row.append(toggle, swatch, el("span", {}, desc), remove);
    list.appendChild(row);
  });
}

function describeRule(rule: HighlightRule): string {
  const p = rule.predicate;
  const body =
    p.kind === "substring"
      ? `label contains “${p.value}”`
      : p.kind === "exact"
        ? `label is “${p.value}”`
        : p.kind === "equals"
          ? `${rule.field} = ${p.value}`
          : `${rule.field} in [${p.min ?? "…"}, ${p.max ?? "…"}]`;
  return rule.negated ? `not (${body})` : body;
}

function hexToRgb(hex: string): Rgb {
  const v = hex.replace("#", "");
  return {
    r: parseInt(v.slice(0, 2), 16),
    g: parseInt(v.slice(2, 4), 16),
    b: parseInt(v.slice(4, 6), 16),
  };
}

// --------------------------------------------------------------- treemap --

async function refreshView(): Promise<void> {
  const tab = currentTab();
  if (!tab) return;
  const mySeq = ++tab.requestSeq;
  try {
    const subgraph = await api.neighborhood(
      tab.state.instanceId,
      tab.state.focusedConcept,
      tab.state.depth,
    );
    if (mySeq !== tab.requestSeq) return; // stale
    tab.subgraph = subgraph;
  } catch (e) {
    $("viz").textContent = e instanceof Error ? e.message : String(e);
    return;
  }
  renderTreemap();
  await renderDetails();
}

function renderTreemap(): void {
  const tab = currentTab();
  const viz = $("viz");
  viz.replaceChildren();
  if (!tab || !tab.subgraph) return;

  const viewport = { x: 0, y: 0, w: viz.clientWidth || 900, h: viz.clientHeight || 600 };
  let layout = layoutTreemap(tab.subgraph, tab.state, viewport);
  if (!layout) return;
  layout = applyFocusDistortion(layout, tab.hoverPath, tab.state.loci, tab.state.focusMode, {
    detailCards: tab.detailCards,
  });

  const summaries = tab.subgraph.nodes;
  const stains = evaluateHighlightRules(tab.rules, summaries);
  const visible = new Set(visibleConcepts(summaries, stains, tab.showOnlyHighlighted).map((c) => c.id));
  const results: ResultsView | null = tab.state.similarityStain
    ? renderResults(tab.state.similarityStain, new Set(summaries.map((c) => c.id)), true)
    : null;

  for (const cell of collectCells(layout)) {
    if (!visible.has(cell.id)) continue;
    const node = el("div", { class: "cell", "data-id": cell.id });
    node.style.cssText = `left:${cell.x}px;top:${cell.y}px;width:${cell.w}px;height:${cell.h}px;z-index:${cell.depth}`;
    const rule = stains.get(cell.id);
    if (rule) node.style.outline = `3px solid ${cssColor(rule)}`;
    const stain = results?.stains.get(cell.id);
    if (stain) node.style.background = cssColor(stain.color, 0.15 + 0.85 * stain.opacity);
    if (tab.state.loci.has(cell.id)) node.classList.add("locus");
    if (tab.detailCards.has(cell.id)) {
      node.appendChild(el("div", { class: "card" }, `${cell.label} — pinned details`));
    }
    const label = cell.layerLabel ? `${cell.label} · ${cell.layerLabel}` : cell.label;
    node.appendChild(el("span", { class: "cell-label" }, label));
    node.title = `${cell.label} (${cell.id})`;
    node.draggable = true;
    node.ondragstart = (ev) => {
      ev.stopPropagation();
      ev.dataTransfer?.setData("text/concept", JSON.stringify({ id: cell.id, label: cell.label }));
    };
    node.onclick = (ev) => {
      ev.stopPropagation();
      void focusConcept(cell.id);
    };
    node.oncontextmenu = (ev) => {
      ev.preventDefault();
      ev.stopPropagation();
      toggleLocus(cell.id);
    };
    node.ondblclick = (ev) => {
      // a locked locus can swap its interior for a details card
      ev.stopPropagation();
      if (!tab.state.loci.has(cell.id)) return;
      tab.detailCards.has(cell.id) ? tab.detailCards.delete(cell.id) : tab.detailCards.add(cell.id);
      renderTreemap();
    };
    node.onmouseenter = () => {
      if (!tab.state.focusMode) return;
      tab.hoverPath = hoverPathTo(layout!, cell.id);
      renderTreemap();
    };
    viz.appendChild(node);
  }
}

function hoverPathTo(root: LayoutCell, id: string): string[] {
  const path: string[] = [];
  const walk = (cell: LayoutCell, trail: string[]): boolean => {
    if (cell.id === id) {
      path.push(...trail);
      return true;
    }
    return cell.children.some((c) => walk(c, [...trail, c.id]));
  };
  walk(root, []);
  return path.length ? path : [id];
}

function toggleLocus(id: string): void {
  const tab = currentTab();
  if (!tab) return;
  if (tab.state.loci.has(id)) {
    tab.state.loci.delete(id);
    tab.detailCards.delete(id);
  } else {
    tab.state.loci.add(id);
    tab.pinned.add(id);
  }
  renderTreemap();
}

async function focusConcept(id: string): Promise<void> {
  const tab = currentTab();
  if (!tab) return;
  tab.state.focusedConcept = id;
  tab.selected = id;
  tab.hoverPath = [];
  await refreshView();
}

// ---------------------------------------------------- collection/details --

function setupCollection(): void {
  const panel = $("collection");
  panel.ondragover = (ev) => ev.preventDefault();
  panel.ondrop = (ev) => {
    ev.preventDefault();
    const data = ev.dataTransfer?.getData("text/concept");
    if (!data) return;
    const { id, label } = JSON.parse(data);
    currentTab()?.collection.set(id, label);
    renderCollection();
  };
}

function renderCollection(): void {
  const tab = currentTab();
  const list = $("collection-list");
  list.replaceChildren();
  if (!tab) return;
  for (const [id, label] of tab.collection) {
    const chip = el("div", { class: "chip", draggable: "true" }, label);
    if (tab.pinned.has(id)) chip.classList.add("pinned");
    chip.ondragstart = (ev) =>
      ev.dataTransfer?.setData("text/concept", JSON.stringify({ id, label }));
    chip.onclick = () => void focusConcept(id);
    const add = el("button", { title: "add to query" }, "→Q");
    add.onclick = (ev) => {
      ev.stopPropagation();
      addChipToCanvas({ kind: "chip", id, label });
    };
    chip.appendChild(add);
    list.appendChild(chip);
  }
}

async function renderDetails(): Promise<void> {
  const tab = currentTab();
  const panel = $("details");
  if (!tab || !tab.selected) {
    panel.textContent = "select a concept";
    return;
  }
  try {
    const d: ConceptDetails = await api.getConcept(tab.state.instanceId, tab.selected);
    panel.replaceChildren(
      el("h3", {}, d.label),
      el("div", { class: "mono" }, d.id),
      el("p", {}, d.definition ?? "(no definition)"),
      el("div", {}, `depth ${d.metadata.depth} · subtree ${d.metadata.subtree_size} · children ${d.metadata.child_count}`),
      el("div", {}, `parents: ${d.parents.join(", ") || "—"}`),
      el("div", {}, `children: ${d.children.join(", ") || "—"}`),
    );
  } catch (e) {
    panel.textContent = e instanceof Error ? e.message : String(e);
  }
}

// ----------------------------------------------------------- query panel --

function addChipToCanvas(chip: CanvasItem): void {
  const tab = currentTab();
  if (!tab || tab.canvas.kind !== "group") return;
  tab.canvas.items.push(chip);
  renderCanvas();
}

function renderCanvas(): void {
  const tab = currentTab();
  const host = $("canvas-items");
  host.replaceChildren();
  if (!tab || tab.canvas.kind !== "group") return;
  ($("canvas-op") as HTMLSelectElement).value = tab.canvas.op;
  tab.canvas.items.forEach((item, i) => {
    const node = el("div", { class: "canvas-item" }, describeItem(item));
    const not = el("button", { title: "negate" }, "¬");
    not.onclick = () => {
      const group = tab.canvas as Extract<CanvasItem, { kind: "group" }>;
      group.items[i] = item.kind === "not" ? item.item : { kind: "not", item };
      renderCanvas();
    };
    const remove = el("button", {}, "×");
    remove.onclick = () => {
      (tab.canvas as Extract<CanvasItem, { kind: "group" }>).items.splice(i, 1);
      renderCanvas();
    };
    node.append(not, remove);
    host.appendChild(node);
  });
  try {
    $("canvas-echo").textContent =
      tab.canvas.items.length > 0 ? syncQueryCanvas(canvasRoot(tab)).echo : "";
    $("canvas-error").textContent = "";
  } catch (e) {
    $("canvas-echo").textContent = "";
    $("canvas-error").textContent = e instanceof CanvasValidationError ? e.message : String(e);
  }
}

function describeItem(item: CanvasItem): string {
  if (item.kind === "chip") return item.label;
  if (item.kind === "not") return `NOT ${describeItem(item.item)}`;
  return `(${item.items.map(describeItem).join(` ${item.op.toUpperCase()} `)})`;
}

function canvasRoot(tab: Tab): CanvasItem {
  const group = tab.canvas as Extract<CanvasItem, { kind: "group" }>;
  return group.items.length === 1 ? group.items[0] : group;
}

function setupQueryPanel(): void {
  const host = $("query-canvas");
  host.ondragover = (ev) => ev.preventDefault();
  host.ondrop = (ev) => {
    ev.preventDefault();
    const data = ev.dataTransfer?.getData("text/concept");
    if (!data) return;
    const { id, label } = JSON.parse(data);
    addChipToCanvas({ kind: "chip", id, label });
  };
  ($("canvas-op") as HTMLSelectElement).onchange = () => {
    const tab = currentTab();
    if (tab && tab.canvas.kind === "group") {
      tab.canvas.op = (($("canvas-op") as HTMLSelectElement).value as "and") || "and";
      renderCanvas();
    }
  };
  ($("query-submit") as HTMLButtonElement).onclick = async () => {
    const tab = currentTab();
    if (!tab) return;
    const error = $("canvas-error");
    try {
      const { ast } = syncQueryCanvas(canvasRoot(tab));
      const k = Number(($("query-k") as HTMLInputElement).value) || 20;
      const result = await api.query(tab.state.instanceId, { ast }, k);
      tab.lastResult = result;
      if (($("ctl-stain") as HTMLSelectElement).value === "on") {
        tab.state.similarityStain = result;
      }
      renderResultsPanel();
      renderTreemap();
    } catch (e) {
      error.textContent = e instanceof Error ? e.message : String(e);
    }
  };
}

function renderResultsPanel(): void {
  const tab = currentTab();
  const panel = $("results-list");
  const notice = $("results-notice");
  panel.replaceChildren();
  notice.textContent = "";
  if (!tab || !tab.lastResult) return;
  const visibleIds = new Set((tab.subgraph?.nodes ?? []).map((n) => n.id));
  const view = renderResults(tab.lastResult, visibleIds, tab.state.similarityStain !== null);
  $("results-echo").textContent = view.echo;
  if (view.notice) notice.textContent = view.notice;
  for (const entry of view.entries) {
    const row = el("div", { class: "hit", draggable: "true" });
    const bar = el("span", { class: "score" }, entry.hit.score.toFixed(4));
    bar.style.background = entry.stainCss;
    row.append(bar, el("span", {}, ` ${entry.hit.label}`));
    row.ondragstart = (ev) =>
      ev.dataTransfer?.setData(
        "text/concept",
        JSON.stringify({ id: entry.hit.id, label: entry.hit.label }),
      );
    if (entry.needsLocate) {
      const locate = el("button", { title: "refocus the treemap here" }, "locate");
      locate.onclick = () => void focusConcept(entry.hit.id);
      row.appendChild(locate);
    }
    panel.appendChild(row);
  }
}

// ------------------------------------------------------------------ init --

export function init(): void {
  renderTabs();
  setupSearch();
  setupSelectionPanel();
  setupControls();
  setupHighlightPanel();
  setupCollection();
  setupQueryPanel();
  renderRules();
  renderCollection();
  renderCanvas();
  void (async () => {
    // adopt any preloaded instances as tabs
    try {
      const { instances } = await api.listInstances();
      for (const inst of instances) {
        const root = await findRoot(inst.instance_id);
        tabs.push(newTab(inst.name, inst.instance_id, inst.family, root));
      }
      if (tabs.length > 0) {
        activeTab = 0;
        renderTabs();
        await refreshView();
      }
    } catch {
      /* backend not up yet; the + button still works */
    }
  })();
}

if (typeof document !== "undefined" && document.getElementById("viz")) {
  init();
}
