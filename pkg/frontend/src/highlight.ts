/**
 * Color-rule annotation of the visualization.
 *
 * Each enabled rule matches concepts by label (substring/exact) or by a
 * numeric field (range/equality); negation inverts the match. A concept
 * matched by several rules gets the arithmetic per-channel mean of their
 * colors; unmatched concepts carry no stain.
 */

import type { ConceptSummary, HighlightRule, Rgb } from "./types";

export function ruleMatches(rule: HighlightRule, concept: ConceptSummary): boolean {
  if (!rule.enabled) return false;
  let hit: boolean;
  if (rule.field === "label") {
    const label = concept.label.toLowerCase();
    const p = rule.predicate;
    if (p.kind === "substring") hit = label.includes(p.value.toLowerCase());
    else if (p.kind === "exact") hit = label === p.value.toLowerCase();
    else hit = false;
  } else {
    const value = concept[rule.field];
    const p = rule.predicate;
    if (p.kind === "range") {
      hit = (p.min === undefined || value >= p.min) && (p.max === undefined || value <= p.max);
    } else if (p.kind === "equals") {
      hit = value === p.value;
    } else {
      hit = false;
    }
  }
  return rule.negated ? !hit : hit;
}

/** Integer per-channel mean; order-independent by commutativity. */
export function blendColors(colors: Rgb[]): Rgb {
  const n = colors.length;
  const sum = colors.reduce(
    (acc, c) => ({ r: acc.r + c.r, g: acc.g + c.g, b: acc.b + c.b }),
    { r: 0, g: 0, b: 0 },
  );
  return {
    r: Math.floor(sum.r / n),
    g: Math.floor(sum.g / n),
    b: Math.floor(sum.b / n),
  };
}

export function evaluateHighlightRules(
  rules: HighlightRule[],
  concepts: ConceptSummary[],
): Map<string, Rgb> {
  const out = new Map<string, Rgb>();
  for (const concept of concepts) {
    const hits = rules.filter((r) => ruleMatches(r, concept)).map((r) => r.color);
    if (hits.length > 0) out.set(concept.id, blendColors(hits));
  }
  return out;
}

/** The "show only highlighted" visibility filter. */
export function visibleConcepts(
  concepts: ConceptSummary[],
  stains: Map<string, Rgb>,
  onlyHighlighted: boolean,
): ConceptSummary[] {
  if (!onlyHighlighted) return concepts;
  return concepts.filter((c) => stains.has(c.id));
}

export function cssColor(color: Rgb, alpha = 1): string {
  return `rgba(${color.r}, ${color.g}, ${color.b}, ${alpha})`;
}
