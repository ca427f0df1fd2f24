import { describe, expect, it } from "vitest";

import { blendColors, evaluateHighlightRules, ruleMatches, visibleConcepts } from "../src/highlight";
import type { ConceptSummary, HighlightRule } from "../src/types";
import { hpoLikeSummaries } from "./fixtures";

const BLUE = { r: 0, g: 0, b: 255 };
const RED = { r: 255, g: 0, b: 0 };

function labelRule(value: string, overrides: Partial<HighlightRule> = {}): HighlightRule {
  return {
    field: "label",
    predicate: { kind: "substring", value },
    color: BLUE,
    negated: false,
    enabled: true,
    ...overrides,
  };
}

describe("ruleMatches", () => {
  const summaries = hpoLikeSummaries as ConceptSummary[];

  it("label-contains bulbar matches the bulbar concepts only", () => {
    const rule = labelRule("bulbar");
    const matched = summaries.filter((c) => ruleMatches(rule, c)).map((c) => c.label);
    expect(matched.sort()).toEqual(["Bulbar palsy", "Pseudobulbar paralysis", "Pseudobulbar signs"]);
    expect(matched).not.toContain("Dysphagia");
  });

  it("disabled rules match nothing", () => {
    const rule = labelRule("bulbar", { enabled: false });
    expect(summaries.some((c) => ruleMatches(rule, c))).toBe(false);
  });

  it("negation inverts the match", () => {
    const rule = labelRule("bulbar", { negated: true });
    const matched = summaries.filter((c) => ruleMatches(rule, c)).map((c) => c.label);
    expect(matched).toContain("Dysphagia");
    expect(matched).not.toContain("Bulbar palsy");
  });

  it("numeric range and equality predicates work on metadata fields", () => {
    const range: HighlightRule = {
      field: "depth",
      predicate: { kind: "range", min: 5 },
      color: RED,
      negated: false,
      enabled: true,
    };
    expect(summaries.filter((c) => ruleMatches(range, c)).map((c) => c.id).sort()).toEqual([
      "HP:0001350",
      "HP:0007024",
    ]);
    const eq: HighlightRule = {
      field: "child_count",
      predicate: { kind: "equals", value: 1 },
      color: RED,
      negated: false,
      enabled: true,
    };
    expect(summaries.filter((c) => ruleMatches(eq, c)).map((c) => c.id)).toEqual(["HP:0002200"]);
  });

  it("exact label match is case-insensitive", () => {
    const rule = labelRule("dysphagia");
    rule.predicate = { kind: "exact", value: "DYSPHAGIA" };
    expect(summaries.filter((c) => ruleMatches(rule, c)).map((c) => c.id)).toEqual(["HP:0002015"]);
  });
});

describe("blendColors", () => {
  it("two-rule blend equals the integer channel mean", () => {
    expect(blendColors([BLUE, RED])).toEqual({ r: 127, g: 0, b: 127 });
  });

  it("is order-independent", () => {
    const colors = [BLUE, RED, { r: 10, g: 200, b: 30 }];
    const reversed = [...colors].reverse();
    expect(blendColors(colors)).toEqual(blendColors(reversed));
  });

  it("single color passes through", () => {
    expect(blendColors([RED])).toEqual(RED);
  });
});

describe("evaluateHighlightRules", () => {
  const summaries = hpoLikeSummaries as ConceptSummary[];

  it("stains exactly the matching concepts", () => {
    const stains = evaluateHighlightRules([labelRule("bulbar")], summaries);
    expect([...stains.keys()].sort()).toEqual(["HP:0001283", "HP:0002200", "HP:0007024"]);
  });

  it("blends when several rules hit the same concept", () => {
    const rules = [labelRule("bulbar"), labelRule("palsy", { color: RED })];
    const stains = evaluateHighlightRules(rules, summaries);
    expect(stains.get("HP:0001283")).toEqual({ r: 127, g: 0, b: 127 });
    expect(stains.get("HP:0002200")).toEqual(BLUE);
  });

  it("show-only-highlighted filters unmatched concepts", () => {
    const stains = evaluateHighlightRules([labelRule("bulbar")], summaries);
    const visible = visibleConcepts(summaries, stains, true);
    expect(visible.map((c) => c.id).sort()).toEqual(["HP:0001283", "HP:0002200", "HP:0007024"]);
    expect(visibleConcepts(summaries, stains, false)).toHaveLength(summaries.length);
  });
});
