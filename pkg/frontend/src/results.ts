/**
 * Query-result presentation state: ranked list entries, the similarity
 * stain (fixed hue, opacity = cosine score), and the zero-signal notice for
 * queries that annihilate under Łukasiewicz negation.
 */

import type { QueryResponse, RankedHit, Rgb } from "./types";
import { cssColor } from "./highlight";

/** Stain hue used for similarity coloring. */
export const STAIN_COLOR: Rgb = { r: 255, g: 140, b: 0 };

export const ZERO_QUERY_NOTICE =
  "Query has no signal: every membership degree is 0 under Łukasiewicz negation, so all similarity scores are 0.";

export interface ResultEntry {
  hit: RankedHit;
  rank: number;
  /** Stain opacity in [0, 1]; equals the cosine score. */
  stainOpacity: number;
  stainCss: string;
  /** True when the hit is not among currently rendered cells and the list
   * should offer a "locate" affordance that refocuses the treemap. */
  needsLocate: boolean;
}

export interface ResultsView {
  echo: string;
  notice: string | null;
  entries: ResultEntry[];
  /** Cell stains to paint onto the primary visualization. */
  stains: Map<string, { color: Rgb; opacity: number }>;
}

export function renderResults(
  result: QueryResponse,
  visibleIds: Set<string>,
  stainEnabled: boolean,
): ResultsView {
  const entries = result.hits.map((hit, i) => {
    const opacity = clamp01(hit.score);
    return {
      hit,
      rank: i + 1,
      stainOpacity: opacity,
      stainCss: cssColor(STAIN_COLOR, opacity),
      needsLocate: !visibleIds.has(hit.id),
    };
  });
  const stains = new Map<string, { color: Rgb; opacity: number }>();
  if (stainEnabled && !result.zero_query) {
    for (const e of entries) {
      if (visibleIds.has(e.hit.id)) {
        stains.set(e.hit.id, { color: STAIN_COLOR, opacity: e.stainOpacity });
      }
    }
  }
  return {
    echo: result.echo,
    notice: result.zero_query ? ZERO_QUERY_NOTICE : null,
    entries,
    stains,
  };
}

function clamp01(v: number): number {
  return Math.min(Math.max(v, 0), 1);
}
