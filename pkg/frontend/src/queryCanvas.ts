/**
 * Drag-and-drop query canvas model.
 *
 * The canvas holds concept chips, operator groups (AND/OR/NOT), and nested
 * groups. Serialization produces the same AST JSON the backend's text parser
 * would emit for the equivalent expression: n-ary AND/OR with same-operator
 * children spliced in, NOT unary. The echo text mirrors the backend's
 * canonical formatting (minimal parentheses, NOT > AND > OR).
 */

import type { AstNode } from "./types";

export type CanvasItem =
  | { kind: "chip"; id: string; label: string }
  | { kind: "group"; op: "and" | "or"; items: CanvasItem[] }
  | { kind: "not"; item: CanvasItem };

export class CanvasValidationError extends Error {}

function itemToNode(item: CanvasItem): AstNode {
  if (item.kind === "chip") {
    if (!item.id) throw new CanvasValidationError("chip without a concept id");
    return { op: "ref", id: item.id };
  }
  if (item.kind === "not") {
    return { op: "not", children: [itemToNode(item.item)] };
  }
  if (item.items.length < 2) {
    throw new CanvasValidationError(
      `${item.op.toUpperCase()} group needs at least two operands, has ${item.items.length}`,
    );
  }
  const children: AstNode[] = [];
  for (const sub of item.items) {
    const node = itemToNode(sub);
    if (node.op === item.op) children.push(...(node as { children: AstNode[] }).children);
    else children.push(node);
  }
  return { op: item.op, children };
}

const PRECEDENCE: Record<AstNode["op"], number> = { or: 1, and: 2, not: 3, ref: 4 };

function fmt(node: AstNode, context: number): string {
  let text: string;
  if (node.op === "ref") return node.id;
  if (node.op === "not") text = `NOT ${fmt(node.children[0], PRECEDENCE.not)}`;
  else text = node.children.map((c) => fmt(c, PRECEDENCE[node.op])).join(` ${node.op.toUpperCase()} `);
  return PRECEDENCE[node.op] < context ? `(${text})` : text;
}

export function formatNode(node: AstNode): string {
  return fmt(node, 0);
}

export interface CanvasSync {
  ast: AstNode;
  echo: string;
}

/** Serialize the canvas for POST /query; throws CanvasValidationError on
 * arity violations so the UI can flag the offending group inline. */
export function syncQueryCanvas(rootItem: CanvasItem): CanvasSync {
  const ast = itemToNode(rootItem);
  return { ast, echo: formatNode(ast) };
}
