/** View models. Every displayed judgment mirrors a server judgment index;
 * the client never computes one. */

import { Certificate, JudgmentView, ProofTableRow } from "./api.js";

export interface JudgmentCard {
  index: number;
  rule: string;
  latex: string;
  text: string;
}

export interface SessionView {
  sessionId: string;
  cards: JudgmentCard[];
  selected: number | null;
}

export function emptySession(sessionId: string): SessionView {
  return { sessionId, cards: [], selected: null };
}

export function appendCard(view: SessionView, judgment: JudgmentView): SessionView {
  const card: JudgmentCard = {
    index: judgment.index,
    rule: judgment.rule,
    latex: judgment.latex,
    text: judgment.text,
  };
  return { ...view, cards: [...view.cards, card], selected: judgment.index };
}

export interface TableRowModel {
  step: number;
  rule: string;
  isReference: boolean;
  requirements: number[];
  judgment: string;
}

/** Rows for the proof-table drill-down; reference proxies render dimmed
 * and link to their real step. */
export function tableModel(rows: ProofTableRow[]): TableRowModel[] {
  return rows.map((row) => ({
    step: row.step,
    rule: row.rule,
    isReference: row.rule === "reference",
    requirements: row.requirements,
    judgment: row.judgment,
  }));
}

/** Every requirement link must resolve to a later row of the same table. */
export function linksResolve(rows: TableRowModel[]): boolean {
  return rows.every((row) =>
    row.requirements.every(
      (target) => target > row.step && target < rows.length,
    ),
  );
}

/** Session step requests that rebuild a certificate bottom-up; reference
 * steps reuse their target's session index. Mirrors the service-side
 * replay helper so scripted console runs match CLI replays exactly. */
export function replayRequests(cert: Certificate): {
  requests: Record<string, unknown>[];
  finalIndex: number;
} {
  const steps = [...cert.steps].sort((a, b) => b.index - a.index);
  const sessionIndex = new Map<number, number>();
  const requests: Record<string, unknown>[] = [];
  let next = 0;
  for (const step of steps) {
    const reqs = step.requirements;
    if (step.rule === "reference") {
      sessionIndex.set(step.index, sessionIndex.get(reqs[0])!);
      continue;
    }
    let request: Record<string, unknown>;
    const payload = step.payload as Record<string, unknown>;
    switch (step.rule) {
      case "assumption":
        request = { assume: step.assumptions[0] };
        break;
      case "axiom_invocation":
      case "theorem_invocation":
        request = { invoke: payload.name };
        break;
      case "modus_ponens":
        request = {
          modus_ponens: {
            implication: sessionIndex.get(reqs[0]),
            antecedent: sessionIndex.get(reqs[1]),
          },
        };
        break;
      case "deduction":
        request = {
          deduce: {
            target: sessionIndex.get(reqs[0]),
            antecedent: payload.antecedent,
          },
        };
        break;
      case "instantiation":
        request = {
          instantiate: {
            target: sessionIndex.get(reqs[0]),
            bindings: payload.bindings ?? [],
            alt_expansions: payload.alt_expansions ?? [],
            layers: payload.layers ?? 1,
            eq_mode: payload.eq_mode ?? "default",
            range_mode: payload.range_mode ?? "auto",
            assumptions: step.assumptions,
          },
        };
        break;
      case "generalization":
        request = {
          generalize: {
            target: sessionIndex.get(reqs[0]),
            parameters: payload.parameters,
            extra_conditions: payload.extra_conditions ?? [],
          },
        };
        break;
      case "literal_generalization":
        request = {
          literal_generalize: {
            target: sessionIndex.get(reqs[0]),
            mapping: payload.mapping,
          },
        };
        break;
      default:
        throw new Error(`cannot replay rule ${step.rule}`);
    }
    sessionIndex.set(step.index, next);
    next += 1;
    requests.push(request);
  }
  return { requests, finalIndex: sessionIndex.get(0)! };
}
