/** The tactic console: turns rule forms into server requests and appends
 * a judgment card only after the server confirms. Diagnostics surface
 * verbatim; a failed step changes nothing. */

import { ApiError, JudgmentView, PvkClient, ServiceError } from "./api.js";
import { SessionView, appendCard } from "./model.js";

export type ConsoleOutcome =
  | { kind: "card"; judgment: JudgmentView; view: SessionView }
  | { kind: "diagnostic"; error: ServiceError; view: SessionView };

/** Shape-only validation of a rule form; the server owns all semantics. */
export function buildRequest(
  rule: string,
  fields: Record<string, string>,
): Record<string, unknown> {
  const need = (name: string): string => {
    const value = (fields[name] ?? "").trim();
    if (!value) throw new Error(`missing field ${name}`);
    return value;
  };
  const index = (name: string): number => {
    const value = Number(need(name));
    if (!Number.isInteger(value) || value < 0) {
      throw new Error(`${name} must be a judgment index`);
    }
    return value;
  };
  const jsonList = (name: string): unknown[] => {
    const raw = (fields[name] ?? "").trim();
    if (!raw) return [];
    const parsed = JSON.parse(raw);
    if (!Array.isArray(parsed)) throw new Error(`${name} must be a JSON list`);
    return parsed;
  };
  switch (rule) {
    case "assume":
      return { assume: need("expression") };
    case "invoke":
      return { invoke: need("name") };
    case "modus_ponens":
      return {
        modus_ponens: {
          implication: index("implication"),
          antecedent: index("antecedent"),
        },
      };
    case "deduce":
      return {
        deduce: { target: index("target"), antecedent: need("antecedent") },
      };
    case "instantiate":
      return {
        instantiate: {
          target: index("target"),
          bindings: jsonList("bindings"),
          alt_expansions: jsonList("alt_expansions"),
          layers: fields.layers ? Number(fields.layers) : 1,
          eq_mode: fields.eq_mode || "default",
          range_mode: fields.range_mode || "auto",
          assumptions: jsonList("assumptions"),
        },
      };
    case "generalize":
      return {
        generalize: {
          target: index("target"),
          parameters: jsonList("parameters"),
          extra_conditions: jsonList("extra_conditions"),
        },
      };
    case "literal_generalize":
      return {
        literal_generalize: {
          target: index("target"),
          mapping: jsonList("mapping"),
        },
      };
    default:
      throw new Error(`unknown rule ${rule}`);
  }
}

export class TacticConsole {
  constructor(private client: PvkClient, private view: SessionView) {}

  get session(): SessionView {
    return this.view;
  }

  async submit(request: Record<string, unknown>): Promise<ConsoleOutcome> {
    try {
      const judgment = await this.client.applyStep(this.view.sessionId, request);
      this.view = appendCard(this.view, judgment);
      return { kind: "card", judgment, view: this.view };
    } catch (error) {
      if (error instanceof ApiError) {
        return { kind: "diagnostic", error: error.payload, view: this.view };
      }
      throw error;
    }
  }

  async submitForm(rule: string, fields: Record<string, string>): Promise<ConsoleOutcome> {
    return this.submit(buildRequest(rule, fields));
  }
}
