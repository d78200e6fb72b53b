import { describe, expect, it } from "vitest";

import { PvkClient } from "../src/api";
import { TacticConsole, buildRequest } from "../src/console";
import { emptySession } from "../src/model";

describe("buildRequest", () => {
  it("builds an assume request from a form", () => {
    expect(buildRequest("assume", { expression: '(Variable "A")' }))
      .toEqual({ assume: '(Variable "A")' });
  });

  it("parses judgment indices", () => {
    expect(buildRequest("modus_ponens", { implication: "1", antecedent: "0" }))
      .toEqual({ modus_ponens: { implication: 1, antecedent: 0 } });
    expect(() => buildRequest("modus_ponens",
      { implication: "x", antecedent: "0" })).toThrow(/judgment index/);
  });

  it("defaults instantiate options", () => {
    const request = buildRequest("instantiate", {
      target: "2",
      bindings: '[["(Variable \\"x\\")", "(Variable \\"y\\")"]]',
    }) as { instantiate: Record<string, unknown> };
    expect(request.instantiate.layers).toBe(1);
    expect(request.instantiate.eq_mode).toBe("default");
    expect(request.instantiate.range_mode).toBe("auto");
    expect(request.instantiate.alt_expansions).toEqual([]);
  });

  it("rejects unknown rules and missing fields", () => {
    expect(() => buildRequest("frobnicate", {})).toThrow(/unknown rule/);
    expect(() => buildRequest("assume", {})).toThrow(/missing field/);
  });
});

function fakeFetch(handler: (path: string, body?: unknown) => unknown): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input);
    let payload: unknown;
    let status = 200;
    try {
      payload = handler(path, init?.body ? JSON.parse(String(init.body)) : undefined);
    } catch (error) {
      status = 422;
      payload = { code: "KernelError", message: String(error), details: {} };
    }
    return {
      ok: status === 200,
      status,
      json: async () => payload,
    } as Response;
  }) as typeof fetch;
}

describe("TacticConsole", () => {
  it("appends a card only after the server confirms", async () => {
    let calls = 0;
    const client = new PvkClient("", fakeFetch((path, body) => {
      if (path.endsWith("/steps")) {
        calls += 1;
        const request = body as { assume?: string };
        if (!request.assume) throw new Error("UnsupportedRule");
        return {
          index: calls - 1, rule: "assumption",
          assumptions: [request.assume], consequent: request.assume,
          text: `{A} |- A`, latex: `\\{A\\} \\vdash A`,
        };
      }
      throw new Error(`unexpected ${path}`);
    }));
    const console_ = new TacticConsole(client, emptySession("s1"));
    const ok = await console_.submit({ assume: '(Variable "A")' });
    expect(ok.kind).toBe("card");
    expect(console_.session.cards).toHaveLength(1);

    const bad = await console_.submit({ invoke: "nope" });
    expect(bad.kind).toBe("diagnostic");
    if (bad.kind === "diagnostic") {
      expect(bad.error.code).toBe("KernelError");
    }
    // the failed step added no card
    expect(console_.session.cards).toHaveLength(1);
  });
});
