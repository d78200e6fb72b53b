import { describe, expect, it } from "vitest";

import { Certificate } from "../src/api";
import { linksResolve, replayRequests, tableModel } from "../src/model";

describe("tableModel", () => {
  it("marks reference proxies and keeps links", () => {
    const rows = tableModel([
      { step: 0, rule: "modus_ponens", requirements: [1, 2], judgment: "j0" },
      { step: 1, rule: "reference", requirements: [3], judgment: "j1" },
      { step: 2, rule: "deduction", requirements: [3], judgment: "j2" },
      { step: 3, rule: "assumption", requirements: [], judgment: "j3" },
    ]);
    expect(rows[1].isReference).toBe(true);
    expect(linksResolve(rows)).toBe(true);
  });

  it("detects broken links", () => {
    const rows = tableModel([
      { step: 0, rule: "deduction", requirements: [0], judgment: "j0" },
    ]);
    expect(linksResolve(rows)).toBe(false);
  });
});

describe("replayRequests", () => {
  it("rebuilds a certificate bottom-up, reusing reference targets", () => {
    const cert: Certificate = {
      version: 1,
      theory_refs: [],
      digest: "d",
      steps: [
        { index: 0, rule: "modus_ponens", assumptions: [], consequent: "c0",
          requirements: [1, 2], payload: {} },
        { index: 1, rule: "reference", assumptions: [], consequent: "c3",
          requirements: [3], payload: {} },
        { index: 2, rule: "deduction", assumptions: [], consequent: "c2",
          requirements: [3], payload: { antecedent: "a" } },
        { index: 3, rule: "assumption", assumptions: ["a"], consequent: "a",
          requirements: [], payload: {} },
      ],
    };
    const { requests, finalIndex } = replayRequests(cert);
    expect(requests).toEqual([
      { assume: "a" },
      { deduce: { target: 0, antecedent: "a" } },
      // requirement 1 is the reference, which reuses the assumption's index
      { modus_ponens: { implication: 0, antecedent: 1 } },
    ]);
    expect(finalIndex).toBe(2);
  });
});
