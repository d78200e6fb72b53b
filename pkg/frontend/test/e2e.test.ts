/** End-to-end: the excluded-middle replay driven through the tactic
 * console against a live service must reproduce the CLI replay's
 * certificate digest, and every proof-table link must resolve. */

import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PvkClient } from "../src/api";
import { TacticConsole } from "../src/console";
import { emptySession, linksResolve, replayRequests, tableModel } from "../src/model";

const PYTHON = process.env.PVK_PYTHON ?? "python3";
const PORT = 8731;
const BASE = `http://127.0.0.1:${PORT}`;

const FIXTURE_SCRIPT = `
import json, sys
from pvk.theory import Registry, load_stdlib
from pvk.stdlib_defs import numeral_axioms
from pvk import derivations as dv, kernel as kn

out_dir = sys.argv[1]
reg = load_stdlib()
lem = dv.excluded_middle(reg)
cert = kn.export_certificate(lem)

extra = Registry()
for pkg, items in numeral_axioms().items():
    for name, stmt in items:
        extra.register_axiom(pkg, name, stmt)
extra.save(out_dir)
with open(sys.argv[2], "w") as f:
    json.dump(cert, f)
`;

let server: ChildProcess | null = null;
let workDir = "";
let cert: import("../src/api").Certificate;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/rules`);
      if (response.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "pvk-e2e-"));
  const certPath = join(workDir, "lem.pvp");
  const theoryDir = join(workDir, "numerals");
  execFileSync(PYTHON, ["-c", FIXTURE_SCRIPT, theoryDir, certPath],
               { stdio: ["ignore", "inherit", "inherit"] });
  cert = JSON.parse(readFileSync(certPath, "utf-8"));
  server = spawn(PYTHON, ["-m", "pvk.cli", "serve", "--port", String(PORT),
                          "--theories", theoryDir],
                 { stdio: ["ignore", "inherit", "inherit"] });
  await waitForServer();
}, 120000);

afterAll(() => {
  server?.kill();
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe("studio end to end", () => {
  it("console replay matches the CLI certificate digest", async () => {
    const client = new PvkClient(BASE);
    const session = await client.createSession();
    const console_ = new TacticConsole(client, emptySession(session.id));
    const { requests, finalIndex } = replayRequests(cert);
    expect(requests.length).toBeGreaterThan(50);
    for (const request of requests) {
      const outcome = await console_.submit(request);
      expect(outcome.kind).toBe("card");
    }
    expect(console_.session.cards).toHaveLength(requests.length);
    const replayed = await client.getCertificate(session.id, finalIndex);
    expect(replayed.digest).toBe(cert.digest);

    const table = await client.getProofTable(session.id, finalIndex);
    const rows = tableModel(table.rows);
    expect(rows).toHaveLength(cert.steps.length);
    expect(linksResolve(rows)).toBe(true);
    // rendered LaTeX comes from the server byte-identically
    const judgment = await client.getJudgment(session.id, finalIndex);
    expect(judgment.latex).toContain("\\forall");
  }, 120000);

  it("theory browser shows statuses and the inspector mirrors the DAG",
     async () => {
    const client = new PvkClient(BASE);
    const listing = await client.getTheory("logic.booleans");
    expect(listing.items).toHaveLength(5);
    expect(listing.items.every((item) => item.status === "axiom")).toBe(true);
    const inspected = await client.inspect(listing.items[1].statement);
    expect(inspected.rows[0].kind).toBe("Operation");
    expect(inspected.rows.length).toBeGreaterThan(3);
  }, 60000);
});
