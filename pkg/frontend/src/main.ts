/** DOM wiring for the studio: a tactic console on the left, judgment
 * cards in the middle, and drill-down panes (proof table, expression
 * inspector, theory browser) on the right. */

import { PvkClient, RuleSpec } from "./api.js";
import { TacticConsole } from "./console.js";
import { emptySession, linksResolve, tableModel } from "./model.js";
import { escapeHtml, mathHtml } from "./render.js";

const client = new PvkClient("");
let console_: TacticConsole | null = null;
let rules: RuleSpec[] = [];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function ruleFields(rule: string): string[] {
  switch (rule) {
    case "assume": return ["expression"];
    case "invoke": return ["name"];
    case "modus_ponens": return ["implication", "antecedent"];
    case "deduce": return ["target", "antecedent"];
    case "instantiate":
      return ["target", "bindings", "alt_expansions", "layers", "eq_mode",
              "range_mode", "assumptions"];
    case "generalize": return ["target", "parameters", "extra_conditions"];
    case "literal_generalize": return ["target", "mapping"];
    default: return [];
  }
}

function renderForm(): void {
  const rule = (el<HTMLSelectElement>("rule-select")).value;
  const holder = el<HTMLDivElement>("rule-fields");
  holder.innerHTML = "";
  for (const field of ruleFields(rule)) {
    const label = document.createElement("label");
    label.textContent = field;
    const input = document.createElement("input");
    input.name = field;
    input.id = `field-${field}`;
    label.appendChild(input);
    holder.appendChild(label);
  }
}

function banner(message: string, isError: boolean): void {
  const node = el<HTMLDivElement>("banner");
  node.textContent = message;
  node.className = isError ? "banner error" : "banner";
}

async function submitStep(): Promise<void> {
  if (!console_) return;
  const rule = (el<HTMLSelectElement>("rule-select")).value;
  const fields: Record<string, string> = {};
  for (const field of ruleFields(rule)) {
    fields[field] = (el<HTMLInputElement>(`field-${field}`)).value;
  }
  try {
    const outcome = await console_.submitForm(rule, fields);
    if (outcome.kind === "diagnostic") {
      banner(`${outcome.error.code}: ${outcome.error.message}`, true);
      return;
    }
    banner("", false);
    const cards = el<HTMLDivElement>("cards");
    const card = document.createElement("div");
    card.className = "card";
    const j = outcome.judgment;
    card.innerHTML =
      `<span class="idx">${j.index}</span>` +
      `<span class="rule">${escapeHtml(j.rule)}</span>` +
      `<span class="judgment">${mathHtml(j.latex)}</span>` +
      `<button data-index="${j.index}" class="drill">proof</button>`;
    card.querySelector<HTMLButtonElement>(".drill")!
      .addEventListener("click", () => showProof(j.index));
    cards.appendChild(card);
  } catch (error) {
    banner(String(error), true);
  }
}

async function showProof(index: number): Promise<void> {
  if (!console_) return;
  const table = await client.getProofTable(console_.session.sessionId, index);
  const rows = tableModel(table.rows);
  const holder = el<HTMLDivElement>("proof-table");
  const ok = linksResolve(rows);
  const body = rows.map((row) => {
    const links = row.requirements
      .map((r) => `<a href="#step-${r}">${r}</a>`)
      .join(", ");
    const cls = row.isReference ? "proof-row reference" : "proof-row";
    return `<tr id="step-${row.step}" class="${cls}">` +
      `<td>${row.step}</td><td>${escapeHtml(row.rule)}</td>` +
      `<td>${links}</td><td>${mathHtml(row.judgment)}</td></tr>`;
  }).join("");
  holder.innerHTML =
    `<p>${rows.length} steps; links ${ok ? "resolve" : "BROKEN"}</p>` +
    `<table><tr><th>step</th><th>rule</th><th>requires</th>` +
    `<th>judgment</th></tr>${body}</table>`;
}

async function inspectExpression(): Promise<void> {
  const text = el<HTMLTextAreaElement>("inspect-input").value.trim();
  if (!text) return;
  try {
    const result = await client.inspect(text);
    const holder = el<HTMLDivElement>("inspector");
    holder.innerHTML = "<table><tr><th>#</th><th>core type</th>" +
      "<th>expression</th><th>sub-expressions</th></tr>" +
      result.rows.map((row) =>
        `<tr><td>${row.index}</td><td>${escapeHtml(row.kind)}</td>` +
        `<td>${mathHtml(row.latex)}</td>` +
        `<td>${row.subexprs.join(", ")}</td></tr>`).join("") +
      "</table>";
  } catch (error) {
    banner(String(error), true);
  }
}

async function browseTheory(path: string): Promise<void> {
  try {
    const listing = await client.getTheory(path);
    const holder = el<HTMLDivElement>("theory");
    const subs = listing.subpackages.map(
      (p) => `<a href="#" data-path="${p}" class="pkg">${p}</a>`).join(" ");
    const items = listing.items.map((item) => {
      const badge = item.status === "conjecture"
        ? '<span class="badge conjecture">conjecture</span>' :
        `<span class="badge">${escapeHtml(item.status)}</span>`;
      return `<li>${escapeHtml(item.name)} ${badge} ${mathHtml(item.latex)}</li>`;
    }).join("");
    holder.innerHTML = `<p>${escapeHtml(path)}</p><p>${subs}</p><ul>${items}</ul>`;
    holder.querySelectorAll<HTMLAnchorElement>(".pkg").forEach((link) =>
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void browseTheory(link.dataset.path!);
      }));
  } catch (error) {
    banner(String(error), true);
  }
}

async function boot(): Promise<void> {
  const session = await client.createSession();
  console_ = new TacticConsole(client, emptySession(session.id));
  rules = await client.getRules();
  const select = el<HTMLSelectElement>("rule-select");
  select.innerHTML = rules
    .map((r) => `<option value="${r.rule}">${r.rule}</option>`)
    .join("");
  select.addEventListener("change", renderForm);
  renderForm();
  el<HTMLButtonElement>("submit-step").addEventListener("click",
    () => void submitStep());
  el<HTMLButtonElement>("inspect-btn").addEventListener("click",
    () => void inspectExpression());
  el<HTMLButtonElement>("browse-btn").addEventListener("click",
    () => void browseTheory(el<HTMLInputElement>("theory-path").value));
  banner(`session ${session.id}`, false);
}

window.addEventListener("DOMContentLoaded", () => void boot());
