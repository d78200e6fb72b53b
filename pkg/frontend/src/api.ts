/** Typed client for the proving service. All judgments come from the
 * server; nothing here derives or rewrites anything. */

export interface JudgmentView {
  index: number;
  rule: string;
  assumptions: string[];
  consequent: string;
  text: string;
  latex: string;
  requirements_satisfied?: string[];
}

export interface ServiceError {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}

export interface ProofTableRow {
  step: number;
  rule: string;
  requirements: number[];
  judgment: string;
}

export interface Certificate {
  version: number;
  theory_refs: string[];
  digest: string;
  steps: {
    index: number;
    rule: string;
    assumptions: string[];
    consequent: string;
    requirements: number[];
    payload: Record<string, unknown>;
  }[];
}

export interface TheoryItem {
  name: string;
  kind: string;
  status: string;
  statement: string;
  text: string;
  latex: string;
}

export interface TheoryListing {
  path: string;
  items: TheoryItem[];
  subpackages: string[];
}

export interface InspectorRow {
  index: number;
  kind: string;
  subexprs: number[];
  text: string;
  latex: string;
}

export interface RuleSpec {
  rule: string;
  args: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(public payload: ServiceError, public status: number) {
    super(`${payload.code}: ${payload.message}`);
  }
}

export class PvkClient {
  constructor(private base: string, private fetcher: typeof fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetcher(`${this.base}${path}`, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const data = await response.json();
    if (!response.ok) {
      throw new ApiError(data as ServiceError, response.status);
    }
    return data as T;
  }

  createSession(snapshot = "stdlib", presumptions?: string[]): Promise<{ id: string }> {
    return this.request("POST", "/sessions", { snapshot, presumptions: presumptions ?? null });
  }

  applyStep(sessionId: string, step: Record<string, unknown>): Promise<JudgmentView> {
    return this.request("POST", `/sessions/${sessionId}/steps`, step);
  }

  getJudgment(sessionId: string, index: number): Promise<JudgmentView> {
    return this.request("GET", `/sessions/${sessionId}/judgments/${index}`);
  }

  listJudgments(sessionId: string): Promise<JudgmentView[]> {
    return this.request("GET", `/sessions/${sessionId}/judgments`);
  }

  getProofTable(sessionId: string, index: number): Promise<{ rows: ProofTableRow[] }> {
    return this.request(
      "GET",
      `/sessions/${sessionId}/judgments/${index}/proof?format=latex-table`,
    );
  }

  getCertificate(sessionId: string, index: number): Promise<Certificate> {
    return this.request("GET", `/sessions/${sessionId}/judgments/${index}/proof?format=json`);
  }

  getTheory(path: string): Promise<TheoryListing> {
    return this.request("GET", `/theories/${path}`);
  }

  getRules(): Promise<RuleSpec[]> {
    return this.request("GET", "/rules");
  }

  inspect(expression: string): Promise<{ rows: InspectorRow[] }> {
    return this.request("POST", "/expressions/inspect", { expression });
  }
}
