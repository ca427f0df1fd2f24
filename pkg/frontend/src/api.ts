/** Thin typed client for the backend HTTP API. */

import type { AstNode, InstanceInfo, JobInfo, Neighborhood, QueryResponse, ConceptSummary } from "./types";

export interface ConceptDetails {
  id: string;
  label: string;
  definition: string | null;
  parents: string[];
  children: string[];
  metadata: { depth: number; subtree_size: number; child_count: number; is_leaf: boolean };
}

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
    public extra: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "http://127.0.0.1:8000") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const err = (body as { error?: { code?: string; message?: string } }).error ?? {};
      throw new ApiError(err.code ?? "HttpError", err.message ?? resp.statusText, resp.status, err);
    }
    return body as T;
  }

  listInstances(): Promise<{ instances: InstanceInfo[] }> {
    return this.request("/instances");
  }

  createInstance(body: {
    ontology: string;
    format: "obo" | "json";
    name?: string;
    family?: string;
    embedding?:
      | { mode: "generate"; alpha: number; dim: number; seed: number }
      | { mode: "upload"; data: string };
  }): Promise<{ instance_id: string; job?: JobInfo; ready: boolean }> {
    return this.request("/instances", { method: "POST", body: JSON.stringify(body) });
  }

  getJob(jobId: string): Promise<JobInfo> {
    return this.request(`/jobs/${encodeURIComponent(jobId)}`);
  }

  async waitForJob(jobId: string, pollMs = 250, timeoutMs = 600_000): Promise<JobInfo> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const job = await this.getJob(jobId);
      if (job.state === "done" || job.state === "failed") return job;
      if (Date.now() > deadline) throw new ApiError("Timeout", "job did not finish", 504);
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }

  getConcept(instanceId: string, conceptId: string): Promise<ConceptDetails> {
    return this.request(
      `/instances/${encodeURIComponent(instanceId)}/concepts/${encodeURIComponent(conceptId)}`,
    );
  }

  search(instanceId: string, q: string, limit = 20): Promise<{ hits: ConceptSummary[] }> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return this.request(`/instances/${encodeURIComponent(instanceId)}/search?${params}`);
  }

  neighborhood(instanceId: string, conceptId: string, depth: number): Promise<Neighborhood> {
    const params = new URLSearchParams({ depth: String(depth) });
    return this.request(
      `/instances/${encodeURIComponent(instanceId)}/neighborhood/${encodeURIComponent(conceptId)}?${params}`,
    );
  }

  query(
    instanceId: string,
    body: { expr: string } | { ast: AstNode },
    k: number,
    familyOverride?: string,
  ): Promise<QueryResponse> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (familyOverride) headers["X-Fuzzy-Family"] = familyOverride;
    return this.request(`/instances/${encodeURIComponent(instanceId)}/query?k=${k}`, {
      method: "POST",
      headers,
      body: JSON.stringify(body),
    });
  }
}
