/**
 * Thin typed client over the service's HTTP interface.
 * Errors arrive as {code, message} bodies; both fields are kept so the
 * UI can branch on the code and show the message verbatim.
 */

import type { DatasetEntry, RankingsQuery, RankTableBody, RunBody, RunRequest } from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function raise(resp: Response): Promise<never> {
  let code = 'http-error';
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (body && typeof body.code === 'string') code = body.code;
    if (body && typeof body.message === 'string') message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(resp.status, code, message);
}

export class ApiClient {
  constructor(
    private baseUrl = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, { signal });
    if (!resp.ok) await raise(resp);
    return resp.json() as Promise<T>;
  }

  health(): Promise<{ status: string }> {
    return this.getJson('/health');
  }

  async createRun(req: RunRequest): Promise<{ run_id: string }> {
    const resp = await this.fetchImpl(this.baseUrl + '/runs', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(req),
    });
    if (!resp.ok) await raise(resp);
    return resp.json();
  }

  getRun(runId: string): Promise<RunBody> {
    return this.getJson(`/runs/${encodeURIComponent(runId)}`);
  }

  getRankings(query: RankingsQuery, signal?: AbortSignal): Promise<RankTableBody> {
    const params = new URLSearchParams({
      dataset: query.dataset,
      weights: query.weights.join(','),
      mode: query.mode,
      max_age_days: String(query.maxAgeDays),
    });
    return this.getJson(`/rankings?${params}`, signal);
  }

  async listDatasets(limit = 50): Promise<DatasetEntry[]> {
    const body = await this.getJson<{ total: number; datasets: DatasetEntry[] }>(
      `/datasets?limit=${limit}`,
    );
    return body.datasets;
  }
}
