/** Shared test scaffolding: DOM nodes and canned API bodies. */

import { ApiClient } from '../src/api.js';
import type { RankTableBody, RunBody } from '../src/types.js';

export function div(): HTMLElement {
  const node = document.createElement('div');
  document.body.appendChild(node);
  return node;
}

export function rankTable(entries: Array<[string, number | null, number]>): RankTableBody {
  return {
    mode: 'lightweight',
    label: '',
    weights: [1, 1, 1, 1],
    dataset_ids: ['d1'],
    entries: entries.map(([vm_id, value, rank]) => ({ vm_id, value, rank })),
  };
}

export function runBody(
  runId: string,
  states: Record<string, string>,
  finished: boolean,
): RunBody {
  const hosts: RunBody['hosts'] = {};
  for (const [id, state] of Object.entries(states)) {
    hosts[id] = {
      state: state as RunBody['hosts'][string]['state'],
      started_at: null,
      finished_at: null,
      duration_seconds: state === 'done' ? 0.05 : null,
      failure_reason: state === 'failed' ? 'exit code 137' : null,
    };
  }
  const allDone = Object.values(states).every((s) => s === 'done');
  return {
    run_id: runId,
    started_at: '2026-08-15T10:00:00+00:00',
    finished_at: finished ? '2026-08-15T10:00:05+00:00' : null,
    finished,
    succeeded: finished && allDone,
    dataset_id: finished && allDone ? runId : null,
    hosts,
  };
}

/**
 * ApiClient whose transport is a queue of canned handlers, one per
 * expected request. Records every (method, url) it sees.
 */
export function cannedClient(
  handlers: Array<(url: string, init?: RequestInit) => Promise<Response>>,
): { client: ApiClient; calls: string[] } {
  const calls: string[] = [];
  let i = 0;
  const client = new ApiClient('', (url, init) => {
    calls.push(`${init?.method ?? 'GET'} ${url}`);
    const handler = handlers[Math.min(i, handlers.length - 1)];
    i += 1;
    return handler(url, init);
  });
  return { client, calls };
}

export function jsonResponse(body: unknown, status = 200): Promise<Response> {
  return Promise.resolve(
    new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    }),
  );
}
