/**
 * Ranked-table panel: holds the what-if state (dataset, weights, mode,
 * staleness bound), queries /rankings, and renders the result.
 *
 * Concurrency contract: at most one request in flight. Every state
 * change aborts the previous request and issues exactly one new one;
 * a stale response that still arrives is dropped (latest wins). On
 * failure the last good table stays on screen under an error banner.
 */

import { ApiClient, ApiError } from './api.js';
import { formatScore } from './format.js';
import type { RankMode, RankTableBody, Weights } from './types.js';

export class RankingsController {
  private seq = 0;
  private inflight: AbortController | null = null;
  private lastGood: RankTableBody | null = null;

  weights: Weights = [1, 1, 1, 1];
  mode: RankMode = 'lightweight';
  maxAgeDays = 30;
  dataset: string | null = null;

  constructor(
    private api: ApiClient,
    private tableHost: HTMLElement,
    private banner: HTMLElement,
  ) {
    this.renderEmpty();
  }

  /** The table currently on screen (for tests and other panels). */
  get current(): RankTableBody | null {
    return this.lastGood;
  }

  setDataset(datasetId: string | null): Promise<void> {
    this.dataset = datasetId;
    return this.refresh();
  }

  setWeight(index: number, value: number): Promise<void> {
    this.weights[index] = value;
    return this.refresh();
  }

  setMode(mode: RankMode): Promise<void> {
    this.mode = mode;
    return this.refresh();
  }

  setMaxAgeDays(days: number): Promise<void> {
    this.maxAgeDays = days;
    return this.refresh();
  }

  /** Re-query /rankings for the current state; resolves when settled. */
  async refresh(): Promise<void> {
    if (this.dataset === null) {
      this.renderEmpty();
      return;
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const mySeq = ++this.seq;
    try {
      const table = await this.api.getRankings(
        {
          dataset: this.dataset,
          weights: this.weights,
          mode: this.mode,
          maxAgeDays: this.maxAgeDays,
        },
        controller.signal,
      );
      if (mySeq !== this.seq) return; // a newer request superseded this one
      this.lastGood = table;
      this.hideBanner();
      this.renderTable(table);
    } catch (err) {
      if (controller.signal.aborted || mySeq !== this.seq) return;
      this.showBanner(describeError(err));
    }
  }

  private renderEmpty(): void {
    this.tableHost.innerHTML = '<p class="placeholder">Select a dataset to rank.</p>';
  }

  private renderTable(table: RankTableBody): void {
    const caption =
      `mode=${table.mode}` +
      (table.weights ? ` weights={${table.weights.join(',')}}` : '') +
      (table.dataset_ids.length ? ` datasets=${table.dataset_ids.join(',')}` : '');
    const rows = table.entries
      .map((e) => {
        const cls = e.rank <= 3 ? ' class="top3"' : '';
        return (
          `<tr${cls}><td class="rank">${e.rank}</td>` +
          `<td class="vm">${e.vm_id}</td>` +
          `<td class="score">${formatScore(e.value)}</td></tr>`
        );
      })
      .join('');
    this.tableHost.innerHTML =
      `<p class="table-caption">${caption}</p>` +
      '<table class="rank-table"><thead><tr>' +
      '<th>rank</th><th>VM</th><th>score</th>' +
      `</tr></thead><tbody>${rows}</tbody></table>`;
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.classList.remove('hidden');
  }

  private hideBanner(): void {
    this.banner.textContent = '';
    this.banner.classList.add('hidden');
  }
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    if (err.code === 'no-eligible-historic') {
      return `No eligible historic dataset: ${err.message}. ` +
        'Switch to the lightweight method or relax the max-age bound.';
    }
    return `Ranking failed (${err.code}): ${err.message}`;
  }
  return `Ranking failed: ${err instanceof Error ? err.message : String(err)}`;
}
