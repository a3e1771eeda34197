/**
 * Status board: polls one run until it settles and renders a badge per
 * host. Polling (default every 2 s) is the whole refresh story -- no
 * manual reload is ever needed to see a run finish.
 */

import { ApiClient, ApiError } from './api.js';
import { formatDuration } from './format.js';
import type { RunBody } from './types.js';

export class StatusBoard {
  private timer: ReturnType<typeof setInterval> | null = null;
  private onSettled: ((run: RunBody) => void) | null = null;

  constructor(
    private api: ApiClient,
    private host: HTMLElement,
    private intervalMs = 2000,
  ) {}

  /** Poll runId until finished; onSettled fires once with the final body. */
  watch(runId: string, onSettled?: (run: RunBody) => void): void {
    this.stop();
    this.onSettled = onSettled ?? null;
    this.host.innerHTML = `<p class="placeholder">Watching run ${runId}…</p>`;
    const tick = () => void this.poll(runId);
    this.timer = setInterval(tick, this.intervalMs);
    tick(); // first paint immediately, then every interval
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private async poll(runId: string): Promise<void> {
    let run: RunBody;
    try {
      run = await this.api.getRun(runId);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.stop();
        this.host.innerHTML = `<p class="error-text">Run ${runId} not found.</p>`;
      }
      return; // transient errors: keep polling
    }
    this.render(run);
    if (run.finished) {
      this.stop();
      this.onSettled?.(run);
      this.onSettled = null;
    }
  }

  private render(run: RunBody): void {
    const rows = Object.entries(run.hosts)
      .map(([hostId, s]) => {
        const reason = s.failure_reason ? ` — ${s.failure_reason}` : '';
        return (
          `<li class="host-row state-${s.state}">` +
          `<span class="badge">${s.state}</span>` +
          `<span class="host-id">${hostId}</span>` +
          `<span class="duration">${formatDuration(s.duration_seconds)}</span>` +
          `<span class="reason">${reason}</span></li>`
        );
      })
      .join('');
    const headline = run.finished
      ? run.succeeded
        ? `finished — dataset ${run.dataset_id}`
        : 'finished with failures'
      : 'running…';
    this.host.innerHTML =
      `<p class="run-headline" data-finished="${run.finished}">` +
      `run ${run.run_id}: ${headline}</p><ul class="host-list">${rows}</ul>`;
  }
}
