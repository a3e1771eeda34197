/**
 * Run launcher: host list, container size (presets or custom), CPU mode.
 * Submits POST /runs and hands the run id to the status board. API
 * rejections (400 validation, 409 duplicate run) land next to the form.
 */

import { ApiClient, ApiError } from './api.js';
import type { CpuMode, HostSpec } from './types.js';

export const MEMORY_PRESETS_MIB = [100, 500, 1000] as const;

export class RunLauncher {
  readonly memoryInput: HTMLInputElement;
  readonly hostsInput: HTMLTextAreaElement;
  readonly cpuSelect: HTMLSelectElement;
  readonly runIdInput: HTMLInputElement;
  readonly errorBox: HTMLElement;
  private button: HTMLButtonElement;

  constructor(
    host: HTMLElement,
    private api: ApiClient,
    private onLaunched: (runId: string) => void,
  ) {
    host.innerHTML = `
      <label class="field">hosts (one id per line, or inventory=PATH)
        <textarea class="hosts" rows="4" placeholder="m1.xlarge\nm3.xlarge"></textarea>
      </label>
      <div class="field presets">
        ${MEMORY_PRESETS_MIB.map(
          (m) => `<button type="button" class="preset" data-mib="${m}">${m} MiB</button>`,
        ).join('')}
        <input class="memory" type="number" min="4" value="100" /> MiB
      </div>
      <label class="field">CPU mode
        <select class="cpu-mode">
          <option value="single-core">single-core</option>
          <option value="all-cores">all-cores</option>
        </select>
      </label>
      <label class="field">run id (optional)
        <input class="run-id" type="text" placeholder="auto" />
      </label>
      <button type="button" class="launch">Launch run</button>
      <p class="form-error hidden"></p>`;

    this.hostsInput = host.querySelector('.hosts') as HTMLTextAreaElement;
    this.memoryInput = host.querySelector('.memory') as HTMLInputElement;
    this.cpuSelect = host.querySelector('.cpu-mode') as HTMLSelectElement;
    this.runIdInput = host.querySelector('.run-id') as HTMLInputElement;
    this.errorBox = host.querySelector('.form-error') as HTMLElement;
    this.button = host.querySelector('.launch') as HTMLButtonElement;

    for (const preset of host.querySelectorAll<HTMLButtonElement>('.preset')) {
      preset.addEventListener('click', () => {
        this.memoryInput.value = preset.dataset.mib ?? '100';
      });
    }
    this.button.addEventListener('click', () => void this.submit());
  }

  /** One host per line: bare ids, or a single "inventory=/path" line. */
  parseHosts(): { hosts?: HostSpec[]; inventory?: string } {
    const lines = this.hostsInput.value
      .split('\n')
      .map((l) => l.trim())
      .filter((l) => l.length > 0);
    if (lines.length === 1 && lines[0].startsWith('inventory=')) {
      return { inventory: lines[0].slice('inventory='.length) };
    }
    return { hosts: lines.map((id) => ({ id })) };
  }

  async submit(): Promise<void> {
    this.hideError();
    const memory = Number(this.memoryInput.value);
    if (!Number.isInteger(memory) || memory < 4) {
      this.showError('memory must be an integer of at least 4 MiB');
      return;
    }
    const target = this.parseHosts();
    if (!target.inventory && target.hosts!.length === 0) {
      this.showError('list at least one host id');
      return;
    }
    this.button.disabled = true;
    try {
      const { run_id } = await this.api.createRun({
        ...target,
        memory_mib: memory,
        cpu_mode: this.cpuSelect.value as CpuMode,
        ...(this.runIdInput.value.trim() ? { run_id: this.runIdInput.value.trim() } : {}),
      });
      this.onLaunched(run_id);
    } catch (err) {
      if (err instanceof ApiError && err.code === 'duplicate-run') {
        this.showError(`Conflict: ${err.message}`);
      } else if (err instanceof ApiError) {
        this.showError(err.message);
      } else {
        this.showError(err instanceof Error ? err.message : String(err));
      }
    } finally {
      this.button.disabled = false;
    }
  }

  private showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.classList.remove('hidden');
  }

  private hideError(): void {
    this.errorBox.textContent = '';
    this.errorBox.classList.add('hidden');
  }
}
