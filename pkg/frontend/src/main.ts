/**
 * Console bootstrap: wires the four panels to the API of the host that
 * served this page. Launch a run on the left, watch it settle, then
 * play what-if with the weight sliders on the right.
 */

import { ApiClient } from './api.js';
import { RunLauncher } from './launcher.js';
import { RankingsController } from './rankings.js';
import { StatusBoard } from './status.js';
import { WeightPanel } from './weights.js';
import type { RankMode } from './types.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function bootstrap(api = new ApiClient()): void {
  const rankings = new RankingsController(api, el('rank-table'), el('rank-banner'));
  new WeightPanel(el('weight-panel'), rankings.weights, (i, v) => void rankings.setWeight(i, v));

  // Dataset picker: newest first, refreshed after every finished run.
  const datasetSelect = el<HTMLSelectElement>('dataset-select');
  async function reloadDatasets(selectId?: string): Promise<void> {
    const datasets = await api.listDatasets();
    datasetSelect.innerHTML =
      '<option value="">— pick a dataset —</option>' +
      datasets
        .map(
          (d) =>
            `<option value="${d.dataset_id}">` +
            `${d.dataset_id} (${d.memory_mib} MiB, ${d.cpu_mode})</option>`,
        )
        .join('');
    if (selectId) {
      datasetSelect.value = selectId;
      await rankings.setDataset(selectId);
    }
  }
  datasetSelect.addEventListener('change', () => {
    void rankings.setDataset(datasetSelect.value || null);
  });

  // Method toggle; the max-age bound only matters for hybrid.
  const maxAge = el<HTMLInputElement>('max-age');
  for (const radio of document.querySelectorAll<HTMLInputElement>('input[name="mode"]')) {
    radio.addEventListener('change', () => {
      if (radio.checked) void rankings.setMode(radio.value as RankMode);
    });
  }
  maxAge.addEventListener('change', () => {
    const days = Number(maxAge.value);
    if (days > 0) void rankings.setMaxAgeDays(days);
  });

  const board = new StatusBoard(api, el('status-board'));
  new RunLauncher(el('launcher'), api, (runId) => {
    board.watch(runId, (run) => {
      // When the campaign settles, surface its dataset for ranking.
      if (run.succeeded && run.dataset_id) void reloadDatasets(run.dataset_id);
    });
  });

  void reloadDatasets();
}

if (typeof document !== 'undefined' && document.getElementById('weight-panel')) {
  bootstrap();
}
