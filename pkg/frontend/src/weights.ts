/**
 * Weight panel: four sliders, one per attribute group. Range and step
 * are fixed by the control ([0, 5], step 0.5) so no out-of-range weight
 * can reach the server from here; the server re-validates anyway.
 */

import type { Weights } from './types.js';

export const GROUP_LABELS = [
  'G1 memory & process',
  'G2 local communication',
  'G3 computation',
  'G4 storage',
] as const;

export class WeightPanel {
  readonly sliders: HTMLInputElement[] = [];

  constructor(
    host: HTMLElement,
    initial: Weights,
    onChange: (index: number, value: number) => void,
  ) {
    for (let i = 0; i < 4; i++) {
      const row = document.createElement('label');
      row.className = 'weight-row';

      const name = document.createElement('span');
      name.className = 'weight-name';
      name.textContent = GROUP_LABELS[i];

      const slider = document.createElement('input');
      slider.type = 'range';
      slider.min = '0';
      slider.max = '5';
      slider.step = '0.5';
      slider.value = String(initial[i]);

      const readout = document.createElement('span');
      readout.className = 'weight-value';
      readout.textContent = slider.value;

      slider.addEventListener('input', () => {
        readout.textContent = slider.value;
        onChange(i, Number(slider.value));
      });

      row.append(name, slider, readout);
      host.appendChild(row);
      this.sliders.push(slider);
    }
  }

  values(): Weights {
    return this.sliders.map((s) => Number(s.value)) as Weights;
  }
}
