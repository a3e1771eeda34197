/** Small display formatters shared by the panels. */

/** Six significant digits, no trailing zeros; '-' for rank-only rows. */
export function formatScore(value: number | null): string {
  if (value === null) return '-';
  return String(Number(value.toPrecision(6)));
}

export function formatDuration(seconds: number | null): string {
  if (seconds === null) return '-';
  if (seconds < 60) return `${seconds.toFixed(2)}s`;
  const m = Math.floor(seconds / 60);
  return `${m}m ${(seconds - 60 * m).toFixed(0)}s`;
}
